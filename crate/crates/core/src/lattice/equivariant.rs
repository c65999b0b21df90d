//! The equivariant 1-point function `Z(v(λ), h, τ)` for lifts `h` of lattice
//! automorphisms described by a pair `(ξ, a)`.

use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use serde::Deserialize;

use super::{integer_kernel, Lattice, LatticeJson};
use crate::error::{Error, Result};
use crate::modular::{eta, r64, theta, with_headroom};
use crate::qseries::{frac, int, parse_fraction, RationalSeries};

/// Frame shape `∏ η(a_i τ)^{m_i}`; multiplicities may be negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleShape(Vec<(i64, i64)>);

impl CycleShape {
    pub fn new(parts: Vec<(i64, i64)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(a, m) in &parts {
            if a <= 0 || m == 0 {
                return Err(Error::InvalidArgument(format!(
                    "cycle shape entries need a > 0 and m ≠ 0, got ({a}, {m})"
                )));
            }
            if !seen.insert(a) {
                return Err(Error::InvalidArgument(format!("cycle length {a} repeated")));
            }
        }
        Ok(CycleShape(parts))
    }

    pub fn parts(&self) -> &[(i64, i64)] {
        &self.0
    }

    /// `Σ a_i m_i`, the rank the shape describes.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(a, m)| a * m).sum()
    }
}

/// The sublattice fixed by `-a`, with its basis written in ambient coordinates
/// (one row per basis vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSublattice {
    pub lattice: Lattice,
    pub embedding: Vec<Vec<i64>>,
}

impl FixedSublattice {
    /// Checks the embedding against both Gram matrices.
    pub fn new(lattice: Lattice, embedding: Vec<Vec<i64>>, ambient: &Lattice) -> Result<Self> {
        if embedding.len() != lattice.rank() || embedding.iter().any(|r| r.len() != ambient.rank()) {
            return Err(Error::Lattice(format!(
                "embedding must be {}×{}",
                lattice.rank(),
                ambient.rank()
            )));
        }
        for i in 0..lattice.rank() {
            for j in 0..lattice.rank() {
                if ambient.inner(&embedding[i], &embedding[j]) != lattice.gram()[i][j] {
                    return Err(Error::Lattice(format!(
                        "embedding does not reproduce the sublattice Gram entry ({i}, {j})"
                    )));
                }
            }
        }
        Ok(FixedSublattice { lattice, embedding })
    }

    fn to_ambient(&self, v: &[i64]) -> Vec<i64> {
        let n = self.embedding.first().map_or(0, Vec::len);
        let mut out = vec![0i64; n];
        for (c, row) in v.iter().zip(&self.embedding) {
            for (o, e) in out.iter_mut().zip(row) {
                *o += c * e;
            }
        }
        out
    }
}

/// Fixed sublattice of `-a` for an automorphism matrix `a` acting on ambient
/// coordinate columns, i.e. the integer kernel of `a + I`.
pub fn fixed_sublattice_of(ambient: &Lattice, a: &[Vec<i64>]) -> Result<FixedSublattice> {
    let n = ambient.rank();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Lattice(format!("automorphism must be {n}×{n}")));
    }
    // aᵀ G a = G
    for i in 0..n {
        for j in 0..n {
            let col_i: Vec<i64> = (0..n).map(|k| a[k][i]).collect();
            let col_j: Vec<i64> = (0..n).map(|k| a[k][j]).collect();
            if ambient.inner(&col_i, &col_j) != ambient.gram()[i][j] {
                return Err(Error::Lattice("matrix does not preserve the Gram form".into()));
            }
        }
    }
    let mut m = a.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] += 1;
    }
    let basis = integer_kernel(&m, n)?;
    let gram = basis
        .iter()
        .map(|x| basis.iter().map(|y| ambient.inner(x, y)).collect())
        .collect();
    FixedSublattice::new(Lattice::new(gram)?, basis, ambient)
}

/// Inputs of the equivariant trace.
#[derive(Clone, Debug)]
pub struct EquivariantSpec {
    pub ambient: Lattice,
    pub fixed: FixedSublattice,
    pub xi: Vec<BigRational>,
    pub alpha: Vec<i64>,
    pub tr_t: BigRational,
    pub shape_a: CycleShape,
    pub shape_minus_a: CycleShape,
}

/// `(-1)^{2t}` for half-integral `t`.
fn half_integral_sign(t: &BigRational, what: &str) -> Result<i64> {
    let twice = t * int(2);
    if !twice.is_integer() {
        return Err(Error::Lattice(format!("{what} = {t} is not half-integral")));
    }
    Ok(if twice.to_integer() % 2 == num_bigint::BigInt::zero() { 1 } else { -1 })
}

impl EquivariantSpec {
    pub fn new(
        ambient: Lattice,
        fixed: FixedSublattice,
        xi: Vec<BigRational>,
        alpha: Vec<i64>,
        tr_t: BigRational,
        shape_a: CycleShape,
        shape_minus_a: CycleShape,
    ) -> Result<Self> {
        let n = ambient.rank();
        if xi.len() != n || alpha.len() != n {
            return Err(Error::Lattice(format!("xi and alpha need {n} coordinates")));
        }
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            half_integral_sign(&ambient.inner_rational(&xi, &e), "⟨ξ, basis vector⟩")?;
        }
        for (i, delta) in fixed.embedding.iter().enumerate() {
            if ambient.inner(&alpha, delta) != 0 {
                return Err(Error::Lattice(format!("alpha is not orthogonal to fixed basis vector {i}")));
            }
        }
        Ok(EquivariantSpec { ambient, fixed, xi, alpha, tr_t, shape_a, shape_minus_a })
    }

    /// The case `a = 1`: the fixed sublattice of `-a` is zero, `ξ = 0`,
    /// `tr_T = 2^12`, shapes `1^24` and `1^{-24}2^{24}`.
    pub fn identity(ambient: Lattice, alpha: Vec<i64>) -> Result<Self> {
        let n = ambient.rank();
        let fixed = FixedSublattice::new(Lattice::new(Vec::new())?, Vec::new(), &ambient)?;
        EquivariantSpec::new(
            ambient,
            fixed,
            vec![BigRational::zero(); n],
            alpha,
            int(4096),
            CycleShape::new(vec![(1, 24)])?,
            CycleShape::new(vec![(1, -24), (2, 24)])?,
        )
    }

    /// `e^{2πi⟨ξ,α⟩} ∈ {±1}`.
    pub fn alpha_phase(&self) -> Result<i64> {
        half_integral_sign(&self.ambient.inner_rational(&self.xi, &self.alpha), "⟨ξ, α⟩")
    }

    /// Parses the JSON spec format. `ambient` is an inline lattice or one of
    /// `"leech"`, `"e8"`, and defaults to the Leech lattice; the fixed sublattice is given either inline (with
    /// its embedding) or through an automorphism matrix.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: SpecJson = serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        let ambient = match j.ambient.unwrap_or(AmbientJson::Named("leech".into())) {
            AmbientJson::Named(name) => match name.as_str() {
                "leech" => Lattice::leech(),
                "e8" => Lattice::e8(),
                _ => return Err(Error::Input(format!("unknown lattice name {name:?}"))),
            },
            AmbientJson::Inline(l) => Lattice::from_json(l)?,
        };
        let fixed = match (j.fixed_sublattice, j.automorphism) {
            (Some(f), None) => {
                let lat = Lattice::from_json(LatticeJson { rank: f.rank, gram: f.gram })?;
                FixedSublattice::new(lat, f.embedding, &ambient)?
            }
            (None, Some(a)) => fixed_sublattice_of(&ambient, &a)?,
            _ => {
                return Err(Error::Input(
                    "give exactly one of fixed_sublattice and automorphism".into(),
                ))
            }
        };
        let xi = j.xi.iter().map(|x| parse_fraction(x)).collect::<Result<Vec<_>>>()?;
        let shape = |v: Vec<[i64; 2]>| CycleShape::new(v.into_iter().map(|[a, m]| (a, m)).collect());
        EquivariantSpec::new(
            ambient,
            fixed,
            xi,
            j.alpha,
            parse_fraction(&j.tr_t)?,
            shape(j.shape_a)?,
            shape(j.shape_minus_a)?,
        )
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AmbientJson {
    Named(String),
    Inline(LatticeJson),
}

#[derive(Deserialize)]
struct FixedJson {
    rank: usize,
    gram: Vec<Vec<i64>>,
    embedding: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecJson {
    #[serde(default)]
    ambient: Option<AmbientJson>,
    #[serde(default)]
    fixed_sublattice: Option<FixedJson>,
    #[serde(default)]
    automorphism: Option<Vec<Vec<i64>>>,
    xi: Vec<String>,
    alpha: Vec<i64>,
    #[serde(rename = "trT")]
    tr_t: String,
    shape_a: Vec<[i64; 2]>,
    shape_minus_a: Vec<[i64; 2]>,
}

/// `θ_{ξ,-a} = Σ_{γ: aγ = -γ} e^{2πi⟨ξ,γ⟩} q^{⟨γ,γ⟩/2}` known below `q^order`.
pub fn twisted_theta(spec: &EquivariantSpec, order: i64) -> Result<RationalSeries> {
    let target = r64(order);
    if order <= 0 {
        return Ok(RationalSeries::zero_to(target));
    }
    let sub = &spec.fixed.lattice;
    let mut terms = Vec::new();
    for v in sub.enumerate_vectors(2 * order - 1) {
        let amb = spec.fixed.to_ambient(&v);
        let sign = half_integral_sign(&spec.ambient.inner_rational(&spec.xi, &amb), "⟨ξ, γ⟩")?;
        terms.push((Rational64::new(sub.norm(&v), 2), int(sign)));
    }
    let mut acc = RationalSeries::zero_to(target);
    for (e, c) in terms {
        acc = acc.add(&RationalSeries::monomial(c, e));
    }
    Ok(acc)
}

/// `∏ η(a_i·scale·τ)^{m_i}` known below `q^order`.
pub fn eta_product(shape: &CycleShape, scale: Rational64, order: i64) -> Result<RationalSeries> {
    if scale <= r64(0) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
    }
    with_headroom(r64(order), |m| {
        let base = eta(m);
        let mut acc = RationalSeries::one();
        for &(a, mult) in shape.parts() {
            acc = acc.mul(&base.rescale(scale * r64(a))?.pow_int(mult)?);
        }
        Ok(acc)
    })
}

/// `Z(v(λ), h, τ) = e^{2πi⟨ξ,α⟩} θ_{ξ,-a}/η_{-a} (Θ_1/2)^L
///   + tr_T(h) (η_a(τ)/η_a(τ/2) (Θ_2/2)^L - η_{-a}(τ)/η_{-a}(τ/2) (Θ_3/2)^L)`
/// with `L = ⟨λ,λ⟩ = 4⟨α,α⟩`.
pub fn equivariant_z(spec: &EquivariantSpec, norm: i64, order: i64) -> Result<RationalSeries> {
    let alpha_norm = spec.ambient.norm(&spec.alpha);
    if 4 * alpha_norm != norm {
        return Err(Error::InvalidArgument(format!(
            "norm {norm} is not 4⟨α,α⟩ = {}",
            4 * alpha_norm
        )));
    }
    let phase = int(spec.alpha_phase()?);
    let target = r64(order);
    let half = Rational64::new(1, 2);
    with_headroom(target, |m| {
        let th = |i: u8| -> Result<RationalSeries> { theta(i, m)?.scale(&frac(1, 2)).pow_int(norm) };
        let eta_minus = eta_product(&spec.shape_minus_a, r64(1), m)?;
        let first = twisted_theta(spec, m)?
            .mul(&eta_minus.invert()?)
            .mul(&th(1)?)
            .scale(&phase);
        let mut total = first;
        if !spec.tr_t.is_zero() {
            let ratio = |shape: &CycleShape| -> Result<RationalSeries> {
                Ok(eta_product(shape, r64(1), m)?.mul(&eta_product(shape, half, m)?.invert()?))
            };
            let second = ratio(&spec.shape_a)?
                .mul(&th(2)?)
                .sub(&ratio(&spec.shape_minus_a)?.mul(&th(3)?));
            total = total.add(&second.scale(&spec.tr_t));
        }
        Ok(total)
    })
}
