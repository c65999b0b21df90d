use std::fmt;
use std::str::FromStr;

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::Serialize;

use super::{delta, eisenstein, r64};
use crate::error::{Error, Result};
use crate::linalg::{self, coefficient_matrix, support_below};
use crate::qseries::{RationalSeries, SeriesJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpaceKind {
    /// Holomorphic forms.
    M,
    /// Cusp forms.
    S,
    /// Pole of order at most one at infinity, constant term zero.
    F,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceKind::M => "M",
            SpaceKind::S => "S",
            SpaceKind::F => "F",
        };
        f.write_str(s)
    }
}

impl FromStr for SpaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(SpaceKind::M),
            "S" | "s" => Ok(SpaceKind::S),
            "F" | "f" => Ok(SpaceKind::F),
            _ => Err(Error::InvalidArgument(format!("unknown space kind {s:?}"))),
        }
    }
}

/// Finite basis of q-expansions for `M_k`, `S_k` or `F_k` at level one.
#[derive(Clone, Debug)]
pub struct FormSpace {
    pub weight: i64,
    pub kind: SpaceKind,
    pub basis: Vec<RationalSeries>,
    pub labels: Vec<String>,
}

#[derive(Serialize)]
struct FormSpaceJson {
    kind: String,
    weight: i64,
    basis: Vec<SeriesJson>,
    labels: Vec<String>,
}

impl FormSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn name(&self) -> String {
        format!("{}_{}", self.kind, self.weight)
    }

    pub fn to_json_string(&self) -> String {
        let j = FormSpaceJson {
            kind: self.kind.to_string(),
            weight: self.weight,
            basis: self.basis.iter().map(SeriesJson::from).collect(),
            labels: self.labels.clone(),
        };
        serde_json::to_string(&j).expect("serializable")
    }

    /// Smallest truncation order among basis elements.
    fn common_order(&self) -> Option<Rational64> {
        self.basis.iter().filter_map(RationalSeries::order).min()
    }
}

/// `(a, b)` with `4a + 6b = k`, ordered by increasing `b`.
fn monomial_exponents(k: i64) -> Vec<(i64, i64)> {
    if k < 0 || k % 2 != 0 {
        return Vec::new();
    }
    (0..=k / 6)
        .filter(|b| (k - 6 * b) % 4 == 0)
        .map(|b| ((k - 6 * b) / 4, b))
        .collect()
}

fn monomial_label(a: i64, b: i64) -> String {
    let mut parts = Vec::new();
    match a {
        0 => {}
        1 => parts.push("E4".to_string()),
        _ => parts.push(format!("E4^{a}")),
    }
    match b {
        0 => {}
        1 => parts.push("E6".to_string()),
        _ => parts.push(format!("E6^{b}")),
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn holomorphic_basis(k: i64, order: i64) -> Result<(Vec<RationalSeries>, Vec<String>)> {
    let exps = monomial_exponents(k);
    if exps.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let e4 = eisenstein(4, order)?;
    let e6 = eisenstein(6, order)?;
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for (a, b) in exps {
        basis.push(e4.pow_int(a)?.mul(&e6.pow_int(b)?).truncate(r64(order)));
        labels.push(monomial_label(a, b));
    }
    Ok((basis, labels))
}

fn certify_independent(basis: &[RationalSeries]) -> Result<()> {
    if basis.is_empty() {
        return Ok(());
    }
    let refs: Vec<&RationalSeries> = basis.iter().collect();
    let bound = basis
        .iter()
        .filter_map(RationalSeries::order)
        .min()
        .unwrap_or(r64(i64::MAX));
    let exps = support_below(&refs, bound);
    let m = coefficient_matrix(&refs, &exps);
    if linalg::rank(&m) < basis.len() {
        return Err(Error::InsufficientOrder {
            needed: bound + r64(basis.len() as i64),
            available: bound,
        });
    }
    Ok(())
}

/// Recombines `series` into echelon form: distinct leading exponents, each
/// with leading coefficient 1. Returns the new series with their combination
/// vectors.
fn echelonize(series: &[RationalSeries]) -> Vec<(RationalSeries, Vec<BigRational>)> {
    let n = series.len();
    if n == 0 {
        return Vec::new();
    }
    let refs: Vec<&RationalSeries> = series.iter().collect();
    let bound = series
        .iter()
        .filter_map(RationalSeries::order)
        .min()
        .unwrap_or(r64(i64::MAX));
    let exps = support_below(&refs, bound);
    let mut rows: linalg::Matrix = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = exps
                .iter()
                .map(|&e| series[i].coeff(e).unwrap_or_else(|_| BigRational::zero()))
                .collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    let pivots = linalg::rref(&mut rows);
    pivots
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < exps.len())
        .map(|(r, _)| {
            let comb: Vec<BigRational> = rows[r][exps.len()..].to_vec();
            let s = combine(series, &comb);
            (s, comb)
        })
        .collect()
}

fn combine(series: &[RationalSeries], coeffs: &[BigRational]) -> RationalSeries {
    series
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .fold(RationalSeries::zero(), |acc, (s, c)| acc.add(&s.scale(c)))
}

fn combination_label(labels: &[String], coeffs: &[BigRational]) -> String {
    let parts: Vec<String> = labels
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(l, c)| if c.is_one() { l.clone() } else { format!("({c})*{l}") })
        .collect();
    parts.join(" + ")
}

/// Candidates `g/Δ` for `g` in the `M_{k+12}` basis, known below `q^order`.
fn polar_candidates(k: i64, order: i64) -> Result<(Vec<RationalSeries>, Vec<String>)> {
    let (gs, labels) = holomorphic_basis(k + 12, order + 2)?;
    let inv = delta(order + 2).invert()?;
    let cands = gs
        .iter()
        .map(|g| g.mul(&inv).truncate(r64(order)))
        .collect();
    Ok((cands, labels))
}

/// Basis of `M_k`, `S_k` or `F_k` known below `q^order`.
///
/// `M_k` is spanned by the monomials `E_4^a E_6^b`, `S_k = Δ·M_{k-12}`, and
/// `F_k` is the kernel of the constant-term functional on `{g/Δ : g ∈ M_{k+12}}`,
/// returned in echelon form.
pub fn space_basis(kind: SpaceKind, k: i64, order: i64) -> Result<FormSpace> {
    if k < 0 || k % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "weight must be even and nonnegative, got {k}"
        )));
    }
    if order < 1 {
        return Err(Error::InvalidArgument(format!("order must be at least 1, got {order}")));
    }
    let (basis, labels) = match kind {
        SpaceKind::M => holomorphic_basis(k, order)?,
        SpaceKind::S => {
            let (ms, ls) = holomorphic_basis(k - 12, order)?;
            let d = delta(order);
            let basis = ms.iter().map(|m| m.mul(&d).truncate(r64(order))).collect();
            let labels = ls
                .into_iter()
                .map(|l| if l == "1" { "Delta".to_string() } else { format!("Delta*{l}") })
                .collect();
            (basis, labels)
        }
        SpaceKind::F => {
            let (cands, ls) = polar_candidates(k, order)?;
            let constraint = vec![cands
                .iter()
                .map(|c| c.coeff_at(0))
                .collect::<Result<Vec<_>>>()?];
            let kernel = linalg::kernel(&constraint, cands.len());
            let raw: Vec<RationalSeries> = kernel.iter().map(|v| combine(&cands, v)).collect();
            certify_independent(&raw)?;
            let ech = echelonize(&raw);
            let mut basis = Vec::new();
            let mut labels = Vec::new();
            for (s, comb) in ech {
                // Express the echelon element back in terms of g/Δ.
                let mut total = vec![BigRational::zero(); cands.len()];
                for (kv, c) in kernel.iter().zip(&comb) {
                    for (t, x) in total.iter_mut().zip(kv) {
                        *t += c * x;
                    }
                }
                labels.push(format!("({})/Delta", combination_label(&ls, &total)));
                basis.push(s);
            }
            (basis, labels)
        }
    };
    certify_independent(&basis)?;
    Ok(FormSpace {
        weight: k,
        kind,
        basis,
        labels,
    })
}

/// `dim M_{k+12} - rank(constant-term functional)`, the second route to `dim F_k`.
pub fn f_dimension_by_rank(k: i64, order: i64) -> Result<usize> {
    let (cands, _) = polar_candidates(k, order)?;
    let row = vec![cands
        .iter()
        .map(|c| c.coeff_at(0))
        .collect::<Result<Vec<_>>>()?];
    let rank = if cands.is_empty() { 0 } else { linalg::rank(&row) };
    Ok(cands.len() - rank)
}

/// Exact coordinates of `f` in `space`, or `None` if `f` is not in the span
/// below the common truncation order.
///
/// Errors when that order is too small to separate the basis.
pub fn fit(f: &RationalSeries, space: &FormSpace) -> Result<Option<Vec<BigRational>>> {
    let bound = match (f.order(), space.common_order()) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => r64(i64::MAX),
    };
    let refs: Vec<&RationalSeries> = space.basis.iter().collect();
    let mut all = refs.clone();
    all.push(f);
    let exps = support_below(&all, bound);
    let a = coefficient_matrix(&refs, &exps);
    if !refs.is_empty() && linalg::rank(&a) < refs.len() {
        return Err(Error::InsufficientOrder {
            needed: bound + r64(refs.len() as i64),
            available: bound,
        });
    }
    let b: Vec<BigRational> = exps
        .iter()
        .map(|&e| f.coeff(e).unwrap_or_else(|_| BigRational::zero()))
        .collect();
    if refs.is_empty() {
        return Ok(if b.iter().all(Zero::is_zero) { Some(Vec::new()) } else { None });
    }
    Ok(linalg::solve(&a, &b, refs.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{j_function, serre_derive};
    use crate::qseries::int;

    #[test]
    fn cusp_space_weight_twelve() {
        let s = space_basis(SpaceKind::S, 12, 6).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis[0], delta(6));
        assert_eq!(fit(&delta(6), &s).unwrap(), Some(vec![int(1)]));
    }

    #[test]
    fn weight_two_is_empty() {
        assert_eq!(space_basis(SpaceKind::M, 2, 5).unwrap().dim(), 0);
        assert_eq!(space_basis(SpaceKind::S, 8, 5).unwrap().dim(), 0);
        assert!(space_basis(SpaceKind::M, 3, 5).is_err());
    }

    #[test]
    fn f_zero_generator_is_j() {
        let f0 = space_basis(SpaceKind::F, 0, 6).unwrap();
        assert_eq!(f0.dim(), 1);
        let g = &f0.basis[0];
        assert_eq!(g.coeff_at(-1).unwrap(), int(1));
        assert_eq!(g.coeff_at(0).unwrap(), int(0));
        assert_eq!(g.coeff_at(1).unwrap(), int(196884));
        assert_eq!(g, &j_function(6).unwrap());
    }

    #[test]
    fn fit_rejects_nonzero_constant() {
        let f0 = space_basis(SpaceKind::F, 0, 6).unwrap();
        let j_plus = j_function(6).unwrap().add(&RationalSeries::constant(int(744)));
        assert_eq!(fit(&j_plus, &f0).unwrap(), None);
    }

    #[test]
    fn serre_of_e4_lies_in_m6() {
        let e4 = eisenstein(4, 12).unwrap();
        let m6 = space_basis(SpaceKind::M, 6, 12).unwrap();
        let d = serre_derive(&e4, 4).unwrap();
        let c = fit(&d, &m6).unwrap().expect("in M_6");
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn insufficient_order_detected() {
        // M_24 has dimension 3; a single known coefficient cannot separate it.
        assert!(matches!(
            space_basis(SpaceKind::M, 24, 1),
            Err(Error::InsufficientOrder { .. })
        ));
    }
}
