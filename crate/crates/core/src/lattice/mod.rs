//! Positive definite integral lattices given by Gram matrices, short-vector
//! enumeration and theta series, and the equivariant trace built from them.

mod equivariant;
mod leech;

pub use equivariant::{
    equivariant_z, eta_product, fixed_sublattice_of, twisted_theta, CycleShape, EquivariantSpec,
    FixedSublattice,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::r64;
use crate::qseries::{int, RationalSeries};

/// Integral lattice with a symmetric positive definite Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
    /// `gram = Uᵀ·diag(d)·U` with `U` unit upper triangular.
    d: Vec<BigRational>,
    u: Vec<Vec<BigRational>>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct LatticeJson {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
}

fn ldl(gram: &[Vec<i64>]) -> Result<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let n = gram.len();
    let mut d: Vec<BigRational> = Vec::with_capacity(n);
    let mut u = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        u[i][i] = int(1);
        let mut di = int(gram[i][i]);
        for k in 0..i {
            di -= &d[k] * &u[k][i] * &u[k][i];
        }
        if !di.is_positive() {
            return Err(Error::Lattice(format!(
                "Gram matrix is not positive definite (pivot {i} is {di})"
            )));
        }
        for j in i + 1..n {
            let mut s = int(gram[i][j]);
            for k in 0..i {
                s -= &d[k] * &u[k][i] * &u[k][j];
            }
            u[i][j] = s / &di;
        }
        d.push(di);
    }
    Ok((d, u))
}

impl Lattice {
    /// Validates shape, symmetry and positive definiteness (by exact LDL).
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::Lattice("Gram matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Lattice(format!("Gram matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        let (d, u) = ldl(&gram)?;
        Ok(Lattice { gram, d, u })
    }

    /// The Leech lattice: even, unimodular, rank 24, no vectors of norm 2.
    pub fn leech() -> Self {
        Lattice::new(leech::LEECH_GRAM.iter().map(|r| r.to_vec()).collect()).expect("valid Gram")
    }

    /// `E_8` with its Cartan matrix as Gram matrix.
    pub fn e8() -> Self {
        let mut g = vec![vec![0i64; 8]; 8];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = 2;
        }
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];
        for (a, b) in edges {
            g[a][b] = -1;
            g[b][a] = -1;
        }
        Lattice::new(g).expect("valid Gram")
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                s += ai * self.gram[i][j] * bj;
            }
        }
        s
    }

    pub fn norm(&self, v: &[i64]) -> i64 {
        self.inner(v, v)
    }

    /// `⟨x, v⟩` for a rational coordinate vector `x`.
    pub fn inner_rational(&self, x: &[BigRational], v: &[i64]) -> BigRational {
        let mut s = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                s += xi * int(self.gram[i][j] * vj);
            }
        }
        s
    }

    pub fn determinant(&self) -> BigRational {
        self.d.iter().fold(int(1), |acc, x| acc * x)
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    /// All `γ` with `⟨γ,γ⟩ ≤ maxnorm`, in lexicographic order of coordinates.
    pub fn enumerate_vectors(&self, maxnorm: i64) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut out = Vec::new();
        if maxnorm < 0 {
            return out;
        }
        let mut x = vec![0i64; n];
        if n == 0 {
            out.push(x);
            return out;
        }
        self.search(n - 1, int(maxnorm), &mut x, &mut out);
        out.sort();
        out
    }

    /// Fixes `x[i]` given `x[i+1..]`, with `budget` left for rows `0..=i`.
    fn search(&self, i: usize, budget: BigRational, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let mut center = BigRational::zero();
        for j in i + 1..x.len() {
            center -= &self.u[i][j] * int(x[j]);
        }
        let fits = |v: i64| -> Option<BigRational> {
            let t = int(v) - &center;
            let used = &self.d[i] * &t * &t;
            (used <= budget).then(|| &budget - used)
        };
        let start = center.floor().to_integer();
        let start = i64::try_from(start).expect("coordinate fits in i64");
        let visit = |v: i64, rest: BigRational, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>| {
            x[i] = v;
            if i == 0 {
                out.push(x.clone());
            } else {
                self.search(i - 1, rest, x, out);
            }
        };
        let mut v = start;
        while let Some(rest) = fits(v) {
            visit(v, rest, x, out);
            v -= 1;
        }
        let mut v = start + 1;
        while let Some(rest) = fits(v) {
            visit(v, rest, x, out);
            v += 1;
        }
        x[i] = 0;
    }

    /// `Σ_γ q^{⟨γ,γ⟩/2}` known below `q^order`.
    pub fn theta_series(&self, order: i64) -> RationalSeries {
        let target = r64(order);
        if order <= 0 {
            return RationalSeries::zero_to(target);
        }
        let mut counts: std::collections::BTreeMap<i64, i64> = Default::default();
        for v in self.enumerate_vectors(2 * order - 1) {
            *counts.entry(self.norm(&v)).or_default() += 1;
        }
        RationalSeries::from_terms(
            counts.into_iter().map(|(n, c)| (Rational64::new(n, 2), int(c))),
            Some(target),
        )
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&LatticeJson { rank: self.rank(), gram: self.gram.clone() })
            .expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: LatticeJson = serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        Self::from_json(j)
    }

    pub(crate) fn from_json(j: LatticeJson) -> Result<Self> {
        if j.gram.len() != j.rank {
            return Err(Error::Input(format!(
                "rank {} does not match Gram size {}",
                j.rank,
                j.gram.len()
            )));
        }
        Lattice::new(j.gram)
    }
}

/// Integer basis of `{v ∈ Z^n : m·v = 0}` by unimodular row reduction of
/// `[mᵀ | I]`.
pub(crate) fn integer_kernel(m: &[Vec<i64>], n: usize) -> Result<Vec<Vec<i64>>> {
    let rows_m = m.len();
    // row j of the working matrix: column j of m, followed by e_j
    let mut w: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = (0..rows_m).map(|i| BigInt::from(m[i][j])).collect();
            row.extend((0..n).map(|k| BigInt::from(i64::from(k == j))));
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..rows_m {
        loop {
            let nonzero: Vec<usize> = (r..n).filter(|&i| !w[i][c].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&p) = nonzero.first() {
                    w.swap(r, p);
                    r += 1;
                }
                break;
            }
            let p = *nonzero
                .iter()
                .min_by_key(|&&i| w[i][c].abs())
                .expect("nonempty");
            for &i in &nonzero {
                if i == p {
                    continue;
                }
                let q = w[i][c].div_floor(&w[p][c]);
                let prow = w[p].clone();
                for (x, y) in w[i].iter_mut().zip(&prow) {
                    *x -= &q * y;
                }
            }
        }
    }
    w[r..]
        .iter()
        .map(|row| {
            row[rows_m..]
                .iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Lattice("kernel entry overflows i64".into())))
                .collect()
        })
        .collect()
}
