//! Exact linear algebra over the rationals: row reduction, rank, kernels and
//! consistent-system solving. Pivots are chosen as the first nonzero entry in
//! each column, which is deterministic in exact arithmetic.

use std::collections::BTreeSet;

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::qseries::RationalSeries;

pub type Matrix = Vec<Vec<BigRational>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Basis of `{v : m·v = 0}` for a matrix with `cols` columns.
pub fn kernel(m: &Matrix, cols: usize) -> Vec<Vec<BigRational>> {
    let mut m = m.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `a·x = b` exactly for `x` of length `cols`. Free variables are set
/// to zero. Returns `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &[BigRational], cols: usize) -> Option<Vec<BigRational>> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

/// Union of stored exponents below `bound` across all series, ascending.
pub fn support_below(series: &[&RationalSeries], bound: Rational64) -> Vec<Rational64> {
    let mut set = BTreeSet::new();
    for s in series {
        for (e, _) in s.terms() {
            if e < bound {
                set.insert(e);
            }
        }
    }
    set.into_iter().collect()
}

/// Rows indexed by `exponents`, columns by `series`.
pub fn coefficient_matrix(series: &[&RationalSeries], exponents: &[Rational64]) -> Matrix {
    exponents
        .iter()
        .map(|&e| {
            series
                .iter()
                .map(|s| s.coeff(e).unwrap_or_else(|_| BigRational::zero()))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        for row in &a {
            let dot: BigRational = row.iter().zip(&k[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        assert_eq!(solve(&a, &[int(3), int(1), int(4)], 2), Some(vec![int(2), int(1)]));
        assert_eq!(solve(&a, &[int(3), int(1), int(5)], 2), None);
    }

    #[test]
    fn empty_system() {
        let a: Matrix = vec![vec![]; 2];
        assert_eq!(solve(&a, &[int(0), int(0)], 0), Some(vec![]));
        assert_eq!(solve(&a, &[int(0), int(1)], 0), None);
        assert_eq!(solve(&Vec::new(), &[], 3), Some(vec![int(0); 3]));
    }
}
