//! State-by-state traces on Fock spaces, computed from the operator algebra
//! `[λ(s), λ(t)] = s·L·δ_{s+t,0}` without using the closed forms.
//!
//! A Fock state is an occupation vector over the positive modes; `λ(-m)` acts
//! by multiplication and `λ(m)` as `m·L·∂/∂λ(-m)`.

use std::collections::BTreeMap;

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use super::{pow2, FockConfig, Sector};
use crate::error::{Error, Result};
use crate::modular::r64;
use crate::qseries::{big, frac, int, MarkerPoly, MarkerSeries, RationalSeries};

type Occupation = Vec<u32>;
type FockVector = BTreeMap<Occupation, BigRational>;

fn grade(occ: &Occupation, modes: &[Rational64]) -> Rational64 {
    occ.iter().zip(modes).map(|(&k, &m)| m * r64(k as i64)).sum()
}

/// All occupation vectors of grade strictly below `order`.
fn basis(modes: &[Rational64], order: Rational64) -> Vec<Occupation> {
    fn go(i: usize, left: Rational64, modes: &[Rational64], cur: &mut Occupation, out: &mut Vec<Occupation>) {
        if i == modes.len() {
            out.push(cur.clone());
            return;
        }
        let mut k = 0u32;
        while modes[i] * r64(k as i64) < left {
            cur[i] = k;
            go(i + 1, left - modes[i] * r64(k as i64), modes, cur, out);
            k += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if order > r64(0) {
        go(0, order, modes, &mut vec![0; modes.len()], &mut out);
    }
    out
}

fn add_to(v: &mut FockVector, occ: Occupation, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(occ.clone()).or_insert_with(BigRational::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&occ);
    }
}

/// `E^+(sλ) = exp(Σ_m s·λ(m)/m · z^{-m})` applied to `v`, ignoring `z`.
fn apply_annihilation_exp(v: &FockVector, modes: &[Rational64], norm: &BigRational, s: i64) -> FockVector {
    let mut total = v.clone();
    let mut term = v.clone();
    let mut n = 1i64;
    while !term.is_empty() {
        let mut next = FockVector::new();
        for (occ, c) in &term {
            for (i, &m) in modes.iter().enumerate() {
                if occ[i] == 0 {
                    continue;
                }
                // λ(m) on λ(-m)^k gives m·L·k·λ(-m)^{k-1}
                let mut o = occ.clone();
                o[i] -= 1;
                let f = int(s) / big(m) * (big(m) * norm * int(occ[i] as i64));
                add_to(&mut next, o, c * f * frac(1, n));
            }
        }
        for (o, c) in &next {
            add_to(&mut total, o.clone(), c.clone());
        }
        term = next;
        n += 1;
    }
    total
}

/// `E^-(sλ) = exp(-Σ_m s·λ(-m)/m · z^m)` applied to `v`, keeping only states of
/// grade at most `cap`.
fn apply_creation_exp(v: &FockVector, modes: &[Rational64], s: i64, cap: Rational64) -> FockVector {
    let mut total = v.clone();
    let mut term = v.clone();
    let mut n = 1i64;
    while !term.is_empty() {
        let mut next = FockVector::new();
        for (occ, c) in &term {
            let g = grade(occ, modes);
            for (i, &m) in modes.iter().enumerate() {
                if g + m > cap {
                    continue;
                }
                let mut o = occ.clone();
                o[i] += 1;
                let f = -int(s) / big(m);
                add_to(&mut next, o, c * f * frac(1, n));
            }
        }
        for (o, c) in &next {
            add_to(&mut total, o.clone(), c.clone());
        }
        term = next;
        n += 1;
    }
    total
}

/// Diagonal entry of the degree-zero part of `E^-(sλ)E^+(sλ)` at `occ`.
fn diagonal_entry(occ: &Occupation, modes: &[Rational64], norm: &BigRational, s: i64) -> BigRational {
    let mut v = FockVector::new();
    v.insert(occ.clone(), BigRational::one());
    let g = grade(occ, modes);
    let lowered = apply_annihilation_exp(&v, modes, norm, s);
    let raised = apply_creation_exp(&lowered, modes, s, g);
    // degree zero: the z-powers cancel exactly when the grade returns to g,
    // and the diagonal entry is the coefficient of the original state
    raised.get(occ).cloned().unwrap_or_else(BigRational::zero)
}

fn particles(occ: &Occupation) -> usize {
    occ.iter().map(|&k| k as usize).sum()
}

/// `Σ_states q^{grade} x^{particles} ⟨state| E^±(0) |state⟩` for the single
/// direction `λ`. Both signs are computed and must agree.
pub fn brute_trace_a(cfg: &FockConfig) -> Result<MarkerSeries> {
    cfg.validate()?;
    let modes = cfg.modes();
    let mut terms = Vec::new();
    for occ in basis(&modes, cfg.order) {
        let plus = diagonal_entry(&occ, &modes, &cfg.norm, 1);
        let minus = diagonal_entry(&occ, &modes, &cfg.norm, -1);
        if plus != minus {
            return Err(Error::RouteMismatch(format!(
                "E^+(0) and E^-(0) differ on state {occ:?}: {plus} vs {minus}"
            )));
        }
        terms.push((grade(&occ, &modes), MarkerPoly::monomial(plus, particles(&occ))));
    }
    Ok(sum_terms(terms, cfg.order))
}

fn sum_terms(terms: Vec<(Rational64, MarkerPoly)>, order: Rational64) -> MarkerSeries {
    let mut acc = MarkerSeries::zero_to(order);
    for (e, c) in terms {
        acc = acc.add(&MarkerSeries::monomial(c, e));
    }
    acc
}

/// The same trace from the projection formula
/// `Σ_{p ≤ k} ∏_m C(k_m, p_m)/p_m! · (-L/m)^{p_m}` on each basis state.
pub fn pformula_trace_a(cfg: &FockConfig) -> Result<MarkerSeries> {
    cfg.validate()?;
    let modes = cfg.modes();
    let mut terms = Vec::new();
    for occ in basis(&modes, cfg.order) {
        let mut entry = BigRational::one();
        for (&k, &m) in occ.iter().zip(&modes) {
            let base = -&cfg.norm / big(m);
            let mut factor = BigRational::zero();
            let mut binom = BigRational::one();
            let mut fact = BigRational::one();
            let mut pow = BigRational::one();
            for p in 0..=k as i64 {
                if p > 0 {
                    binom = binom * int(k as i64 - p + 1) / int(p);
                    fact *= int(p);
                    pow *= &base;
                }
                factor += &binom / &fact * &pow;
            }
            entry *= factor;
        }
        terms.push((grade(&occ, &modes), MarkerPoly::monomial(entry, particles(&occ))));
    }
    Ok(sum_terms(terms, cfg.order))
}

/// `tr q^{L(0)} x^N` on the Fock space of one direction with trivial
/// operator, by counting states.
fn free_direction_count(modes: &[Rational64], order: Rational64) -> MarkerSeries {
    let terms = basis(modes, order)
        .into_iter()
        .map(|occ| (grade(&occ, modes), MarkerPoly::monomial(BigRational::one(), particles(&occ))))
        .collect();
    sum_terms(terms, order)
}

/// The trace on the rank-`cfg.rank` Fock space: the `λ` direction by the
/// operator oracle, each orthogonal direction by state counting, combined
/// by convolution.
pub fn brute_trace_m1(cfg: &FockConfig) -> Result<MarkerSeries> {
    let a = brute_trace_a(cfg)?;
    let free = free_direction_count(&cfg.modes(), cfg.order);
    let mut acc = a;
    for _ in 1..cfg.rank {
        acc = acc.mul(&free);
    }
    Ok(acc.truncate(cfg.order))
}

/// Operator-oracle version of `g(q, x)` known below `q^{cfg.order}`.
pub fn brute_twisted_trace(cfg: &FockConfig) -> Result<MarkerSeries> {
    let floor = Rational64::new(3, 2);
    let inner = FockConfig { sector: Sector::Twisted, order: cfg.order - floor, ..cfg.clone() };
    if inner.order <= r64(0) {
        return Ok(MarkerSeries::zero_to(cfg.order));
    }
    Ok(brute_trace_m1(&inner)?.shift(floor))
}

/// `Z(v(λ), τ)` assembled from the operator oracles of both sectors:
/// `q^{L/8-1} f(q,-1) + q^{-1} 2^{12-L} (g(q,1) - g(q,-1))`.
pub fn brute_z_total(norm: i64, order: i64) -> Result<RationalSeries> {
    let target = r64(order);
    let shift = Rational64::new(norm, 8) - r64(1);
    let untwisted = if target > shift {
        let cfg = FockConfig::untwisted(norm, 0).with_order(target - shift);
        brute_trace_m1(&cfg)?.marker_eval(&int(-1)).shift(shift)
    } else {
        RationalSeries::zero_to(target)
    };
    let g = brute_twisted_trace(&FockConfig::twisted(norm, target + r64(1)))?;
    let twisted = g
        .marker_eval(&int(1))
        .sub(&g.marker_eval(&int(-1)))
        .shift(r64(-1))
        .scale(&pow2(12 - norm));
    Ok(untwisted.add(&twisted).truncate(target))
}

#[cfg(test)]
mod tests {
    use super::super::{closed_trace_a, closed_trace_m1, twisted_closed_trace, z_total};
    use super::*;

    #[test]
    fn basis_counts_partitions() {
        let modes: Vec<Rational64> = (1..=6).map(r64).collect();
        let b = basis(&modes, r64(7));
        let at6 = b.iter().filter(|o| grade(o, &modes) == r64(6)).count();
        assert_eq!(at6, 11);
        assert_eq!(b.len(), 1 + 1 + 2 + 3 + 5 + 7 + 11);
    }

    #[test]
    fn grade_zero_and_one() {
        let cfg = FockConfig::untwisted(7, 2);
        let b = brute_trace_a(&cfg).unwrap();
        assert_eq!(b.coeff(r64(0)).unwrap(), MarkerPoly::constant(int(1)));
        assert_eq!(b.coeff(r64(1)).unwrap(), MarkerPoly::monomial(int(1 - 7), 1));
    }

    #[test]
    fn oracle_matches_closed_form() {
        for norm in [2, 16, 24] {
            let cfg = FockConfig::untwisted(norm, 7);
            assert_eq!(brute_trace_a(&cfg).unwrap(), closed_trace_a(&cfg).unwrap(), "L={norm}");
        }
    }

    #[test]
    fn pformula_is_a_third_route() {
        for norm in [3, 16] {
            let cfg = FockConfig::untwisted(norm, 5);
            assert_eq!(pformula_trace_a(&cfg).unwrap(), brute_trace_a(&cfg).unwrap());
            let tw = FockConfig::twisted(norm, r64(3));
            assert_eq!(pformula_trace_a(&tw).unwrap(), brute_trace_a(&tw).unwrap());
        }
    }

    #[test]
    fn rank_24_oracle() {
        let cfg = FockConfig::untwisted(24, 5);
        assert_eq!(brute_trace_m1(&cfg).unwrap(), closed_trace_m1(&cfg).unwrap());
    }

    #[test]
    fn twisted_oracle() {
        for norm in [16, 24] {
            let cfg = FockConfig::twisted(norm, Rational64::new(9, 2) + Rational64::new(1, 2));
            assert_eq!(brute_twisted_trace(&cfg).unwrap(), twisted_closed_trace(&cfg).unwrap());
        }
    }

    #[test]
    fn end_to_end() {
        for norm in [16, 24] {
            assert_eq!(brute_z_total(norm, 4).unwrap(), z_total(norm, 4).unwrap());
        }
    }
}
