//! Level-one modular objects as exact q-expansions.
//!
//! Eisenstein series use the normalization
//! `E_k = -B_k/k! + 2/(k-1)! · Σ σ_{k-1}(n) q^n`, so for instance
//! `E_2 = -1/12 + 2q + 6q^2 + …` and `E_4 = 1/720 + q/3 + 3q^2 + …`.
//! With it the weight-raising derivative is `∂_k f = q·df/dq + k·E_2·f`.

mod space;

pub use space::{f_dimension_by_rank, fit, space_basis, FormSpace, SpaceKind};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qseries::{int, RationalSeries};

pub(crate) fn r64(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

/// Evaluates `build(m)` at increasing internal orders `m` until the result is
/// known through `target`, then truncates to exactly `target`.
pub(crate) fn with_headroom<F>(target: Rational64, build: F) -> Result<RationalSeries>
where
    F: Fn(i64) -> Result<RationalSeries>,
{
    let base = target.ceil().to_integer().max(1);
    let mut extra = 2;
    loop {
        let s = build(base + extra)?;
        match s.order() {
            None => return Ok(s.truncate(target)),
            Some(o) if o >= target => return Ok(s.truncate(target)),
            Some(_) if extra > 256 => {
                return Err(Error::InsufficientOrder {
                    needed: target,
                    available: s.order().unwrap_or(target),
                })
            }
            Some(_) => extra *= 2,
        }
    }
}

/// Bernoulli numbers `B_0..=B_kmax` from `t/(e^t - 1)`, by inverting
/// `(e^t - 1)/t = Σ t^n/(n+1)!`.
pub fn bernoulli_numbers(kmax: usize) -> Vec<BigRational> {
    let order = kmax as i64 + 1;
    let mut fact = BigInt::one();
    let mut terms = Vec::with_capacity(kmax + 1);
    for n in 0..=kmax as i64 {
        fact *= n + 1;
        terms.push((r64(n), BigRational::new(BigInt::one(), fact.clone())));
    }
    let g = RationalSeries::from_terms(terms, Some(r64(order)));
    let inv = g.invert().expect("leading coefficient is 1");
    let mut fact = BigInt::one();
    (0..=kmax as i64)
        .map(|k| {
            if k > 0 {
                fact *= k;
            }
            inv.coeff_at(k).expect("within order") * BigRational::from_integer(fact.clone())
        })
        .collect()
}

pub fn bernoulli(k: usize) -> BigRational {
    bernoulli_numbers(k).pop().expect("nonempty")
}

/// `σ_p(n) = Σ_{d | n} d^p`.
pub fn divisor_power_sum(n: u64, p: u32) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(p);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(p);
            }
        }
        d += 1;
    }
    s
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Eisenstein series `E_k` known below `q^order`. `k = 2` is allowed even
/// though `E_2` is not modular.
pub fn eisenstein(k: i64, order: i64) -> Result<RationalSeries> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "Eisenstein weight must be even and at least 2, got {k}"
        )));
    }
    let ku = k as u64;
    let b = bernoulli(k as usize);
    let constant = -b / BigRational::from_integer(factorial(ku));
    let scale = BigRational::new(BigInt::from(2), factorial(ku - 1));
    let mut terms = vec![(r64(0), constant)];
    for n in 1..order.max(0) {
        let s = BigRational::from_integer(divisor_power_sum(n as u64, (k - 1) as u32));
        terms.push((r64(n), s * &scale));
    }
    Ok(RationalSeries::from_terms(terms, Some(r64(order))))
}

/// `∏_{n=1}^{∞} (1 - q^{n·step - offset})` known below `q^order`, where all
/// factors with exponent at or beyond the order are dropped as exact ones.
fn product_one_minus(step: Rational64, offset: Rational64, sign: i64, order: Rational64) -> RationalSeries {
    let mut p = RationalSeries::one().truncate(order);
    let mut n = 1;
    loop {
        let e = step * r64(n) - offset;
        if e >= order {
            break;
        }
        let factor = RationalSeries::from_terms([(r64(0), int(1)), (e, int(-sign))], None);
        p = p.mul(&factor);
        n += 1;
    }
    p
}

/// Dedekind eta `q^{1/24} ∏ (1 - q^n)` known below `q^order`.
pub fn eta(order: i64) -> RationalSeries {
    let target = r64(order);
    product_one_minus(r64(1), r64(0), 1, target)
        .shift(Rational64::new(1, 24))
        .truncate(target)
}

/// Discriminant `Δ = η^24 = q - 24q^2 + 252q^3 - …`.
pub fn delta(order: i64) -> RationalSeries {
    eta(order)
        .pow_int(24)
        .expect("positive power")
        .truncate(r64(order))
}

/// The three theta products:
///
/// - `Θ_1 = 2q^{1/8} ∏ (1 - q^n)(1 + q^n)^2`
/// - `Θ_2 = ∏ (1 - q^n)(1 - q^{n-1/2})^2`
/// - `Θ_3 = ∏ (1 - q^n)(1 + q^{n-1/2})^2`
pub fn theta(i: u8, order: i64) -> Result<RationalSeries> {
    let target = r64(order);
    let base = product_one_minus(r64(1), r64(0), 1, target);
    let half = Rational64::new(1, 2);
    let s = match i {
        1 => {
            let plus = product_one_minus(r64(1), r64(0), -1, target);
            base.mul(&plus.mul(&plus))
                .shift(Rational64::new(1, 8))
                .scale(&int(2))
        }
        2 => {
            let minus = product_one_minus(r64(1), half, 1, target);
            base.mul(&minus.mul(&minus))
        }
        3 => {
            let plus = product_one_minus(r64(1), half, -1, target);
            base.mul(&plus.mul(&plus))
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "theta index must be 1, 2 or 3, got {i}"
            )))
        }
    };
    Ok(s.truncate(target))
}

/// `E_4^3/Δ` rescaled to leading coefficient 1 with its constant removed:
/// `q^{-1} + 0 + 196884q + 21493760q^2 + …`, the graded dimension of the
/// Moonshine module.
pub fn j_function(order: i64) -> Result<RationalSeries> {
    let raw = with_headroom(r64(order), |m| {
        let e4 = eisenstein(4, m)?;
        let d = delta(m);
        Ok(e4.pow_int(3)?.mul(&d.invert()?))
    })?;
    let (_, lead) = raw.leading().ok_or(Error::NoLeadingTerm)?;
    let normalized = raw.scale(&lead.recip());
    let c0 = normalized.coeff_at(0)?;
    Ok(normalized.sub(&RationalSeries::constant(c0)))
}

/// Weight-raising derivative `∂_k f = q·df/dq + k·E_2·f`, with the result's
/// order no larger than `f`'s.
pub fn serre_derive(f: &RationalSeries, k: i64) -> Result<RationalSeries> {
    let d = f.q_derive();
    if k == 0 || f.is_zero() && f.is_exact() {
        return Ok(d);
    }
    let order = f.order().ok_or(Error::Unbounded)?;
    let val = f.valuation().unwrap_or(order);
    let needed = (order - val).ceil().to_integer().max(1);
    let e2 = eisenstein(2, needed)?;
    let out = d.add(&e2.mul(f).scale(&int(k)));
    Ok(out.truncate(order))
}

/// `serre_derive` applied `times` times, starting at weight `k`.
pub fn serre_iterate(f: &RationalSeries, k: i64, times: usize) -> Result<RationalSeries> {
    let mut g = f.clone();
    for j in 0..times {
        g = serre_derive(&g, k + 2 * j as i64)?;
    }
    Ok(g)
}
