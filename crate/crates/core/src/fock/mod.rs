//! Heisenberg Fock-space traces for the lattice part of the Moonshine module.
//!
//! Closed forms of the weighted traces `tr E^±(0) q^{L(0)} x^N`, an operator
//! oracle that computes the same traces state by state, and the assembled
//! 1-point function `Z(v(λ), τ)` of a vector `v(λ) = e^λ + e^{-λ}`.

mod oracle;

pub use oracle::{brute_trace_a, brute_trace_m1, brute_twisted_trace, brute_z_total, pformula_trace_a};

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modular::{eta, r64, theta, with_headroom};
use crate::qseries::{big, frac, int, MarkerPoly, MarkerSeries, RationalSeries};

/// Which Heisenberg modes are present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    /// Modes `1, 2, 3, …`.
    Untwisted,
    /// Modes `1/2, 3/2, 5/2, …`.
    Twisted,
}

/// Inputs of a Fock trace: the norm `L = ⟨λ,λ⟩`, the mode sector, the total
/// Heisenberg rank and the truncation order in `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockConfig {
    pub norm: BigRational,
    pub sector: Sector,
    pub rank: u32,
    pub order: Rational64,
}

impl FockConfig {
    pub fn untwisted(norm: i64, order: i64) -> Self {
        FockConfig { norm: int(norm), sector: Sector::Untwisted, rank: 24, order: r64(order) }
    }

    pub fn twisted(norm: i64, order: Rational64) -> Self {
        FockConfig { norm: int(norm), sector: Sector::Twisted, rank: 24, order }
    }

    pub fn with_rank(mut self, rank: u32) -> Self {
        self.rank = rank;
        self
    }

    pub fn with_order(mut self, order: Rational64) -> Self {
        self.order = order;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.norm <= BigRational::zero() {
            return Err(Error::InvalidArgument(format!("norm must be positive, got {}", self.norm)));
        }
        if self.rank == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        Ok(())
    }

    /// Positive modes below the truncation order, in increasing order.
    pub(crate) fn modes(&self) -> Vec<Rational64> {
        let (start, step) = match self.sector {
            Sector::Untwisted => (r64(1), r64(1)),
            Sector::Twisted => (Rational64::new(1, 2), r64(1)),
        };
        let mut out = Vec::new();
        let mut m = start;
        while m < self.order {
            out.push(m);
            m += step;
        }
        out
    }
}

/// `Σ_{i ≥ 1} c·x^i q^{m·i}` below `q^order`.
fn geometric_tail(m: Rational64, c: &BigRational, order: Rational64) -> MarkerSeries {
    let mut terms = Vec::new();
    let mut i = 1usize;
    while m * r64(i as i64) < order {
        terms.push((m * r64(i as i64), MarkerPoly::monomial(c.clone(), i)));
        i += 1;
    }
    MarkerSeries::from_terms(terms, Some(order))
}

/// `∏_m (1 - x q^m)^{-r}` by multiplying geometric series.
fn marker_denominator(cfg: &FockConfig, r: u32) -> Result<MarkerSeries> {
    let one = MarkerSeries::one().truncate(cfg.order);
    let mut p = one.clone();
    for m in cfg.modes() {
        let g = one.add(&geometric_tail(m, &BigRational::one(), cfg.order));
        p = p.mul(&g);
    }
    p.pow_int(r as i64)
}

/// `exp(Σ_m -L x q^m / (m(1 - x q^m)))`.
fn exponential_factor(cfg: &FockConfig) -> Result<MarkerSeries> {
    let mut s = MarkerSeries::zero_to(cfg.order);
    for m in cfg.modes() {
        let c = -&cfg.norm / big(m);
        s = s.add(&geometric_tail(m, &c, cfg.order));
    }
    s.exp_series()
}

/// `tr E^±(0) q^{L(0)} x^N` on the Fock space of the single direction `λ`:
/// `exp(Σ_m -L x q^m/(m(1 - x q^m))) / ∏_m (1 - x q^m)`.
pub fn closed_trace_a(cfg: &FockConfig) -> Result<MarkerSeries> {
    cfg.validate()?;
    Ok(exponential_factor(cfg)?.mul(&marker_denominator(cfg, 1)?).truncate(cfg.order))
}

/// The same trace on the full rank-`cfg.rank` Fock space; the directions
/// orthogonal to `λ` only contribute `∏_m (1 - x q^m)^{-(rank-1)}`.
pub fn closed_trace_m1(cfg: &FockConfig) -> Result<MarkerSeries> {
    cfg.validate()?;
    Ok(exponential_factor(cfg)?.mul(&marker_denominator(cfg, cfg.rank)?).truncate(cfg.order))
}

/// `g(q, x) = q^{3/2} exp(Σ_{n≥0} -L x q^{n+1/2}/((n+1/2)(1 - x q^{n+1/2})))
/// ∏_{n>0} (1 - x q^{n-1/2})^{-rank}`, known below `q^{cfg.order}`.
pub fn twisted_closed_trace(cfg: &FockConfig) -> Result<MarkerSeries> {
    let floor = Rational64::new(3, 2);
    let inner = FockConfig { sector: Sector::Twisted, order: cfg.order - floor, ..cfg.clone() };
    if inner.order <= r64(0) {
        return Ok(MarkerSeries::zero_to(cfg.order));
    }
    Ok(closed_trace_m1(&inner)?.shift(floor))
}

/// Independently computed versions of one series.
#[derive(Clone, Debug)]
pub struct RouteReport {
    pub routes: Vec<(&'static str, RationalSeries)>,
}

impl RouteReport {
    pub fn agree(&self) -> bool {
        self.routes.windows(2).all(|w| w[0].1 == w[1].1)
    }

    /// The common value, or a mismatch error naming the first disagreement.
    pub fn value(&self) -> Result<RationalSeries> {
        for w in self.routes.windows(2) {
            if w[0].1 != w[1].1 {
                return Err(Error::RouteMismatch(format!("{} vs {}", w[0].0, w[1].0)));
            }
        }
        Ok(self.routes[0].1.clone())
    }
}

fn check_norm(norm: i64) -> Result<()> {
    if norm <= 0 || norm % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "norm must be a positive even integer, got {norm}"
        )));
    }
    Ok(())
}

/// `L = 4⟨α,α⟩` with `⟨α,α⟩ ∈ {4, 6, 8, …}`, i.e. `L ∈ {16, 24, 32, …}`.
pub fn is_realizable(norm: i64) -> bool {
    norm >= 16 && norm % 8 == 0
}

fn half_power(i: u8, n: i64, m: i64) -> Result<RationalSeries> {
    theta(i, m)?.scale(&frac(1, 2)).pow_int(n)
}

/// The three routes to the untwisted contribution:
/// `η(2τ)^{2L-24}/η(τ)^{L-24}`, `η^12 (Θ_1/2)^{L-12}` and
/// `q^{L/8-1} f(q, -1)` with `f` the closed rank-24 trace.
pub fn z_untwisted_routes(norm: i64, order: i64) -> Result<RouteReport> {
    check_norm(norm)?;
    let target = r64(order);
    let quotient = with_headroom(target, |m| {
        let e2 = eta(m).rescale(r64(2))?;
        Ok(e2.pow_int(2 * norm - 24)?.mul(&eta(m).pow_int(norm - 24)?.invert()?))
    })?;
    let theta_form = with_headroom(target, |m| Ok(eta(m).pow_int(12)?.mul(&half_power(1, norm - 12, m)?)))?;
    let shift = Rational64::new(norm, 8) - r64(1);
    let trace = if target > shift {
        let cfg = FockConfig::untwisted(norm, 0).with_order(target - shift);
        closed_trace_m1(&cfg)?.marker_eval(&int(-1)).shift(shift)
    } else {
        RationalSeries::zero_to(target)
    };
    Ok(RouteReport {
        routes: vec![("eta-quotient", quotient), ("theta1-form", theta_form), ("fock-trace", trace)],
    })
}

pub fn z_untwisted(norm: i64, order: i64) -> Result<RationalSeries> {
    z_untwisted_routes(norm, order)?.value()
}

/// The two routes to the twisted contribution:
/// `η^12 ((Θ_2/2)^{L-12} - (Θ_3/2)^{L-12})` and
/// `q^{-1} 2^{12-L} (g(q,1) - g(q,-1))`.
pub fn z_twisted_routes(norm: i64, order: i64) -> Result<RouteReport> {
    check_norm(norm)?;
    let target = r64(order);
    let theta_form = with_headroom(target, |m| {
        let d = half_power(2, norm - 12, m)?.sub(&half_power(3, norm - 12, m)?);
        Ok(eta(m).pow_int(12)?.mul(&d))
    })?;
    let cfg = FockConfig::twisted(norm, target + r64(1));
    let g = twisted_closed_trace(&cfg)?;
    let diff = g.marker_eval(&int(1)).sub(&g.marker_eval(&int(-1)));
    let power = pow2(12 - norm);
    let trace = diff.shift(r64(-1)).scale(&power).truncate(target);
    for (name, s) in [("theta23-form", &theta_form), ("fock-trace", &trace)] {
        if !s.has_integral_exponents() {
            return Err(Error::RouteMismatch(format!("{name} keeps half-integral exponents")));
        }
    }
    Ok(RouteReport { routes: vec![("theta23-form", theta_form), ("fock-trace", trace)] })
}

pub fn z_twisted(norm: i64, order: i64) -> Result<RationalSeries> {
    z_twisted_routes(norm, order)?.value()
}

pub(crate) fn pow2(e: i64) -> BigRational {
    let two = int(2);
    if e >= 0 {
        num_traits::pow(two, e as usize)
    } else {
        num_traits::pow(two, (-e) as usize).recip()
    }
}

/// `Z(v(λ), τ) = η^12 {(Θ_1/2)^{L-12} + (Θ_2/2)^{L-12} - (Θ_3/2)^{L-12}}`
/// as the sum of the two sector contributions. Even norms outside the
/// realizable set are accepted; see [`is_realizable`].
pub fn z_total(norm: i64, order: i64) -> Result<RationalSeries> {
    Ok(z_untwisted(norm, order)?.add(&z_twisted(norm, order)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{delta, eisenstein, fit, space_basis, SpaceKind};
    use num_traits::Signed;

    fn coeff(s: &MarkerSeries, e: Rational64, deg: usize) -> BigRational {
        s.coeff(e).unwrap().coeff(deg)
    }

    #[test]
    fn closed_a_low_terms() {
        let cfg = FockConfig::untwisted(16, 4);
        let a = closed_trace_a(&cfg).unwrap();
        assert_eq!(a.coeff(r64(0)).unwrap(), MarkerPoly::constant(int(1)));
        assert_eq!(a.coeff(r64(1)).unwrap(), MarkerPoly::monomial(int(1 - 16), 1));
        assert!(a.coeff(r64(4)).is_err());
    }

    #[test]
    fn closed_m1_first_coefficient() {
        let cfg = FockConfig::untwisted(10, 3);
        let f = closed_trace_m1(&cfg).unwrap();
        assert_eq!(f.coeff(r64(1)).unwrap(), MarkerPoly::monomial(int(24 - 10), 1));
    }

    #[test]
    fn exponential_factor_at_x_one() {
        // at x = 1 the exponent is -L Σ_n σ_{-1}-weighted q^n: Σ_m Σ_i q^{mi}/m
        let cfg = FockConfig::untwisted(6, 7);
        let e = exponential_factor(&cfg).unwrap().marker_eval(&int(1));
        let mut terms = Vec::new();
        for n in 1..7i64 {
            let s: BigRational = (1..=n).filter(|d| n % d == 0).map(|d| frac(-6, d)).sum();
            terms.push((r64(n), s));
        }
        let direct = RationalSeries::from_terms(terms, Some(r64(7))).exp_series().unwrap();
        assert_eq!(e, direct);
    }

    #[test]
    fn twisted_leading_terms() {
        let norm = 5;
        let cfg = FockConfig::twisted(norm, r64(3));
        let g = twisted_closed_trace(&cfg).unwrap();
        let (e, c) = g.leading().unwrap();
        assert_eq!(e, Rational64::new(3, 2));
        assert_eq!(*c, MarkerPoly::constant(int(1)));
        assert_eq!(coeff(&g, r64(2), 1), int(24 - 2 * norm));
    }

    #[test]
    fn untwisted_examples() {
        let z16 = z_untwisted(16, 6).unwrap();
        assert_eq!(z16.leading().unwrap().0, r64(1));
        let z24 = z_untwisted(24, 6).unwrap();
        let expected = eta(8).rescale(r64(2)).unwrap().pow_int(24).unwrap().truncate(r64(6));
        assert_eq!(z24, expected);
        // Δ(2τ) = q^2 - 24q^4 + …
        assert_eq!(z24.leading().unwrap(), (r64(2), &int(1)));
        assert_eq!(z24.coeff_at(4).unwrap(), int(-24));
        assert!(z_untwisted_routes(8, 6).unwrap().agree());
        assert!(z_untwisted(7, 6).is_err());
    }

    #[test]
    fn twisted_examples() {
        for norm in [8, 16, 24] {
            let r = z_twisted_routes(norm, 6).unwrap();
            assert!(r.agree(), "norm {norm}");
            assert!(r.value().unwrap().has_integral_exponents());
        }
    }

    #[test]
    fn norm_sixteen_vanishes() {
        let z = z_total(16, 11).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.order(), Some(r64(11)));
        assert!(!z_untwisted(16, 11).unwrap().is_zero());
    }

    #[test]
    fn norm_24_and_32_classified() {
        let order = 11;
        let z24 = z_total(24, order).unwrap();
        let c = fit(&z24, &space_basis(SpaceKind::S, 12, order).unwrap()).unwrap().unwrap();
        assert!(!c[0].is_zero());
        assert_eq!(z24, delta(order).scale(&z24.coeff_at(1).unwrap()));

        let z32 = z_total(32, order).unwrap();
        let de4 = delta(order).mul(&eisenstein(4, order).unwrap()).truncate(r64(order));
        let c = fit(&z32, &space_basis(SpaceKind::S, 16, order).unwrap()).unwrap().unwrap();
        assert!(!c[0].is_zero());
        assert_eq!(z32, de4.scale(&(z32.coeff_at(1).unwrap() / de4.coeff_at(1).unwrap())));
    }

    #[test]
    fn realizable_norms_give_cusp_forms() {
        for norm in [16, 24, 32, 40] {
            let z = z_total(norm, 6).unwrap();
            assert!(z.coeff_at(0).unwrap().is_zero());
            assert!(z.valuation().is_none_or(|v| v >= r64(1)));
            assert!(is_realizable(norm));
        }
        assert!(!is_realizable(12) && !is_realizable(20) && !is_realizable(2));
    }

    #[test]
    fn leading_twisted_coefficient() {
        // q^{-1} 2^{12-L} · 2·(24 - 2L)xq^2 at x = 1 minus x = -1
        for norm in [4i64, 10, 16] {
            let z = z_twisted(norm, 3).unwrap();
            let expected = pow2(13 - norm) * int(24 - 2 * norm);
            assert_eq!(z.coeff_at(1).unwrap(), expected, "norm {norm}");
            assert!(z.coeff_at(0).unwrap().is_zero());
        }
    }

    #[test]
    fn parity_split() {
        let f = closed_trace_m1(&FockConfig::untwisted(6, 5)).unwrap();
        let plus = f.marker_eval(&int(1));
        let minus = f.marker_eval(&int(-1));
        let even = plus.add(&minus).scale(&frac(1, 2));
        let odd = plus.sub(&minus).scale(&frac(1, 2));
        assert_eq!(even, f.marker_parity_part(false).marker_eval(&int(1)));
        assert_eq!(odd, f.marker_parity_part(true).marker_eval(&int(1)));
        assert!(odd.coeff_at(1).unwrap().is_positive());
    }
}
