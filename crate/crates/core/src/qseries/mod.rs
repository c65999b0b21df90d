//! Truncated q-series with rational exponents and exact coefficients.
//!
//! A [`QSeries`] stores its exponents on the lattice `(1/D)·Z` as scaled
//! integers, plus a truncation order: every exponent at or above the order is
//! *unknown*, not zero. An order of `None` marks an exact series (a finite
//! Laurent polynomial in some `q^{1/D}`), which is how factors such as
//! `1 - q^n` or a bare monomial enter products.
//!
//! The denominator is always reduced to the smallest `D` that represents every
//! stored exponent and the order, so two equal series have identical
//! representations. Binary operations reconcile denominators by lcm.
//!
//! Coefficients are generic over [`Coefficient`]: [`RationalSeries`] uses
//! exact rationals and [`MarkerSeries`] uses polynomials in a formal marker
//! `x` (see [`MarkerPoly`]).

mod json;
mod marker;

pub use json::{parse_fraction, SeriesJson, TermJson};
pub use marker::MarkerPoly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Ring of coefficients a [`QSeries`] can carry.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, r: &BigRational) -> Self;
    /// Multiplicative inverse, if the element is a unit of the ring.
    fn try_inverse(&self) -> Option<Self>;

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }
}

impl Coefficient for BigRational {
    fn c_zero() -> Self {
        Zero::zero()
    }
    fn c_one() -> Self {
        One::one()
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }
    fn try_inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}

/// Series with exact rational coefficients.
pub type RationalSeries = QSeries<BigRational>;
/// Series whose coefficients are polynomials in the marker `x`.
pub type MarkerSeries = QSeries<MarkerPoly>;

/// Converts an exponent to the big rational used for coefficient scaling.
pub fn big(r: Rational64) -> BigRational {
    BigRational::new((*r.numer()).into(), (*r.denom()).into())
}

/// Exact rational from an integer.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Exact rational `n/d`.
pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<C> {
    den: i64,
    terms: BTreeMap<i64, C>,
    /// Scaled truncation order; `None` means exact.
    order: Option<i64>,
}

impl<C: Coefficient> QSeries<C> {
    /// Builds a series from scaled data and normalizes it.
    fn from_raw(den: i64, terms: BTreeMap<i64, C>, order: Option<i64>) -> Self {
        assert!(den > 0, "denominator must be positive");
        let mut s = QSeries { den, terms, order };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.c_is_zero());
        if let Some(o) = self.order {
            self.terms.retain(|&e, _| e < o);
        }
        let mut g = self.den;
        if let Some(o) = self.order {
            g = g.gcd(&o);
        }
        for &e in self.terms.keys() {
            if g == 1 {
                break;
            }
            g = g.gcd(&e);
        }
        if g > 1 {
            self.den /= g;
            self.order = self.order.map(|o| o / g);
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(e, c)| (e / g, c))
                .collect();
        }
    }

    /// Exact zero.
    pub fn zero() -> Self {
        Self::from_raw(1, BTreeMap::new(), None)
    }

    /// `O(q^order)`: nothing known to be nonzero below `order`.
    pub fn zero_to(order: Rational64) -> Self {
        Self::from_raw(*order.denom(), BTreeMap::new(), Some(*order.numer()))
    }

    /// Exact one.
    pub fn one() -> Self {
        Self::constant(C::c_one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, Rational64::zero())
    }

    /// Exact `c·q^exp`.
    pub fn monomial(c: C, exp: Rational64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(*exp.numer(), c);
        Self::from_raw(*exp.denom(), terms, None)
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Repeated exponents
    /// are summed; terms at or above `order` are dropped.
    pub fn from_terms<I>(terms: I, order: Option<Rational64>) -> Self
    where
        I: IntoIterator<Item = (Rational64, C)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let mut den = order.map_or(1, |o| *o.denom());
        for (e, _) in &terms {
            den = den.lcm(e.denom());
        }
        let mut map: BTreeMap<i64, C> = BTreeMap::new();
        for (e, c) in terms {
            let k = e.numer() * (den / e.denom());
            match map.get_mut(&k) {
                Some(slot) => slot.add_assign_ref(&c),
                None => {
                    map.insert(k, c);
                }
            }
        }
        let order = order.map(|o| o.numer() * (den / o.denom()));
        Self::from_raw(den, map, order)
    }

    /// Builds a series from scaled data: exponents are `e/den`, order is `order_num/den`.
    pub fn from_scaled(den: i64, terms: BTreeMap<i64, C>, order_num: Option<i64>) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidArgument(format!("denominator {den} must be positive")));
        }
        Ok(Self::from_raw(den, terms, order_num))
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    /// Scaled exponent → coefficient, ascending.
    pub fn scaled_terms(&self) -> &BTreeMap<i64, C> {
        &self.terms
    }

    /// Scaled truncation order (`order = order_num / denominator`).
    pub fn order_num(&self) -> Option<i64> {
        self.order
    }

    /// Truncation order; `None` for an exact series.
    pub fn order(&self) -> Option<Rational64> {
        self.order.map(|o| Rational64::new(o, self.den))
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// True when no nonzero term is stored (the series is zero below its order).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms with their true exponents, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (Rational64, &C)> + '_ {
        let den = self.den;
        self.terms.iter().map(move |(&e, c)| (Rational64::new(e, den), c))
    }

    /// Smallest exponent carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<Rational64> {
        self.terms.keys().next().map(|&e| Rational64::new(e, self.den))
    }

    pub fn leading(&self) -> Option<(Rational64, &C)> {
        self.terms().next()
    }

    /// Coefficient of `q^e`; errors if `e` is at or beyond the truncation order.
    pub fn coeff(&self, e: Rational64) -> Result<C> {
        if let Some(order) = self.order() {
            if e >= order {
                return Err(Error::BeyondOrder { exponent: e, order });
            }
        }
        if self.den % e.denom() != 0 {
            return Ok(C::c_zero());
        }
        let k = e.numer() * (self.den / e.denom());
        Ok(self.terms.get(&k).cloned().unwrap_or_else(C::c_zero))
    }

    /// Lowers the truncation order to `min(order, current)`.
    pub fn truncate(&self, order: Rational64) -> Self {
        let target = match self.order() {
            Some(o) if o <= order => return self.clone(),
            _ => order,
        };
        let den = self.den.lcm(target.denom());
        let (terms, _) = self.rescaled(den);
        let o = target.numer() * (den / target.denom());
        Self::from_raw(den, terms, Some(o))
    }

    /// Returns the same data expressed with denominator `den` (a multiple of the current one).
    fn rescaled(&self, den: i64) -> (BTreeMap<i64, C>, Option<i64>) {
        debug_assert_eq!(den % self.den, 0);
        let f = den / self.den;
        if f == 1 {
            return (self.terms.clone(), self.order);
        }
        let terms = self.terms.iter().map(|(&e, c)| (e * f, c.clone())).collect();
        (terms, self.order.map(|o| o * f))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let terms = self.terms.iter().map(|(&e, c)| (e, c.scale(r))).collect();
        Self::from_raw(self.den, terms, self.order)
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> QSeries<D> {
        let terms = self.terms.iter().map(|(&e, c)| (e, f(c))).collect();
        QSeries::from_raw(self.den, terms, self.order)
    }

    /// Multiplies by the exact monomial `q^shift`.
    pub fn shift(&self, shift: Rational64) -> Self {
        let den = self.den.lcm(shift.denom());
        let (terms, order) = self.rescaled(den);
        let s = shift.numer() * (den / shift.denom());
        let terms = terms.into_iter().map(|(e, c)| (e + s, c)).collect();
        Self::from_raw(den, terms, order.map(|o| o + s))
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let den = self.den.lcm(&other.den);
        let (mut terms, oa) = self.rescaled(den);
        let (tb, ob) = other.rescaled(den);
        for (e, c) in tb {
            let c = if negate { c.neg_ref() } else { c };
            match terms.get_mut(&e) {
                Some(slot) => slot.add_assign_ref(&c),
                None => {
                    terms.insert(e, c);
                }
            }
        }
        let order = match (oa, ob) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        Self::from_raw(den, terms, order)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(&e, c)| (e, c.neg_ref())).collect();
        Self::from_raw(self.den, terms, self.order)
    }

    /// Product with the tightest sound truncation order:
    /// `min(order(a) + val(b), order(b) + val(a))`, where the valuation of a
    /// series with no known terms is its order.
    pub fn mul(&self, other: &Self) -> Self {
        let den = self.den.lcm(&other.den);
        let (ta, oa) = self.rescaled(den);
        let (tb, ob) = other.rescaled(den);
        // An exact zero annihilates everything, including the unknown tail.
        if (ta.is_empty() && oa.is_none()) || (tb.is_empty() && ob.is_none()) {
            return Self::zero();
        }
        let va = ta.keys().next().copied().or(oa);
        let vb = tb.keys().next().copied().or(ob);
        let left = oa.map(|o| o + vb.expect("nonzero"));
        let right = ob.map(|o| o + va.expect("nonzero"));
        let order = match (left, right) {
            (Some(l), Some(r)) => Some(l.min(r)),
            (l, None) => l,
            (None, r) => r,
        };
        let mut out: BTreeMap<i64, C> = BTreeMap::new();
        for (&ea, ca) in &ta {
            for (&eb, cb) in &tb {
                let e = ea + eb;
                if matches!(order, Some(o) if e >= o) {
                    break;
                }
                let p = ca.mul_ref(cb);
                match out.get_mut(&e) {
                    Some(slot) => slot.add_assign_ref(&p),
                    None => {
                        out.insert(e, p);
                    }
                }
            }
        }
        Self::from_raw(den, out, order)
    }

    /// Multiplicative inverse. The result's leading exponent is the negated
    /// leading exponent of `self`; its order is `order - 2·valuation`.
    ///
    /// An exact monomial inverts exactly; any other exact series must be
    /// truncated first.
    pub fn invert(&self) -> Result<Self> {
        let (&v, lead) = self.terms.iter().next().ok_or(Error::NoLeadingTerm)?;
        let lead_inv = lead.try_inverse().ok_or(Error::NonUnitLeading)?;
        let order = match self.order {
            Some(o) => o,
            None if self.terms.len() == 1 => {
                let mut terms = BTreeMap::new();
                terms.insert(-v, lead_inv);
                return Ok(Self::from_raw(self.den, terms, None));
            }
            None => return Err(Error::Unbounded),
        };
        // self = q^v · u with u = lead + ...; u is known to relative order `rel`.
        let rel = order - v;
        let u: Vec<(i64, &C)> = self.terms.iter().skip(1).map(|(&e, c)| (e - v, c)).collect();
        let mut d: Vec<C> = Vec::with_capacity(rel as usize);
        d.push(lead_inv.clone());
        let neg_inv = lead_inv.neg_ref();
        for n in 1..rel {
            let mut acc = C::c_zero();
            for &(k, uk) in &u {
                if k > n {
                    break;
                }
                let prev = &d[(n - k) as usize];
                if !prev.c_is_zero() {
                    acc.add_assign_ref(&uk.mul_ref(prev));
                }
            }
            d.push(if acc.c_is_zero() { acc } else { neg_inv.mul_ref(&acc) });
        }
        let terms = d
            .into_iter()
            .enumerate()
            .map(|(n, c)| (n as i64 - v, c))
            .collect();
        Ok(Self::from_raw(self.den, terms, Some(order - 2 * v)))
    }

    /// Integer power by repeated squaring; negative powers go through [`invert`](Self::invert).
    pub fn pow_int(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(Self::one());
        }
        let base = if n < 0 { self.invert()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq);
        }
        Ok(acc.expect("n != 0"))
    }

    /// `exp(self)` for a series of strictly positive valuation, via
    /// `n·f_n = Σ_k k·a_k·f_{n-k}` on the scaled exponent lattice.
    pub fn exp_series(&self) -> Result<Self> {
        if let Some((&e, _)) = self.terms.iter().next() {
            if e <= 0 {
                return Err(Error::NonPositiveValuation(Rational64::new(e, self.den)));
            }
        }
        let order = self.order.ok_or(Error::Unbounded)?;
        if order <= 0 {
            return Ok(Self::from_raw(self.den, BTreeMap::new(), Some(order)));
        }
        let a: Vec<(i64, C)> = self
            .terms
            .iter()
            .map(|(&k, c)| (k, c.scale(&int(k))))
            .collect();
        let mut f: Vec<C> = Vec::with_capacity(order as usize);
        f.push(C::c_one());
        for n in 1..order {
            let mut acc = C::c_zero();
            for (k, ka) in &a {
                if *k > n {
                    break;
                }
                let prev = &f[(n - k) as usize];
                if !prev.c_is_zero() {
                    acc.add_assign_ref(&ka.mul_ref(prev));
                }
            }
            f.push(if acc.c_is_zero() { acc } else { acc.scale(&frac(1, n)) });
        }
        let terms = f.into_iter().enumerate().map(|(n, c)| (n as i64, c)).collect();
        Ok(Self::from_raw(self.den, terms, Some(order)))
    }

    /// `q·d/dq`: each `c·q^e` becomes `e·c·q^e`.
    pub fn q_derive(&self) -> Self {
        let den = self.den;
        let terms = self
            .terms
            .iter()
            .map(|(&e, c)| (e, c.scale(&frac(e, den))))
            .collect();
        Self::from_raw(den, terms, self.order)
    }

    /// Substitutes `q → q^r` for a positive rational `r`.
    pub fn rescale(&self, r: Rational64) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidArgument(format!("rescale factor {r} must be positive")));
        }
        let (p, q) = (*r.numer(), *r.denom());
        let terms = self.terms.iter().map(|(&e, c)| (e * p, c.clone())).collect();
        Ok(Self::from_raw(self.den * q, terms, self.order.map(|o| o * p)))
    }

    /// Weak equality: after reconciling denominators, the two term sets agree
    /// below the smaller of the two orders.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let diff = self.sub(other);
        diff.is_zero()
    }

    /// True when `self` and `other` agree below `bound` and both are known there.
    pub fn agrees_through(&self, other: &Self, bound: Rational64) -> bool {
        let known = |s: &Self| s.order().is_none_or(|o| o >= bound);
        known(self) && known(other) && self.sub(other).truncate(bound).is_zero()
    }
}

impl<'a, C: Coefficient> Add<&'a QSeries<C>> for &'a QSeries<C> {
    type Output = QSeries<C>;
    fn add(self, rhs: &'a QSeries<C>) -> QSeries<C> {
        QSeries::add(self, rhs)
    }
}

impl<'a, C: Coefficient> Sub<&'a QSeries<C>> for &'a QSeries<C> {
    type Output = QSeries<C>;
    fn sub(self, rhs: &'a QSeries<C>) -> QSeries<C> {
        QSeries::sub(self, rhs)
    }
}

impl<'a, C: Coefficient> Mul<&'a QSeries<C>> for &'a QSeries<C> {
    type Output = QSeries<C>;
    fn mul(self, rhs: &'a QSeries<C>) -> QSeries<C> {
        QSeries::mul(self, rhs)
    }
}

impl<C: Coefficient> Neg for &QSeries<C> {
    type Output = QSeries<C>;
    fn neg(self) -> QSeries<C> {
        QSeries::neg(self)
    }
}

impl RationalSeries {
    /// Coefficient at an integral exponent, as a convenience for integral series.
    pub fn coeff_at(&self, e: i64) -> Result<BigRational> {
        self.coeff(Rational64::from_integer(e))
    }

    /// True when every stored exponent is an integer.
    pub fn has_integral_exponents(&self) -> bool {
        self.den == 1 || self.terms.keys().all(|e| e % self.den == 0)
    }
}

impl MarkerSeries {
    /// Substitutes a rational value for the marker.
    pub fn marker_eval(&self, x0: &BigRational) -> RationalSeries {
        self.map_coeffs(|p| p.eval(x0))
    }

    /// Embeds a rational series as marker-degree-zero.
    pub fn from_rational(s: &RationalSeries) -> Self {
        s.map_coeffs(|c| MarkerPoly::constant(c.clone()))
    }

    /// Keeps only even (`odd == false`) or odd marker degrees.
    pub fn marker_parity_part(&self, odd: bool) -> Self {
        self.map_coeffs(|p| p.parity_part(odd))
    }

    /// Largest marker degree among coefficients, if any term is stored.
    pub fn max_marker_degree(&self) -> Option<usize> {
        self.scaled_terms().values().filter_map(|p| p.degree()).max()
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*q^{e}")?;
            }
        }
        match self.order() {
            Some(o) => {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "O(q^{o})")
            }
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn series(terms: &[(i64, i64, i64)], order: Option<(i64, i64)>) -> RationalSeries {
        RationalSeries::from_terms(
            terms.iter().map(|&(n, d, c)| (r(n, d), int(c))),
            order.map(|(n, d)| r(n, d)),
        )
    }

    #[test]
    fn geometric_series_telescopes() {
        let one_minus_q = series(&[(0, 1, 1), (1, 1, -1)], None);
        let geo = series(&(0..=10).map(|n| (n, 1, 1)).collect::<Vec<_>>(), Some((11, 1)));
        let p = one_minus_q.mul(&geo);
        assert_eq!(p.order(), Some(r(11, 1)));
        assert_eq!(p, RationalSeries::one().truncate(r(11, 1)));
    }

    #[test]
    fn polar_terms_cancel() {
        let a = series(&[(-1, 1, 1), (1, 1, 1)], None);
        let b = series(&[(-1, 1, -1)], None);
        assert_eq!(a.add(&b), series(&[(1, 1, 1)], None));
    }

    #[test]
    fn exponent_addition_in_fine_lattice() {
        let a = series(&[(1, 24, 1), (25, 24, -1)], None);
        let b = series(&[(1, 24, 1)], None);
        let p = a.mul(&b);
        assert_eq!(p, series(&[(1, 12, 1), (13, 12, -1)], None));
        assert_eq!(p.denominator(), 12);
    }

    #[test]
    fn invert_examples() {
        let a = series(&[(0, 1, 1), (1, 1, -1)], Some((8, 1)));
        let inv = a.invert().unwrap();
        assert_eq!(inv, series(&(0..8).map(|n| (n, 1, 1)).collect::<Vec<_>>(), Some((8, 1))));
        let q = series(&[(1, 1, 1)], None);
        assert_eq!(q.invert().unwrap(), series(&[(-1, 1, 1)], None));
        assert_eq!(RationalSeries::zero_to(r(3, 1)).invert(), Err(Error::NoLeadingTerm));
        assert_eq!(series(&[(0, 1, 1), (1, 1, 1)], None).invert(), Err(Error::Unbounded));
    }

    #[test]
    fn pow_examples() {
        let a = series(&[(0, 1, 1), (1, 1, 1)], None);
        assert_eq!(a.pow_int(2).unwrap(), series(&[(0, 1, 1), (1, 1, 2), (2, 1, 1)], None));
        assert_eq!(a.pow_int(0).unwrap(), RationalSeries::one());
        let q8 = series(&[(1, 8, 1)], None);
        assert_eq!(q8.pow_int(8).unwrap(), series(&[(1, 1, 1)], None));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            RationalSeries::zero_to(r(5, 1)).exp_series().unwrap(),
            RationalSeries::one().truncate(r(5, 1))
        );
        let q = series(&[(1, 1, 1)], Some((5, 1)));
        let e = q.exp_series().unwrap();
        let expect = RationalSeries::from_terms(
            [(0, 1), (1, 1), (2, 2), (3, 6), (4, 24)]
                .iter()
                .map(|&(n, f)| (r(n, 1), frac(1, f))),
            Some(r(5, 1)),
        );
        assert_eq!(e, expect);
        let bad = series(&[(0, 1, 1), (1, 1, 1)], Some((4, 1)));
        assert!(matches!(bad.exp_series(), Err(Error::NonPositiveValuation(_))));
        let polar = series(&[(-1, 2, 1)], Some((4, 1)));
        assert!(matches!(polar.exp_series(), Err(Error::NonPositiveValuation(_))));
    }

    #[test]
    fn q_derive_examples() {
        assert_eq!(series(&[(-1, 1, 1)], None).q_derive(), series(&[(-1, 1, -1)], None));
        assert!(series(&[(0, 1, 7)], None).q_derive().is_zero());
        let d = series(&[(1, 8, 1)], None).q_derive();
        assert_eq!(d.coeff(r(1, 8)).unwrap(), frac(1, 8));
    }

    #[test]
    fn rescale_round_trip() {
        let a = series(&[(1, 24, 1), (25, 24, -1), (49, 24, -1)], Some((3, 1)));
        let b = a.rescale(r(2, 1)).unwrap();
        assert_eq!(b.order(), Some(r(6, 1)));
        assert_eq!(b.valuation(), Some(r(1, 12)));
        assert_eq!(b.rescale(r(1, 2)).unwrap(), a);
        assert!(a.rescale(r(0, 1)).is_err());
    }

    #[test]
    fn coeff_beyond_order_errors() {
        let a = series(&[(1, 1, 3)], Some((2, 1)));
        assert_eq!(a.coeff(r(1, 1)).unwrap(), int(3));
        assert_eq!(a.coeff(r(1, 3)).unwrap(), int(0));
        assert!(matches!(a.coeff(r(2, 1)), Err(Error::BeyondOrder { .. })));
    }

    #[test]
    fn product_order_uses_valuations() {
        // (q^{-1} + O(q^3)) * (q^2 + O(q^5)) is known below min(3+2, 5-1) = 4.
        let a = series(&[(-1, 1, 1)], Some((3, 1)));
        let b = series(&[(2, 1, 1)], Some((5, 1)));
        assert_eq!(a.mul(&b).order(), Some(r(4, 1)));
        assert_eq!(a.mul(&RationalSeries::zero()), RationalSeries::zero());
    }

    #[test]
    fn marker_eval_and_parity() {
        let l = int(7);
        let one_minus_l = int(1) - &l;
        let f = MarkerSeries::from_terms(
            [
                (r(0, 1), MarkerPoly::constant(int(1))),
                (r(1, 1), MarkerPoly::from_coeffs(vec![int(0), one_minus_l.clone()])),
            ],
            Some(r(4, 1)),
        );
        let at_minus = f.marker_eval(&int(-1));
        assert_eq!(at_minus.coeff_at(1).unwrap(), -one_minus_l.clone());
        let even = f.marker_eval(&int(1)).add(&at_minus).scale(&frac(1, 2));
        assert_eq!(even, f.marker_parity_part(false).marker_eval(&int(1)));
        assert_eq!(even.coeff_at(1).unwrap(), int(0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_series() -> impl Strategy<Value = RationalSeries> {
            (
                prop::sample::select(vec![1i64, 2, 8, 24, 48]),
                prop::collection::vec((-6i64..40, -5i64..=5), 0..6),
                prop::option::of(1i64..60),
            )
                .prop_map(|(d, terms, order)| {
                    RationalSeries::from_terms(
                        terms.into_iter().map(|(n, c)| (r(n, d), int(c))),
                        order.map(|o| r(o, d)),
                    )
                })
        }

        fn arb_positive() -> impl Strategy<Value = RationalSeries> {
            (
                prop::sample::select(vec![1i64, 2, 8, 24]),
                prop::collection::vec((1i64..30, -4i64..=4), 0..5),
                1i64..40,
            )
                .prop_map(|(d, terms, order)| {
                    RationalSeries::from_terms(
                        terms.into_iter().map(|(n, c)| (r(n, d), int(c))),
                        Some(r(order, d)),
                    )
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(96))]

            #[test]
            fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
                prop_assert!(a.add(&b).agrees_with(&b.add(&a)));
                prop_assert!(a.mul(&b).agrees_with(&b.mul(&a)));
                prop_assert!(a.add(&b).add(&c).agrees_with(&a.add(&b.add(&c))));
                prop_assert!(a.mul(&b).mul(&c).agrees_with(&a.mul(&b.mul(&c))));
                prop_assert!(a.mul(&b.add(&c)).agrees_with(&a.mul(&b).add(&a.mul(&c))));
                prop_assert!(a.sub(&a).is_zero());
                prop_assert!(a.mul(&RationalSeries::one()).agrees_with(&a));
            }

            #[test]
            fn exp_of_negation_inverts(a in arb_positive()) {
                let e = a.exp_series().unwrap();
                let f = a.neg().exp_series().unwrap();
                let one = RationalSeries::one();
                prop_assert!(e.mul(&f).agrees_with(&one));
            }

            #[test]
            fn q_derive_is_a_derivation(a in arb_series(), b in arb_series()) {
                let lhs = a.mul(&b).q_derive();
                let rhs = a.q_derive().mul(&b).add(&a.mul(&b.q_derive()));
                prop_assert!(lhs.agrees_with(&rhs));
            }

            #[test]
            fn rescale_is_a_homomorphism(a in arb_series(), b in arb_series(),
                                         n in 1i64..4, d in 1i64..4) {
                let s = r(n, d);
                let lhs = a.mul(&b).rescale(s).unwrap();
                let rhs = a.rescale(s).unwrap().mul(&b.rescale(s).unwrap());
                prop_assert!(lhs.agrees_with(&rhs));
                prop_assert!(a.add(&b).rescale(s).unwrap()
                    .agrees_with(&a.rescale(s).unwrap().add(&b.rescale(s).unwrap())));
            }

            #[test]
            fn invert_is_inverse(a in arb_series()) {
                if let Ok(inv) = a.invert() {
                    prop_assert!(a.mul(&inv).agrees_with(&RationalSeries::one()));
                }
            }
        }
    }
}
