use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};



/// Polynomial in the formal marker `x` with exact rational coefficients.
///
/// Stored densely by degree with trailing zeros trimmed, so the zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MarkerPoly(Vec<BigRational>);

impl MarkerPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        MarkerPoly(coeffs)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c·x^deg`.
    pub fn monomial(c: BigRational, deg: usize) -> Self {
        let mut v = vec![BigRational::zero(); deg + 1];
        v[deg] = c;
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    /// Coefficient of `x^deg`.
    pub fn coeff(&self, deg: usize) -> BigRational {
        self.0.get(deg).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Even (`odd == false`) or odd part.
    pub fn parity_part(&self, odd: bool) -> Self {
        let v = self
            .0
            .iter()
            .enumerate()
            .map(|(d, c)| if (d % 2 == 1) == odd { c.clone() } else { BigRational::zero() })
            .collect();
        Self::from_coeffs(v)
    }
}

impl super::Coefficient for MarkerPoly {
    fn c_zero() -> Self {
        MarkerPoly(Vec::new())
    }

    fn c_one() -> Self {
        MarkerPoly(vec![BigRational::one()])
    }

    fn c_is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }

    fn add_assign_ref(&mut self, other: &Self) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), BigRational::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return Self::c_zero();
        }
        let mut v = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::from_coeffs(v)
    }

    fn neg_ref(&self) -> Self {
        MarkerPoly(self.0.iter().map(|c| -c).collect())
    }

    fn scale(&self, r: &BigRational) -> Self {
        Self::from_coeffs(self.0.iter().map(|c| c * r).collect())
    }

    fn try_inverse(&self) -> Option<Self> {
        match self.0.as_slice() {
            [c] if !c.is_zero() => Some(MarkerPoly(vec![c.recip()])),
            _ => None,
        }
    }
}

impl fmt::Display for MarkerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{d}")?,
            }
        }
        Ok(())
    }
}
