//! Exact-arithmetic toolkit for 1-point functions of the Moonshine module.
//!
//! Everything is computed through [`qseries::RationalSeries`], a truncated
//! q-series with rational exponents and arbitrary-precision rational
//! coefficients. On top of it sit
//!
//! - [`modular`]: Bernoulli numbers, Eisenstein series, eta, the discriminant,
//!   the three theta products, the weight-raising derivative and finite bases
//!   for holomorphic, cusp and pole-order-one form spaces;
//! - [`virasoro`]: normal ordering in highest-weight Virasoro modules and the
//!   trace recursion for descendants;
//! - [`fock`]: closed-form Heisenberg Fock traces, brute-force operator oracles
//!   and the trace function of `e^λ + e^{-λ}`;
//! - [`lattice`]: integral lattices, short-vector enumeration, theta series,
//!   eta products and the equivariant trace;
//! - [`cli`]: the `moonshine` command-line front end.

pub mod cli;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod linalg;
pub mod modular;
pub mod qseries;
pub mod verify;
pub mod virasoro;

pub use error::{Error, Result};
pub use qseries::{MarkerPoly, MarkerSeries, QSeries, RationalSeries};

/// Exact rational coefficient type used throughout the crate.
pub type Rational = num_rational::BigRational;
