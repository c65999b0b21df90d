use num_rational::Rational64;
use thiserror::Error;

/// Errors raised by the series engine and the modules built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has no known term below its truncation order")]
    NoLeadingTerm,

    #[error("leading coefficient is not invertible")]
    NonUnitLeading,

    #[error("coefficient of q^{exponent} is unknown: series only known below q^{order}")]
    BeyondOrder {
        exponent: Rational64,
        order: Rational64,
    },

    #[error("exact series would expand to infinitely many terms; truncate it first")]
    Unbounded,

    #[error("exponential needs strictly positive valuation, found a term at q^{0}")]
    NonPositiveValuation(Rational64),

    #[error("truncation order too small: need q^{needed}, have q^{available}")]
    InsufficientOrder {
        needed: Rational64,
        available: Rational64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("independent computation routes disagree: {0}")]
    RouteMismatch(String),

    #[error("lattice: {0}")]
    Lattice(String),

    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
