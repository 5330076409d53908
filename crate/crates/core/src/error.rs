use thiserror::Error;

use crate::poly::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("polynomial `{0}` is not homogeneous")]
    NonHomogeneous(String),

    #[error("{q} is not a power of the characteristic {p}")]
    NotPowerOfP { q: u64, p: u32 },

    #[error("quotient is not Artinian: graded pieces still nonzero at degree {bound}")]
    NonArtinian { bound: u32 },

    #[error("resource budget exceeded: {0}")]
    ResourceExhausted(String),

    #[error("relations do not form a complete intersection: {0}")]
    NotCompleteIntersection(String),

    #[error("computation did not stabilize: {0}")]
    NotStabilized(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
