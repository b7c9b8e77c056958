use thiserror::Error;

use crate::exactcore::Rational;

/// Failures shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("a real vector of odd length {0} has no complex structure")]
    OddLength(usize),

    #[error("{0} must have squared norm exactly 1")]
    NotUnit(&'static str),

    #[error("the zero vector is not a valid point")]
    ZeroVector,

    #[error("right multiplication by e1 is singular; kernel element {}", crate::exactcore::format_vector(.witness).join(", "))]
    SingularNormalization { witness: Vec<Rational> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("equivariance exponent is not uniform across samples")]
    InconsistentExponent,
}

pub type Result<T> = std::result::Result<T, Error>;
