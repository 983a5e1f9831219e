use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("pitch undefined: the positive coefficients sum to less than the right-hand side")]
    PitchUndefined,

    #[error("{what} of {size} exceeds the guard of {limit}")]
    GuardExceeded { what: &'static str, size: u128, limit: u128 },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
