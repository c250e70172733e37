use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a supported prime characteristic")]
    NotPrime(u64),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("word length {0} exceeds the supported maximum of {max}", max = crate::word::MAX_WORD_LEN)]
    WordTooLong(u32),
    #[error("capacity exceeded at degree {degree}: {what}")]
    Capacity { degree: u32, what: String },
    #[error("tower has {built} levels, level {needed} is required")]
    Depth { needed: u32, built: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("vectors are not linearly independent")]
    NotIndependent,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
