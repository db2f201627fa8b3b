use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid weight: weights must be nonzero")]
    InvalidWeight,

    #[error("dimension mismatch: arity {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no matching: weight {weight} occurs an odd number of times")]
    NoMatching { weight: u64 },

    #[error("enumeration cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("stale move: {0}")]
    StaleMove(String),

    #[error("parameter `{name}` must be a positive integer")]
    NonPositiveParameter { name: &'static str },
}
