use thiserror::Error;

/// Errors raised when constructing codes or invoking operations with
/// inconsistent parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PacError {
    #[error("block length {0} is not a power of two >= 2")]
    BlockLength(usize),
    #[error("message length {k} out of range for block length {n}")]
    MessageLength { k: usize, n: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid information set: {0}")]
    InfoSet(String),
    #[error("invalid generator taps: {0}")]
    Taps(String),
    #[error("list size {0} is not a power of two >= 1")]
    ListSize(usize),
    #[error("alpha must be >= 1, got {0}")]
    Alpha(f64),
    #[error("code rate must lie in (0, 1], got {0}")]
    Rate(f64),
    #[error("index {0} is not a flippable information index")]
    FlipIndex(usize),
    #[error("exhaustive decoding limited to K <= {max}, got {k}")]
    TooManyMessages { k: usize, max: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, PacError>;
