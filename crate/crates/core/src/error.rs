use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("derivative order {k} exceeds degree {d}")]
    OrderExceedsDegree { k: u32, d: u32 },

    #[error("condition number undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("estimate inapplicable: {0}")]
    HypothesisViolated(String),

    #[error("support too small: {0}")]
    SupportTooSmall(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("root oracle failed: {0}")]
    OracleFailed(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
