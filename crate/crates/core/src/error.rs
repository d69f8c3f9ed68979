use thiserror::Error;

/// Errors raised by the constructions and searches in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("invalid class table: {0}")]
    InvalidTable(String),
    #[error("class representative has shape {found}, table row expects {expected}")]
    ShapeMismatch { expected: String, found: String },
    #[error("subset is not orientable under the group")]
    NotOrientable,
    #[error("group has more than {limit} elements")]
    GroupTooLarge { limit: usize },
    #[error("grade mismatch: expected {expected}, got {found}")]
    GradeMismatch { expected: usize, found: usize },
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("linking space is not elementary of exponent {0}")]
    NotElementary(u64),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("invalid root system type {0}")]
    InvalidType(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("local datum of {0} is symbolic")]
    SymbolicPiece(String),
    #[error("roots do not span the ambient space")]
    RootsDoNotSpan,
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
