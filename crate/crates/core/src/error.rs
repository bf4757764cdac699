use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("index {0} is out of range (indices are 1-based)")]
    InvalidIndex(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("not a permutation of 1..{0}")]
    NotPermutation(usize),

    #[error("operation too expensive: {0}")]
    Cost(String),

    #[error("singular: {0}")]
    Singular(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not enough symbols: need {needed}, have {available}")]
    SymbolSupply { needed: usize, available: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
