use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: u64, arity: usize },
    #[error("coordinate {coord} out of range 1..={arity}")]
    CoordinateOutOfRange { coord: usize, arity: usize },
    #[error("arity {0} outside supported range 1..=32")]
    UnsupportedArity(usize),
    #[error("truth table for arity {arity} needs {expected} hex digits, got {got}")]
    TableLength { arity: usize, expected: usize, got: usize },
    #[error("malformed hex truth table: {0}")]
    MalformedHex(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
