use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension n = {n}: {reason}")]
    InvalidDimension { n: usize, reason: &'static str },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not in su(n): {0}")]
    NotInAlgebra(String),

    #[error("invalid probe matrix: {0}")]
    InvalidProbe(String),

    #[error("tensor is not diagonal in the chosen basis (max off-diagonal {max_off_diagonal:e})")]
    NotDiagonal { max_off_diagonal: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    #[error("too few samples: {got} (need at least {min})")]
    TooFewSamples { got: usize, min: usize },

    #[error("invalid partition {0:?}")]
    InvalidPartition(Vec<usize>),
}

pub type Result<T> = std::result::Result<T, Error>;
