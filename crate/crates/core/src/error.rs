use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid interval [{lower}, {upper}]")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("invalid transition matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("length scale must be positive and finite, got {0}")]
    InvalidLengthScale(f64),

    #[error("chain is not irreducible; stationary distribution is not unique")]
    NotIrreducible,

    #[error("linear system is singular beyond the expected rank deficiency of one")]
    Singular,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("value {0} lies outside [0, 1]")]
    OutOfRange(f64),

    #[error("invalid region config: {0}")]
    InvalidRegionConfig(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node {node} out of range for a network of {nodes} nodes")]
    NodeOutOfRange { node: usize, nodes: usize },

    #[error("series too short: need at least {needed} samples, got {actual}")]
    SeriesTooShort { needed: usize, actual: usize },

    #[error("sample times must be strictly increasing (index {0})")]
    NonIncreasingTimes(usize),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
