use thiserror::Error;

/// Errors raised by the geometry, channel, design and bound computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero distance between {0}")]
    ZeroDistance(&'static str),

    #[error("non-positive distance {0}")]
    NonpositiveDistance(f64),

    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),

    #[error("elevation of link {link} is ±π/2; azimuth derivative undefined")]
    ElevationSingularity { link: usize },

    #[error("structured design needs k >= 2n slots (n = {n}, k = {k})")]
    InsufficientSlots { n: usize, k: usize },

    #[error("Hadamard design needs a power-of-two slot count, got {0}")]
    NotPowerOfTwo(usize),

    #[error("matrix is rank deficient (rank {rank} < {cols} columns)")]
    RankDeficient { rank: usize, cols: usize },

    #[error("Fisher information matrix is singular (condition number {condition:e})")]
    SingularFim { condition: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
