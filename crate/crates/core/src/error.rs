use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("factorization {dims:?} does not describe dimension {dim}")]
    Factorization { dims: Vec<usize>, dim: usize },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemIndex { index: usize, count: usize },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("trace is {0}, expected 1")]
    Trace(f64),

    #[error("matrix is not invertible (condition estimate {condition:e})")]
    NotInvertible { condition: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("error rate {epsilon} outside [0, {max})")]
    ErrorRate { epsilon: f64, max: f64 },

    #[error("invalid noise description: {0}")]
    InvalidNoise(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("decomposition is not orthogonal (max deviation {0:e})")]
    NotOrthogonal(f64),

    #[error("decomposition does not reproduce the target map (deviation {0:e})")]
    Reconstruction(f64),

    #[error("inconsistent result: {0}")]
    Inconsistent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
