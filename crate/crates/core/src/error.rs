use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("not normalized: total mass {total} differs from 1 by more than {tol:e}")]
    NotNormalized { total: f64, tol: f64 },

    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },

    #[error("derivative does not conserve probability: sum {sum:e}")]
    UnnormalizedFlow { sum: f64 },

    #[error("time must increase: last {last}, new {new}")]
    NonMonotoneTime { last: f64, new: f64 },

    #[error("step size {dt:e} exceeds stability limit {limit:e}")]
    StabilityViolation { dt: f64, limit: f64 },

    #[error("negative density {value:e} below clipping threshold")]
    NegativeDensity { value: f64 },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace collapsed to {0:e}")]
    TraceCollapse(f64),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
