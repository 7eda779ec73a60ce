use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix data has length {len}, expected {rows}x{cols}")]
    Shape { rows: usize, cols: usize, len: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace:.12}, expected 1")]
    Trace { trace: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("block is not maximally correlated: {0}")]
    NotMaximallyCorrelated(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("optimizer failure: {0}")]
    Optimizer(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
