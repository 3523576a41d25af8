use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e} > {tolerance:.1e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("negative eigenvalue {0:.3e} where a positive operator is required")]
    NegativeEigenvalue(f64),

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension {n} exceeds the supported limit {max} for {what}")]
    Capacity { what: &'static str, n: usize, max: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
