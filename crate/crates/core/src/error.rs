use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("vector norm squared is {norm_sqr}, expected 1")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not idempotent (max deviation {deviation:e})")]
    NotIdempotent { deviation: f64 },

    /// The assembled state is not supported on the symmetric subspace.
    #[error("state is not symmetric: residual {residual:e}")]
    NonSymmetricState { residual: f64 },

    /// The total state is symmetric but one of its product terms is not.
    #[error("term {index} is not in the symmetric subspace: residual {residual:e}")]
    NonSymmetricTerm { index: usize, residual: f64 },

    #[error("problem size {size} exceeds budget {budget}")]
    BudgetExceeded { size: usize, budget: usize },

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
