use thiserror::Error;

/// Errors produced by matrix validation, factorizations, solvers, and I/O.
#[derive(Debug, Error)]
pub enum SpdError {
    #[error("matrix is not symmetric: |A[{i},{j}] - A[{j},{i}]| = {delta:.3e} exceeds tolerance")]
    NotSymmetric { i: usize, j: usize, delta: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("eigenvalue solver did not converge within {max_iter} iterations")]
    NoConvergence { max_iter: usize },

    #[error("linear solve failed")]
    SolveFailure,

    #[error("factorization failed")]
    FactorizationFailure,

    #[error("interpolation result is not positive definite")]
    NonPositiveResult,

    #[error("mean iteration did not converge within {max_cycles} cycles (last gap {gap:.3e})")]
    MeanNoConvergence { max_cycles: usize, gap: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, SpdError>;
