//! Error type shared by all siglab-core modules.

use thiserror::Error;

/// Errors produced by the numerical kernels, samplers and experiment runners.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A covariance matrix failed the Cholesky positivity check.
    #[error("matrix is not positive semidefinite: pivot {pivot:e} at index {index}")]
    NotPositiveSemidefinite { index: usize, pivot: f64 },

    /// The design matrix has (numerically) dependent columns.
    #[error("design matrix is rank deficient: pivot {pivot:e} below threshold {threshold:e}")]
    RankDeficient { pivot: f64, threshold: f64 },

    /// A statistic is undefined because a standard error is zero (perfect fit).
    #[error("degenerate fit: zero standard error for coefficient {index}")]
    DegenerateFit { index: usize },

    /// An experiment configuration failed validation.
    #[error("invalid config: {0}")]
    Config(String),

    /// A replication task failed; carries the replication index.
    #[error("replication {index} failed: {source}")]
    Replication {
        index: u64,
        #[source]
        source: Box<Error>,
    },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
