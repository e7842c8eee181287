use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain ({domain})")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },

    #[error("covariance matrix is not symmetric: |Σ[{row}][{col}] - Σ[{col}][{row}]| = {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    #[error(
        "covariance matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})"
    )]
    NotPsd { min_eigenvalue: f64 },

    #[error("correlated noise has no RLU probability form (|Σ[{row}][{col}]| = {value:e})")]
    CorrelatedNoise { row: usize, col: usize, value: f64 },

    #[error("invalid noise probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: impl Into<String>) -> Self {
        Error::Domain {
            what,
            value,
            domain: domain.into(),
        }
    }
}
