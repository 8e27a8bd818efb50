use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("invalid argument `{name}`: {reason}")]
    Domain { name: &'static str, reason: String },

    /// A covariance matrix is not positive semidefinite beyond tolerance.
    #[error("covariance is not positive semidefinite: {0}")]
    NotPsd(String),

    /// Both the circulant embedding and the Cholesky fallback failed.
    #[error("sampler construction failed: {0}")]
    Sampler(String),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: estimate {estimate}, error {error}")]
    Quadrature { estimate: f64, error: f64 },

    /// Preconditions of an inequality check are violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("worker pool: {0}")]
    Pool(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPsd(_) | Error::Sampler(_) | Error::Quadrature { .. }
        )
    }
}

/// Rejects non-finite or out-of-range values with a named diagnostic.
pub(crate) fn ensure(
    cond: bool,
    name: &'static str,
    reason: impl FnOnce() -> String,
) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain(name, reason()))
    }
}
