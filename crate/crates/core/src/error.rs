use thiserror::Error;

/// Errors raised by bound evaluation, searches and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The fixed-point solver did not converge.
    #[error("no convergence after {iterations} iterations (last step {last_step:e})")]
    IterationLimit { iterations: usize, last_step: f64 },

    /// A requested search or enumeration is too large to run.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A malformed argument, such as an unknown tag or an empty input.
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed distribution spec: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
