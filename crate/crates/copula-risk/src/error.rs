use thiserror::Error;

/// Errors produced by the model evaluators.
///
/// `Domain` marks arguments outside a function's mathematical domain,
/// `InvalidParameter` marks model parameters that fail validation, and
/// `Numeric` marks evaluations that could not reach their accuracy target
/// (series or quadrature non-convergence, invalid intermediate values).
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("quantile level {level} is unreachable: distribution supremum is {sup}")]
    UnreachableQuantile { level: f64, sup: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
