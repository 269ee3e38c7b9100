use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported order {nu}: supported range is [0, 5]")]
    UnsupportedOrder { nu: f64 },
    /// Iteration or quadrature gave up; `estimate` is the best value reached.
    #[error("{what} did not converge (estimate {estimate:e}, error bound {error:e})")]
    Numeric {
        what: &'static str,
        estimate: f64,
        error: f64,
    },
    #[error("not supported: {0}")]
    Capability(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

