use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value at {location}")]
    NonFinite { location: String },

    #[error("truncation bound {target:e} not reached (attained {attained:e})")]
    Truncation { target: f64, attained: f64 },

    #[error("quadrature target {target:e} not met (attained {attained:e})")]
    Quadrature { target: f64, attained: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
