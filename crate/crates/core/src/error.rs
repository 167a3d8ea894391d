use thiserror::Error;

/// Failure modes shared by every transform and operator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameter out of supported range: {0}")]
    Range(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("degenerate slice: {0}")]
    Degenerate(String),
    #[error("unbounded support: {0}")]
    UnboundedSupport(String),
    #[error("non-integrable singularity: {0}")]
    NonIntegrable(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn range<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Range(msg.into()))
}
