use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An identity that must hold by construction did not (e.g. a quotient that
    /// should be an integer was not). Always indicates a bug.
    #[error("internal consistency error: {0}")]
    Consistency(String),
    /// Exhaustive enumeration was requested beyond the configured bound.
    #[error(
        "refusing to enumerate trees with n = {n}: limit is {limit} ((2n-5)!! grows too fast)"
    )]
    EnumerationLimit { n: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::Error::Domain(format!($($arg)*))
    };
}
pub(crate) use domain;
