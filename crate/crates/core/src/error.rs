use thiserror::Error;

/// Errors raised by distribution construction, generator evaluation and
/// entropy evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation, or a parameter
    /// set violates its sign constraints.
    #[error("domain error: {0}")]
    Domain(String),

    /// A result is not representable as a finite `f64`.
    #[error("range error: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn finite(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Range(format!("{what} is not finite ({value})")))
    }
}
