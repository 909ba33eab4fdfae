use thiserror::Error;

/// Errors shared by the forward models, optimizers and inversion drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input (wrong sizes, empty data, bad bounds).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A linear system that should be regular turned out singular.
    #[error("singular system: {0}")]
    Singular(String),

    /// Special-function evaluation left the representable range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// An iterative method exhausted its budget without reaching its target.
    #[error("method failed: {0}")]
    Method(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
