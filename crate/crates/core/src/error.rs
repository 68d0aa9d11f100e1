use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mismatched lengths or dimensions.
    #[error("shape error: {0}")]
    Shape(String),

    /// A spec string failed to parse.
    #[error("parse error at position {position}: expected {expected}, found {found:?}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },

    /// A numerical routine could not reach its target tolerance.
    #[error("numerical accuracy: achieved {achieved:e}, target {target:e}")]
    Accuracy { achieved: f64, target: f64 },

    /// A precondition on the inputs was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
