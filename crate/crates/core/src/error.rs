//! Crate-wide error type.

/// Errors produced by the numeric and exact kernels.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested accuracy cannot be met (e.g. |q| too close to 1).
    #[error("precision error: {0}")]
    Precision(String),
    /// The (key, route) or parameter combination is not implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Series arithmetic between incompatible expansion variables.
    #[error("variable tag mismatch: expected {expected}, got {got}")]
    TagMismatch { expected: String, got: String },
    /// A node/order/iteration budget ran out before the tolerance was met.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    /// Invariant violation that indicates a bug, not a bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
