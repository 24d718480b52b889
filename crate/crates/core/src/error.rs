use thiserror::Error;

/// Errors produced by the solvers, the oracles and the instance reader.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BcpError {
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The input describes something the library refuses to model.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An enumeration or search ran out of its vertex, partition or time allowance.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// An internal invariant failed; indicates a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, BcpError>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(BcpError::Contract(msg.into()))
}
