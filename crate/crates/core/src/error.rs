use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input that does not describe a valid object (out-of-range vertex, empty clause, ...).
    #[error("malformed input: {0}")]
    Malformed(String),
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    /// An internal invariant of the algorithm did not hold. Always a bug.
    #[error("internal invariant failed: {0}")]
    Internal(String),
    /// A brute-force routine refused an input larger than its budget.
    #[error("brute-force budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! internal {
    ($($arg:tt)*) => {
        $crate::error::Error::Internal(format!($($arg)*))
    };
}

macro_rules! contract {
    ($($arg:tt)*) => {
        $crate::error::Error::Contract(format!($($arg)*))
    };
}

pub(crate) use contract;
pub(crate) use internal;
