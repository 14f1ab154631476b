use thiserror::Error;

/// Errors raised by the library.
///
/// The variants fall into two families that callers (notably the CLI) treat
/// differently: mathematical precondition failures and resource budgets.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("unsupported field extension degree {0} (expected 1 or 2)")]
    UnsupportedDegree(u32),

    #[error("unsupported matrix size {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("division by zero")]
    DivisionByZero,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("size cap exceeded: {what} has {size} elements, cap is {cap}")]
    SizeCap { what: String, size: u128, cap: u128 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    /// True for errors that stem from resource limits rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_) | Error::SizeCap { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
