use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("element or set does not belong to this group: {0}")]
    GroupMismatch(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("set is not sum-free: {0}")]
    NotSumFree(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("group exceeds the size guard ({n} > {guard}) for {operation}")]
    TooLarge {
        operation: &'static str,
        n: usize,
        guard: usize,
    },

    #[error("budget exceeded in {operation} after {nodes} nodes ({found} results so far)")]
    BudgetExceeded {
        operation: &'static str,
        nodes: u64,
        found: u64,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
