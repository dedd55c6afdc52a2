use crate::numeric::RingDescriptor;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("ring mismatch: expected {expected}, found {found}")]
    RingMismatch {
        expected: RingDescriptor,
        found: RingDescriptor,
    },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid number literal {0:?}")]
    NumberParse(String),

    #[error("malformed instance: {0}")]
    BadInstance(String),

    #[error("invalid pattern: {0}")]
    BadPattern(String),

    #[error("pattern does not contain d+1 affinely independent points")]
    RankDeficient,

    #[error("tuple budget exceeded: needs {needed} tuples, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("solver not applicable: {0}")]
    SolverMisuse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
