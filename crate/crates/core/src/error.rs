use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JsrError {
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),

    #[error("negative entry {0}: only nonnegative matrices are supported")]
    NegativeEntry(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix set is empty")]
    EmptySet,

    #[error("set constants are undefined for an all-zero matrix set")]
    ConstantsUndefined,

    #[error("length {n} out of range 1..={max}")]
    OutOfRange { n: usize, max: usize },

    #[error("frontier budget of {limit} products exceeded at length {length}")]
    BudgetExceeded { limit: usize, length: usize },

    #[error("vertex {to} is unreachable from vertex {from}")]
    Unreachable { from: usize, to: usize },

    #[error("dependency graph is not strongly connected ({components} components)")]
    NotConnected { components: usize },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error(
        "lambda enclosure too wide (relative width {rel_width:.3e} > {limit:.3e}); raise the classification depth"
    )]
    LambdaTooWide { rel_width: f64, limit: f64 },

    #[error("lambda lower bound is zero; growth verification needs a positive rate")]
    LambdaZero,

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = JsrError> = std::result::Result<T, E>;
