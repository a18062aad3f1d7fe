use jsr_core::JsrError;
use thiserror::Error;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;
pub const EXIT_LAMBDA: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input: {0}")]
    Parse(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Core(#[from] JsrError),
    #[error("{error}; raise --n-cls (classification depth was {depth})")]
    LambdaTooWide { error: JsrError, depth: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io { .. } => EXIT_PARSE,
            CliError::LambdaTooWide { .. } => EXIT_LAMBDA,
            CliError::Core(e) => match e {
                JsrError::BudgetExceeded { .. } => EXIT_BUDGET,
                JsrError::Inconsistent(_) | JsrError::InvariantViolation(_) => EXIT_INCONSISTENT,
                JsrError::LambdaTooWide { .. } | JsrError::LambdaZero => EXIT_LAMBDA,
                _ => EXIT_PARSE,
            },
        }
    }
}
