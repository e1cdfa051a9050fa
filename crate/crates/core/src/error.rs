use thiserror::Error;

/// Errors raised by the algebraic and numeric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    #[error("unsupported expression: {0}")]
    Unsupported(String),

    #[error("equality undecided at expansion level {level} (cap {cap})")]
    UndecidedAtLevel { level: usize, cap: usize },

    #[error("invalid endomorphism: {0}")]
    InvalidEndomorphism(String),

    #[error("ill-typed term at {position}: {message}")]
    IllTyped { position: String, message: String },

    #[error("rule {rule} does not match at {position}: {message}")]
    RuleMismatch {
        rule: String,
        position: String,
        message: String,
    },

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
