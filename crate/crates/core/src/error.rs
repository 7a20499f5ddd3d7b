use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("observation has zero probability under the prior")]
    ImpossibleObservation,

    #[error("constraint mismatch: {0}")]
    ConstraintMismatch(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("{what} exceeds limit {limit}")]
    TooLarge { what: String, limit: u64 },

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("unknown utility kind `{0}`")]
    UnknownUtility(String),
}

impl Error {
    /// Short machine-readable tag, used in diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::ImpossibleObservation => "impossible-observation",
            Error::ConstraintMismatch(_) => "constraint-mismatch",
            Error::Infeasible(_) => "infeasible",
            Error::TooLarge { .. } => "too-large",
            Error::Syntax { .. } => "syntax",
            Error::Validation(_) => "validation",
            Error::UnknownUtility(_) => "unknown-utility",
        }
    }

    pub(crate) fn too_large(what: impl Into<String>, limit: u64) -> Self {
        Error::TooLarge {
            what: what.into(),
            limit,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
