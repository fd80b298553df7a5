use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("invalid input: {0}")]
    Input(String),

    /// A file could not be parsed. Line and column are 1-based.
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// The input is well formed but violates a hypothesis of the bound being evaluated.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// Problem exceeds a desk-scale size guard.
    #[error("problem too large: {0}")]
    TooLarge(String),

    /// A numerical routine failed in a way that valid input should never trigger.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
