use thiserror::Error;

/// Errors surfaced by every operation in the crate.
///
/// The CLI maps [`Error::Capacity`] to exit code 3 and everything that is the
/// caller's fault (arguments, preconditions, parse failures) to exit code 2.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    Argument { name: String, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("capacity exceeded: {what} (cap {cap})")]
    Capacity { what: String, cap: u64 },

    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),

    #[error("no sampled support points inside the ball ({samples} samples drawn)")]
    EmptySupport { samples: usize },

    #[error("function vanishes on the sampled support; the goodness inequality is undefined")]
    DegenerateFunction,

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn argument(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Argument { name: name.into(), reason: reason.into() }
    }

    pub fn capacity(what: impl Into<String>, cap: u64) -> Self {
        Error::Capacity { what: what.into(), cap }
    }

    pub fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::Parse { line, reason: reason.into() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
