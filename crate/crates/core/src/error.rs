use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// The variants map one-to-one onto the CLI exit-code families, see
/// [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    Range { vertex: usize, n: usize },

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("instance too large: {what} is {actual}, limit {limit}")]
    Size {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("outside the solver's graph class: {0}")]
    Class(String),

    #[error("precondition violated: {0}")]
    Contract(String),

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn instance(msg: impl Into<String>) -> Self {
        Error::Instance(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Process exit code for this error: 1 verification failure,
    /// 2 parse/instance error, 3 size/class error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Integrity(_) => 1,
            Error::Range { .. } | Error::Instance(_) | Error::Contract(_) | Error::Parse { .. } => 2,
            Error::Size { .. } | Error::Class(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
