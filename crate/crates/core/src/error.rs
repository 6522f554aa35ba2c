use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller asked for something outside an operation's domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A computed quantity disagrees with a value it is forced to equal
    /// (Riemann-Roch dimension, rank, lift residual, ...). Always a bug.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("size guard exceeded: {0}")]
    Guard(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no Conway polynomial for p={p}, k={k} in the loaded table")]
    MissingConway { p: u32, k: u32 },

    #[error("rejected Conway entry p={p}, k={k}: {reason}")]
    BadConway { p: u32, k: u32, reason: String },

    #[error("elements from different field contexts ({left} vs {right})")]
    FieldMismatch { left: u32, right: u32 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Consistency(_) => 3,
            Error::Io(_) | Error::Json(_) => 1,
            _ => 2,
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}
