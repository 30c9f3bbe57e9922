use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    Dimension { left: usize, right: usize },

    #[error("{what} needs {requested} qubits, above the dense limit of {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("labeling failed: {0}")]
    Labeling(String),

    #[error("spectrum mismatch: {0}")]
    Mismatch(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            // unreadable inputs or output paths are invocation problems
            Error::Usage(_) | Error::Io(_) => 2,
            Error::Parse { .. } | Error::Json(_) => 3,
            Error::Dimension { .. }
            | Error::Capacity { .. }
            | Error::Contract(_)
            | Error::Labeling(_) => 4,
            Error::Mismatch(_) => 5,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
