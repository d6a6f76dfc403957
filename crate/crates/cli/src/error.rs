use std::path::PathBuf;

use thiserror::Error;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{0}")]
    Library(#[from] sure_svt::Error),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 0 success, 1 verification or numerical failure, 2 bad arguments,
    /// 3 I/O or file format error.
    pub fn exit_code(&self) -> i32 {
        use sure_svt::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Format { .. } => 3,
            CliError::Verification(_) => 1,
            CliError::Library(e) => match e {
                E::BadKind(_)
                | E::BadShape(_)
                | E::BadBracket { .. }
                | E::InvalidArgument(_)
                | E::ShapeMismatch(_) => 2,
                _ => 1,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
