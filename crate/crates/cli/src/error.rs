use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qigf_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Input { path: PathBuf, line: usize, msg: String },
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    /// Process exit status: 2 for usage, 3 for numeric, 4 for I/O problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Pool(_) => 2,
            CliError::Core(_) => 3,
            CliError::Io { .. } | CliError::Input { .. } | CliError::Csv(_) | CliError::Json(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) | CliError::Pool(_) => "UsageError",
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } | CliError::Csv(_) | CliError::Json(_) => "IoError",
            CliError::Input { .. } => "InputError",
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
