use std::path::PathBuf;

/// Failures of the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Bad flags, unknown targets, malformed input files.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] wbnn_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl AppError {
    pub fn usage(msg: impl Into<String>) -> Self {
        AppError::Usage(msg.into())
    }

    /// 1 for usage errors, 2 for everything that fails at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 1,
            _ => 2,
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
