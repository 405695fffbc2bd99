use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Invalid experiment spec; `path` is the offending field, e.g. `methods[1].alpha`.
    #[error("{path}: {reason}")]
    Spec { path: String, reason: String },
    #[error("{0}")]
    Core(#[from] heavyball::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

pub(crate) fn spec_err(path: impl Into<String>, reason: impl Into<String>) -> HarnessError {
    HarnessError::Spec {
        path: path.into(),
        reason: reason.into(),
    }
}

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> HarnessError {
    let path = path.into();
    move |source| HarnessError::Io { path, source }
}
