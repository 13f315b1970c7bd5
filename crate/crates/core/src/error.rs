use std::path::PathBuf;

use thiserror::Error;

use crate::capalign::ResourceError;
use crate::filter::FilterError;
use crate::ingest::IngestError;
use crate::normalize::NormalizeError;
use crate::spellcheck::ModelError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("checkpoint {path}: {msg}")]
    Checkpoint { path: PathBuf, msg: String },
    #[error("audit failed with {0} violation(s)")]
    AuditFailed(usize),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
