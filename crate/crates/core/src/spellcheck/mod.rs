//! Noisy-channel spelling correction for English captions.
//!
//! A candidate replacement `c` for an out-of-dictionary token `t` that
//! follows `p` is scored as
//! `ln P(t | c) + ln P(c) + ln P(c | p)`: a word-level error model trained
//! on a misspelling corpus, and Laplace-smoothed unigram and bigram language
//! models. Candidates are every dictionary word within four unit edits.

mod candidates;
mod corrector;
mod error_model;
mod language_model;

use std::path::PathBuf;

use thiserror::Error;

pub use candidates::{generate_candidates, Candidate, Dictionary, DEFAULT_MAX_COST};
pub use corrector::{correct_token, CorrectionStats, SpellChecker};
pub use error_model::ErrorModel;
pub use language_model::{LanguageModel, SENTENCE_START};

/// Add-one smoothing everywhere.
pub const ALPHA: f64 = 1.0;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{}line {line}: {msg}", source_prefix(file))]
    Format { file: Option<PathBuf>, line: usize, msg: String },
    #[error("{}line {line}: count exceeds the representable range", source_prefix(file))]
    Overflow { file: Option<PathBuf>, line: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn source_prefix(file: &Option<PathBuf>) -> String {
    file.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default()
}

impl ModelError {
    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        ModelError::Format { file: None, line, msg: msg.into() }
    }

    pub(crate) fn in_file(self, path: &std::path::Path) -> Self {
        match self {
            ModelError::Format { line, msg, .. } => ModelError::Format { file: Some(path.to_path_buf()), line, msg },
            ModelError::Overflow { line, .. } => ModelError::Overflow { file: Some(path.to_path_buf()), line },
            other => other,
        }
    }
}

pub(crate) fn open(path: &std::path::Path) -> Result<std::io::BufReader<std::fs::File>, ModelError> {
    std::fs::File::open(path)
        .map(std::io::BufReader::new)
        .map_err(|source| ModelError::Io { path: path.to_path_buf(), source })
}
