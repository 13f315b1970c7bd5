//! Raw subtitle files to [`SubtitleDocument`] values.

mod encoding;
mod interchange;
mod srt;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use encoding::{decode_bytes, detect_encoding, Encoding, EncodingGuess, MIN_VALID_FRACTION};
pub use interchange::{read_documents, read_documents_file, write_documents, write_documents_file};
pub use srt::{format_timestamp, parse_cues, parse_srt, parse_srt_with_min, write_srt, SrtParse, MIN_CUES};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{}: no supported encoding decodes the input (best coverage {best_valid:.3})", show(path))]
    Undecodable { path: Option<PathBuf>, best_valid: f64 },
    #[error("{}: document rejected, {recovered} caption(s) recovered: {reason}", show(path))]
    Rejected { path: Option<PathBuf>, recovered: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

fn show(path: &Option<PathBuf>) -> String {
    path.as_ref().map_or_else(|| "<input>".to_string(), |p| p.display().to_string())
}

impl IngestError {
    fn at(self, p: &Path) -> Self {
        match self {
            IngestError::Undecodable { best_valid, .. } => {
                IngestError::Undecodable { path: Some(p.to_path_buf()), best_valid }
            }
            IngestError::Rejected { recovered, reason, .. } => {
                IngestError::Rejected { path: Some(p.to_path_buf()), recovered, reason }
            }
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    En,
    Ja,
}

impl Language {
    pub fn as_str(self) -> &'static str {
        match self {
            Language::En => "en",
            Language::Ja => "ja",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "en" | "eng" | "english" => Ok(Language::En),
            "ja" | "jp" | "jpn" | "japanese" => Ok(Language::Ja),
            other => Err(format!("unknown language tag {other:?}")),
        }
    }
}

/// One timed cue. `text` is a single line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caption {
    /// 1-based position within the document.
    pub index: usize,
    pub start_ms: u64,
    pub end_ms: u64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtitleDocument {
    pub doc_id: String,
    pub title_raw: String,
    pub language: Language,
    /// Sorted by `start_ms`.
    pub captions: Vec<Caption>,
}

impl SubtitleDocument {
    /// Sorts captions by start time and renumbers them 1..n.
    pub fn new(doc_id: impl Into<String>, title_raw: impl Into<String>, language: Language, mut captions: Vec<Caption>) -> Self {
        captions.sort_by_key(|c| c.start_ms);
        reindex(&mut captions);
        SubtitleDocument { doc_id: doc_id.into(), title_raw: title_raw.into(), language, captions }
    }

    pub fn to_srt(&self) -> String {
        write_srt(&self.captions)
    }
}

pub(crate) fn reindex(captions: &mut [Caption]) {
    for (i, c) in captions.iter_mut().enumerate() {
        c.index = i + 1;
    }
}

fn title_from_path(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Loads one SubRip file; `doc_id` is the path as given.
pub fn load_document(path: &Path, language: Language) -> Result<SubtitleDocument, IngestError> {
    load_document_with_id(path, language, path.display().to_string())
}

pub fn load_document_with_id(
    path: &Path,
    language: Language,
    doc_id: String,
) -> Result<SubtitleDocument, IngestError> {
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io { path: path.to_path_buf(), source })?;
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(IngestError::Rejected {
            path: Some(path.to_path_buf()),
            recovered: 0,
            reason: "empty file".into(),
        });
    }
    let (text, _) = decode_bytes(&bytes).map_err(|e| e.at(path))?;
    let parsed = parse_srt(&text).map_err(|e| e.at(path))?;
    Ok(SubtitleDocument { doc_id, title_raw: title_from_path(path), language, captions: parsed.captions })
}

fn collect_srt_files(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect_srt_files(&path, out)?;
        } else if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("srt")) {
            out.push(path);
        }
    }
    Ok(())
}

/// Result of loading a directory: documents in path order plus per-file failures.
#[derive(Debug, Default)]
pub struct DirectoryLoad {
    pub documents: Vec<SubtitleDocument>,
    pub failures: Vec<IngestError>,
    pub files_seen: usize,
}

/// Loads every `.srt` file under `dir`. Document ids are `<lang>/<relative path>`.
pub fn load_directory(dir: &Path, language: Language) -> Result<DirectoryLoad, IngestError> {
    let mut files = Vec::new();
    collect_srt_files(dir, &mut files).map_err(|source| IngestError::Io { path: dir.to_path_buf(), source })?;
    files.sort();
    let results: Vec<_> = files
        .par_iter()
        .map(|p| {
            let rel = p.strip_prefix(dir).unwrap_or(p);
            let id = format!("{}/{}", language, rel.to_string_lossy().replace('\\', "/"));
            load_document_with_id(p, language, id)
        })
        .collect();
    let mut load = DirectoryLoad { files_seen: files.len(), ..Default::default() };
    for r in results {
        match r {
            Ok(d) => load.documents.push(d),
            Err(e) => load.failures.push(e),
        }
    }
    Ok(load)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_cues() -> String {
        (1..=5)
            .map(|i| format!("{i}\n00:00:0{i},000 --> 00:00:0{i},900\nline {i}\n\n"))
            .collect()
    }

    #[test]
    fn title_from_file_stem() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("show.s01e02.en.srt");
        std::fs::write(&p, five_cues()).unwrap();
        let doc = load_document(&p, Language::En).unwrap();
        assert_eq!(doc.title_raw, "show.s01e02.en");
        assert_eq!(doc.language, Language::En);
        assert_eq!(doc.captions.len(), 5);
    }

    #[test]
    fn empty_file_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("empty.srt");
        std::fs::write(&p, b"").unwrap();
        assert!(matches!(load_document(&p, Language::En), Err(IngestError::Rejected { .. })));
    }

    #[test]
    fn binary_garbage_undecodable() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("junk.srt");
        let bytes: Vec<u8> = (0..2048u32).map(|i| (i.wrapping_mul(2654435761) >> 13) as u8).collect();
        std::fs::write(&p, bytes).unwrap();
        let err = load_document(&p, Language::Ja).unwrap_err();
        assert!(matches!(err, IngestError::Undecodable { path: Some(_), .. }), "{err}");
    }

    #[test]
    fn shift_jis_file_loads() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("drama.ja.srt");
        let src: String = (1..=6)
            .map(|i| format!("{i}\n00:00:0{i},000 --> 00:00:0{i},900\nこんにちは、元気ですか{i}\n\n"))
            .collect();
        std::fs::write(&p, Encoding::ShiftJis.encode(&src)).unwrap();
        let doc = load_document(&p, Language::Ja).unwrap();
        assert_eq!(doc.captions[0].text, "こんにちは、元気ですか1");
    }

    #[test]
    fn directory_ids_and_failures() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir(dir.path().join("s1")).unwrap();
        std::fs::write(dir.path().join("s1/a.srt"), five_cues()).unwrap();
        std::fs::write(dir.path().join("b.srt"), "nope").unwrap();
        std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
        let load = load_directory(dir.path(), Language::En).unwrap();
        assert_eq!(load.files_seen, 2);
        assert_eq!(load.documents.len(), 1);
        assert_eq!(load.documents[0].doc_id, "en/s1/a.srt");
        assert_eq!(load.failures.len(), 1);
    }

    #[test]
    fn language_tags() {
        assert_eq!("EN".parse::<Language>().unwrap(), Language::En);
        assert_eq!("jpn".parse::<Language>().unwrap(), Language::Ja);
        assert!("fr".parse::<Language>().is_err());
    }
}
