//! Tab-separated checkpoint files for document pairs and caption matches,
//! plus JSON sidecars for stage counters.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::capalign::CaptionMatch;
use crate::docalign::DocumentPair;
use crate::ingest::{read_documents_file, write_documents_file, SubtitleDocument};
use crate::{Error, Result, Scalar};

const PAIRS_HEADER: &str = "#en_doc_id\tja_doc_id\ttitle_similarity\ttemporal_distance\tbest_shift_s";
const MATCHES_HEADER: &str = "#en_doc_id\tja_doc_id\tja_index\ten_index\tsimilarity\tja_text\ten_text";

fn field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

fn write(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn bad(path: &Path, line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Checkpoint { path: path.to_path_buf(), msg: format!("line {line}: {msg}") }
}

/// Data lines with their 1-based line numbers, header and blank lines skipped.
fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i + 1, l.split('\t').collect()))
}

fn parse<T: std::str::FromStr>(path: &Path, line: usize, s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| bad(path, line, format!("bad {what} `{s}`")))
}

pub fn write_pairs(path: &Path, pairs: &[DocumentPair]) -> Result<()> {
    let mut out = format!("{PAIRS_HEADER}\n");
    for p in pairs {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            field(&p.en_doc_id),
            field(&p.ja_doc_id),
            p.title_similarity,
            p.temporal_distance,
            p.best_shift_s
        );
    }
    write(path, &out)
}

pub fn read_pairs(path: &Path) -> Result<Vec<DocumentPair>> {
    let text = read(path)?;
    rows(&text)
        .map(|(n, f)| {
            if f.len() != 5 {
                return Err(bad(path, n, format!("expected 5 fields, found {}", f.len())));
            }
            Ok(DocumentPair {
                en_doc_id: f[0].to_string(),
                ja_doc_id: f[1].to_string(),
                title_similarity: parse(path, n, f[2], "title similarity")?,
                temporal_distance: parse(path, n, f[3], "temporal distance")?,
                best_shift_s: parse(path, n, f[4], "shift")?,
            })
        })
        .collect()
}

pub fn write_matches<S: Scalar>(path: &Path, matches: &[CaptionMatch<S>]) -> Result<()> {
    let mut out = format!("{MATCHES_HEADER}\n");
    for m in matches {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            field(&m.en_doc_id),
            field(&m.ja_doc_id),
            m.ja_index,
            m.en_index,
            m.similarity,
            field(&m.ja_text),
            field(&m.en_text)
        );
    }
    write(path, &out)
}

pub fn read_matches<S: Scalar>(path: &Path) -> Result<Vec<CaptionMatch<S>>> {
    let text = read(path)?;
    rows(&text)
        .map(|(n, f)| {
            if f.len() != 7 {
                return Err(bad(path, n, format!("expected 7 fields, found {}", f.len())));
            }
            Ok(CaptionMatch {
                en_doc_id: f[0].to_string(),
                ja_doc_id: f[1].to_string(),
                ja_index: parse(path, n, f[2], "ja index")?,
                en_index: parse(path, n, f[3], "en index")?,
                similarity: parse(path, n, f[4], "similarity")?,
                ja_text: f[5].to_string(),
                en_text: f[6].to_string(),
            })
        })
        .collect()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let body = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    write(path, &body)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Checkpoint { path: path.to_path_buf(), msg: e.to_string() })
}

pub fn write_docs(path: &Path, docs: &[SubtitleDocument]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    write_documents_file(path, docs).map_err(|e| Error::io(path, e))
}

pub fn read_docs(path: &Path) -> Result<Vec<SubtitleDocument>> {
    Ok(read_documents_file(path)?)
}

/// File layout under `<output_dir>/checkpoints`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckpointLayout {
    pub dir: PathBuf,
}

impl CheckpointLayout {
    pub fn new(output_dir: &Path) -> Self {
        CheckpointLayout { dir: output_dir.join("checkpoints") }
    }

    pub fn config(&self) -> PathBuf {
        self.dir.join("config.toml")
    }

    pub fn docs(&self, stage: &str, lang: &str) -> PathBuf {
        self.dir.join(format!("{stage}.{lang}.tsv"))
    }

    pub fn table(&self, stage: &str) -> PathBuf {
        self.dir.join(format!("{stage}.tsv"))
    }

    /// Written last for each stage; its presence marks the stage complete.
    pub fn stats(&self, stage: &str) -> PathBuf {
        self.dir.join(format!("{stage}.stats.json"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_and_matches_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let pairs = vec![DocumentPair {
            en_doc_id: "en/a.srt".into(),
            ja_doc_id: "ja/a.srt".into(),
            title_similarity: 0.9333333333333333,
            temporal_distance: 0.0013,
            best_shift_s: -7,
        }];
        let p = dir.path().join("pairs.tsv");
        write_pairs(&p, &pairs).unwrap();
        assert_eq!(read_pairs(&p).unwrap(), pairs);

        let matches = vec![CaptionMatch {
            en_doc_id: "en/a.srt".into(),
            ja_doc_id: "ja/a.srt".into(),
            ja_index: 3,
            en_index: 4,
            similarity: 0.1f64 + 0.2,
            ja_text: "猫\tだ".into(),
            en_text: "a cat".into(),
        }];
        let m = dir.path().join("m.tsv");
        write_matches(&m, &matches).unwrap();
        let back: Vec<CaptionMatch<f64>> = read_matches(&m).unwrap();
        assert_eq!(back[0].similarity, matches[0].similarity);
        assert_eq!(back[0].ja_text, "猫 だ");
    }

    #[test]
    fn malformed_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("pairs.tsv");
        std::fs::write(&p, "a\tb\tx\t0\t0\n").unwrap();
        assert!(matches!(read_pairs(&p), Err(Error::Checkpoint { .. })));
    }
}
