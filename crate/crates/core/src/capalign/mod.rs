//! Caption alignment inside a document pair. Each Japanese caption is
//! compared with the English captions that start near it: Japanese content
//! words are translated through the lexicon, both sides are embedded as the
//! mean of their word vectors, and the best cosine wins.

mod embedding;
mod extract;
mod lexicon;

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use embedding::{caption_embedding, cosine, EmbeddingTable};
pub use extract::{
    extract_content_words, load_word_list, read_word_list, ContentWord, ContentWordExtractor, EnglishExtractor,
    JapaneseExtractor,
};
pub use lexicon::Lexicon;

use crate::docalign::DocumentPair;
use crate::ingest::SubtitleDocument;
use crate::Scalar;

/// Default half-width of the search window, in seconds.
pub const DEFAULT_WINDOW_S: f64 = 12.5;

#[derive(Debug, Error)]
pub enum ResourceError {
    #[error("{}line {line}: {msg}", file_prefix(path))]
    Format { path: Option<PathBuf>, line: usize, msg: String },
    #[error("{}line {line}: expected {expected} components, found {found}", file_prefix(path))]
    Dimension { path: Option<PathBuf>, line: usize, expected: usize, found: usize },
    #[error("{}line {line}: non-finite vector component", file_prefix(path))]
    NonFinite { path: Option<PathBuf>, line: usize },
    #[error("{}no entries", file_prefix(path))]
    Empty { path: Option<PathBuf> },
    #[error("{}{source}", file_prefix(path))]
    Read {
        path: Option<PathBuf>,
        #[source]
        source: std::io::Error,
    },
}

fn file_prefix(path: &Option<PathBuf>) -> String {
    path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default()
}

impl ResourceError {
    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        ResourceError::Format { path: None, line, msg: msg.into() }
    }

    /// Attaches the file the error came from.
    pub fn in_file(mut self, file: &Path) -> Self {
        let (ResourceError::Format { path, .. }
        | ResourceError::Dimension { path, .. }
        | ResourceError::NonFinite { path, .. }
        | ResourceError::Empty { path }
        | ResourceError::Read { path, .. }) = &mut self;
        path.get_or_insert_with(|| file.to_path_buf());
        self
    }
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>, ResourceError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| ResourceError::Read { path: Some(path.to_path_buf()), source: e })
}

/// Everything caption scoring needs, shared read-only by all workers.
pub struct AlignmentResources<S> {
    pub lexicon: Lexicon,
    pub embeddings: EmbeddingTable<S>,
    pub english: Box<dyn ContentWordExtractor>,
    pub japanese: Box<dyn ContentWordExtractor>,
}

impl<S: Scalar> AlignmentResources<S> {
    /// Resources with the built-in extractors.
    pub fn new(lexicon: Lexicon, embeddings: EmbeddingTable<S>) -> Self {
        let japanese = Box::new(JapaneseExtractor::new(&lexicon));
        AlignmentResources { lexicon, embeddings, english: Box::new(EnglishExtractor::default()), japanese }
    }

    pub fn with_extractors(
        lexicon: Lexicon,
        embeddings: EmbeddingTable<S>,
        english: Box<dyn ContentWordExtractor>,
        japanese: Box<dyn ContentWordExtractor>,
    ) -> Self {
        AlignmentResources { lexicon, embeddings, english, japanese }
    }

    /// Same resources over a different embedding table.
    pub fn map_embeddings(self, f: impl FnOnce(EmbeddingTable<S>) -> EmbeddingTable<S>) -> Self {
        AlignmentResources { embeddings: f(self.embeddings), ..self }
    }

    fn lookup_form<'w>(&self, w: &'w ContentWord) -> Option<&'w str> {
        [w.stem.as_str(), w.surface.as_str()].into_iter().find(|k| self.embeddings.get(k).is_some())
    }

    /// Embedding keys for an English caption: each content word's stem, or
    /// its surface form when only that is in the table.
    pub fn english_words(&self, text: &str) -> Vec<String> {
        self.english_keys(&self.english.extract(text))
    }

    fn english_keys(&self, words: &[ContentWord]) -> Vec<String> {
        words.iter().filter_map(|w| self.lookup_form(w).map(str::to_string)).collect()
    }

    /// English embedding keys for a Japanese caption. Each content word is
    /// looked up by surface form, then by base form; every gloss found is
    /// passed through the English extractor.
    pub fn japanese_words(&self, text: &str) -> Vec<String> {
        let words = self.japanese.extract(text);
        let stems: Vec<String> = words
            .iter()
            .filter_map(|w| {
                if self.lexicon.contains(&w.surface) {
                    Some(w.surface.clone())
                } else if self.lexicon.contains(&w.stem) {
                    Some(w.stem.clone())
                } else {
                    None
                }
            })
            .collect();
        let glosses = translate_stems(&stems, &self.lexicon);
        glosses.iter().flat_map(|g| self.english_keys(&self.english.extract(g))).collect()
    }

    pub fn english_embedding(&self, text: &str) -> Option<Vec<S>> {
        caption_embedding(&self.english_words(text), &self.embeddings)
    }

    pub fn japanese_embedding(&self, text: &str) -> Option<Vec<S>> {
        caption_embedding(&self.japanese_words(text), &self.embeddings)
    }
}

/// All glosses of each stem, concatenated; stems missing from the lexicon
/// contribute nothing.
pub fn translate_stems(stems: &[String], lexicon: &Lexicon) -> Vec<String> {
    stems.iter().filter_map(|s| lexicon.get(s)).flatten().cloned().collect()
}

/// Cosine between the translated Japanese embedding and the English one.
pub fn caption_similarity<S: Scalar>(ja_text: &str, en_text: &str, resources: &AlignmentResources<S>) -> Option<S> {
    let ja = resources.japanese_embedding(ja_text)?;
    let en = resources.english_embedding(en_text)?;
    cosine(&ja, &en)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct CaptionMatch<S> {
    pub en_doc_id: String,
    pub ja_doc_id: String,
    /// 1-based caption ordinals.
    pub ja_index: usize,
    pub en_index: usize,
    pub similarity: S,
    pub ja_text: String,
    pub en_text: String,
}

/// Window half-width in whole milliseconds. Start times are integral, so
/// `|Δ| ≤ window` and `|Δ| ≤ floor(window)` agree.
fn window_ms<S: Scalar>(window_s: S) -> i64 {
    let ms = (window_s * S::lit(1000.0)).floor();
    ms.to_i64().unwrap_or(i64::MAX).max(-1)
}

/// Japanese start time after the pair's best shift, in milliseconds.
pub fn shifted_start_ms(start_ms: u64, shift_s: i64) -> i64 {
    start_ms as i64 + shift_s * 1000
}

/// Better candidate under (higher similarity, smaller |Δ|, lower en_index).
fn better<S: Scalar>(a: (S, i64, usize), b: (S, i64, usize)) -> bool {
    if a.0 != b.0 {
        return a.0 > b.0;
    }
    (a.1, a.2) < (b.1, b.2)
}

/// For every Japanese caption, the best-scoring English caption that
/// starts within `window_s` of the shifted Japanese start.
pub fn align_captions<S: Scalar>(
    pair: &DocumentPair,
    en_doc: &SubtitleDocument,
    ja_doc: &SubtitleDocument,
    window_s: S,
    resources: &AlignmentResources<S>,
) -> Vec<CaptionMatch<S>> {
    let w = window_ms(window_s);
    if w < 0 {
        return Vec::new();
    }
    let en_starts: Vec<i64> = en_doc.captions.iter().map(|c| c.start_ms as i64).collect();
    let mut en_emb: Vec<Option<Option<Vec<S>>>> = vec![None; en_doc.captions.len()];
    let mut out = Vec::new();
    for ja in &ja_doc.captions {
        let t = shifted_start_ms(ja.start_ms, pair.best_shift_s);
        let lo = en_starts.partition_point(|&s| s < t - w);
        let hi = en_starts.partition_point(|&s| s <= t + w);
        if lo >= hi {
            continue;
        }
        let Some(ja_vec) = resources.japanese_embedding(&ja.text) else { continue };
        let mut best: Option<(S, i64, usize, usize)> = None;
        for k in lo..hi {
            let en = &en_doc.captions[k];
            let emb = en_emb[k].get_or_insert_with(|| resources.english_embedding(&en.text));
            let Some(sim) = emb.as_deref().and_then(|v| cosine(&ja_vec, v)) else { continue };
            let cand = (sim, (en_starts[k] - t).abs(), en.index);
            if best.is_none_or(|b| better(cand, (b.0, b.1, b.2))) {
                best = Some((cand.0, cand.1, cand.2, k));
            }
        }
        if let Some((similarity, _, _, k)) = best {
            let en = &en_doc.captions[k];
            out.push(CaptionMatch {
                en_doc_id: pair.en_doc_id.clone(),
                ja_doc_id: pair.ja_doc_id.clone(),
                ja_index: ja.index,
                en_index: en.index,
                similarity,
                ja_text: ja.text.clone(),
                en_text: en.text.clone(),
            });
        }
    }
    out
}
