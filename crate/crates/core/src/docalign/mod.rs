//! Document alignment: pair English and Japanese files that subtitle the
//! same video, first by title metadata and then by caption timing.

mod similarity;
mod temporal;
mod title;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use similarity::{longest_common_substring_len, title_similarity};
pub use temporal::{rounded_second, temporal_distance, temporal_vector, TemporalVector, VECTOR_BITS};
pub use title::{extract_title_meta, TitleMeta};

use crate::ingest::SubtitleDocument;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DocAlignConfig {
    /// Pairs need title similarity strictly above this.
    pub title_threshold: f64,
    /// Pairs need normalized Hamming distance at or below this.
    pub hamming_threshold: f64,
    pub shift_range_s: u32,
}

impl Default for DocAlignConfig {
    fn default() -> Self {
        DocAlignConfig { title_threshold: 0.90, hamming_threshold: 0.04, shift_range_s: 120 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentPair {
    pub en_doc_id: String,
    pub ja_doc_id: String,
    pub title_similarity: f64,
    pub temporal_distance: f64,
    pub best_shift_s: i64,
}

fn compatible(a: Option<u32>, b: Option<u32>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    }
}

/// Whether two titles pass the metadata test: similarity above `threshold`
/// and no disagreement on season or episode. Returns the similarity.
pub fn metadata_match(en: &TitleMeta, ja: &TitleMeta, threshold: f64) -> Option<f64> {
    if !compatible(en.episode, ja.episode) || !compatible(en.season, ja.season) {
        return None;
    }
    let sim = title_similarity(&en.normalized_title, &ja.normalized_title);
    (sim > threshold).then_some(sim)
}

/// All-pairs metadata matching. Output is `(en index, ja index, similarity)`
/// in row-major order.
pub fn match_candidates(en: &[TitleMeta], ja: &[TitleMeta], threshold: f64) -> Vec<(usize, usize, f64)> {
    en.par_iter()
        .enumerate()
        .flat_map_iter(|(i, e)| {
            ja.iter().enumerate().filter_map(move |(j, t)| metadata_match(e, t, threshold).map(|s| (i, j, s)))
        })
        .collect()
}

/// Metadata matching followed by the temporal filter. Many-to-many pairings
/// are kept.
pub fn align_documents(
    en_docs: &[SubtitleDocument],
    ja_docs: &[SubtitleDocument],
    config: &DocAlignConfig,
) -> Vec<DocumentPair> {
    align_documents_counted(en_docs, ja_docs, config).0
}

/// [`align_documents`] plus the number of pairs that passed the title test.
pub fn align_documents_counted(
    en_docs: &[SubtitleDocument],
    ja_docs: &[SubtitleDocument],
    config: &DocAlignConfig,
) -> (Vec<DocumentPair>, usize) {
    let en_meta: Vec<TitleMeta> = en_docs.iter().map(|d| extract_title_meta(&d.title_raw)).collect();
    let ja_meta: Vec<TitleMeta> = ja_docs.iter().map(|d| extract_title_meta(&d.title_raw)).collect();
    let candidates = match_candidates(&en_meta, &ja_meta, config.title_threshold);
    let n_candidates = candidates.len();
    log::debug!("{n_candidates} title candidates");
    let pairs = candidates
        .into_par_iter()
        .filter_map(|(i, j, sim)| {
            let (en, ja) = (&en_docs[i], &ja_docs[j]);
            if en.captions.is_empty() || ja.captions.is_empty() {
                return None;
            }
            let (distance, shift) = temporal_distance(en, ja, config.shift_range_s);
            (distance <= config.hamming_threshold).then(|| DocumentPair {
                en_doc_id: en.doc_id.clone(),
                ja_doc_id: ja.doc_id.clone(),
                title_similarity: sim,
                temporal_distance: distance,
                best_shift_s: shift,
            })
        })
        .collect();
    (pairs, n_candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{Caption, Language};

    fn doc(id: &str, title: &str, lang: Language, starts: &[u64]) -> SubtitleDocument {
        let captions = starts
            .iter()
            .map(|&s| Caption { index: 0, start_ms: s, end_ms: s + 1000, text: "x".into() })
            .collect();
        SubtitleDocument::new(id, title, lang, captions)
    }

    fn meta(t: &str, e: Option<u32>) -> TitleMeta {
        TitleMeta { normalized_title: t.into(), season: None, episode: e }
    }

    #[test]
    fn candidates_respect_episodes() {
        assert_eq!(match_candidates(&[meta("show", Some(3))], &[meta("show", Some(3))], 0.9).len(), 1);
        assert!(match_candidates(&[meta("show", Some(3))], &[meta("show", Some(4))], 0.9).is_empty());
        assert_eq!(match_candidates(&[meta("show", None)], &[meta("show", Some(4))], 0.9).len(), 1);
    }

    #[test]
    fn threshold_is_strict() {
        // "abcdefghij" vs "abcdefghik": 18/20 = 0.90 exactly
        let sim = title_similarity("abcdefghij", "abcdefghik");
        assert_eq!(sim, 0.9);
        assert!(match_candidates(&[meta("abcdefghij", None)], &[meta("abcdefghik", None)], 0.9).is_empty());
        // 0.85 is dropped
        assert!(metadata_match(&meta("abcdefghijklmnopqrst", None), &meta("abcdefghijklmnopqxyz", None), 0.9).is_none());
    }

    #[test]
    fn alignment() {
        let starts: Vec<u64> = (0..40).map(|i| 5_000 + i * 3_000).collect();
        let en = doc("en1", "Show.S01E02.en", Language::En, &starts);
        let ja = doc("ja1", "show s01e02 ja", Language::Ja, &starts);
        let pairs = align_documents(std::slice::from_ref(&en), std::slice::from_ref(&ja), &DocAlignConfig::default());
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].best_shift_s, 0);

        let en2 = doc("en2", "Show S01E02", Language::En, &starts);
        let pairs = align_documents(&[en, en2], &[ja], &DocAlignConfig::default());
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn temporal_threshold_rejects() {
        let a: Vec<u64> = (0..1000).map(|i| i * 5_000).collect();
        let b: Vec<u64> = (0..1000).map(|i| i * 7_000 + 333).collect();
        let en = doc("en", "x", Language::En, &a);
        let ja = doc("ja", "x", Language::Ja, &b);
        assert!(align_documents(&[en], &[ja], &DocAlignConfig::default()).is_empty());
    }
}
