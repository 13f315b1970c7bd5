//! From raw caption matches to the final corpus: similarity cutoff,
//! duplicate removal, language filter, and train/val/test splits.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::capalign::CaptionMatch;
use crate::text::is_latin_letter;
use crate::Scalar;

/// Standard-normal quantile at 0.84.
pub const PERCENTILE_Z: f64 = 0.9945;
/// Upper-tail probability matching [`PERCENTILE_Z`]'s quantile.
pub const PERCENTILE_Q: f64 = 0.84;

#[derive(Debug, Error, PartialEq)]
pub enum FilterError {
    #[error("similarity scores have zero variance")]
    Degenerate,
    #[error("need at least 2 similarity scores, got {0}")]
    TooFewScores(usize),
    #[error("{available} pairs survive filtering but val+test need {needed}")]
    InsufficientData { available: usize, needed: usize },
}

fn mean_and_sd<S: Scalar>(scores: &[S]) -> (S, S) {
    let n = S::from_count(scores.len());
    let mean = scores.iter().copied().sum::<S>() / n;
    let var = scores.iter().map(|&x| (x - mean) * (x - mean)).sum::<S>() / n;
    (mean, var.sqrt())
}

/// `μ + z·σ` of `scores`, with the population standard deviation.
pub fn similarity_threshold<S: Scalar>(scores: &[S], z: S) -> Result<S, FilterError> {
    if scores.len() < 2 {
        return Err(FilterError::TooFewScores(scores.len()));
    }
    let (mean, sd) = mean_and_sd(scores);
    if sd == S::zero() || !sd.is_finite() {
        return Err(FilterError::Degenerate);
    }
    Ok(mean + z * sd)
}

/// Nearest-rank empirical quantile of `scores` at `q`.
pub fn empirical_threshold<S: Scalar>(scores: &[S], q: f64) -> Result<S, FilterError> {
    if scores.len() < 2 {
        return Err(FilterError::TooFewScores(scores.len()));
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite scores"));
    if sorted[0] == sorted[sorted.len() - 1] {
        return Err(FilterError::Degenerate);
    }
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Ok(sorted[rank - 1])
}

/// Keeps an English/Japanese pair when at least 90% of the English
/// non-whitespace characters are roman (Latin letters, digits, ASCII
/// punctuation) and at most 10% of the Japanese letters are Latin.
pub fn language_filter(en_text: &str, ja_text: &str) -> bool {
    let (mut roman, mut total) = (0usize, 0usize);
    for c in en_text.chars().filter(|c| !c.is_whitespace()) {
        total += 1;
        if is_latin_letter(c) || c.is_ascii_digit() || c.is_ascii_punctuation() {
            roman += 1;
        }
    }
    if total == 0 || roman * 10 < total * 9 {
        return false;
    }
    let (mut latin, mut letters) = (0usize, 0usize);
    for c in ja_text.chars().filter(|c| c.is_alphabetic()) {
        letters += 1;
        if is_latin_letter(c) {
            latin += 1;
        }
    }
    latin * 10 <= letters
}

/// First occurrence of each exact `(en_text, ja_text)` pair, order kept.
pub fn dedup<S: Clone>(matches: &[CaptionMatch<S>]) -> Vec<CaptionMatch<S>> {
    let mut seen: HashSet<(&str, &str)> = HashSet::new();
    matches.iter().filter(|m| seen.insert((&m.en_text, &m.ja_text))).cloned().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    pub percentile_z: f64,
    pub val_size: usize,
    pub test_size: usize,
    pub seed: u64,
    /// Cut at the sorted empirical quantile instead of the normal one.
    pub empirical: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig { percentile_z: PERCENTILE_Z, val_size: 2000, test_size: 2001, seed: 0, empirical: false }
    }
}

impl FilterConfig {
    /// Quantile used by the empirical mode, from the configured z.
    fn empirical_q(&self) -> f64 {
        if self.percentile_z == PERCENTILE_Z {
            PERCENTILE_Q
        } else {
            standard_normal_cdf(self.percentile_z)
        }
    }

    pub fn threshold<S: Scalar>(&self, scores: &[S]) -> Result<S, FilterError> {
        if self.empirical {
            empirical_threshold(scores, self.empirical_q())
        } else {
            similarity_threshold(scores, S::lit(self.percentile_z))
        }
    }
}

/// Φ(x) via the Abramowitz–Stegun 7.1.26 erf approximation (|error| < 1.5e-7).
fn standard_normal_cdf(x: f64) -> f64 {
    let t = x.abs() / std::f64::consts::SQRT_2;
    let k = 1.0 / (1.0 + 0.3275911 * t);
    let poly = k * (0.254829592 + k * (-0.284496736 + k * (1.421413741 + k * (-1.453152027 + k * 1.061405429))));
    let erf = 1.0 - poly * (-t * t).exp();
    if x >= 0.0 { 0.5 * (1.0 + erf) } else { 0.5 * (1.0 - erf) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusPair<S> {
    pub en_text: String,
    pub ja_text: String,
    pub similarity: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParallelCorpus<S> {
    pub pairs: Vec<CorpusPair<S>>,
    /// Split of `pairs[i]`.
    pub splits: Vec<Split>,
    /// Similarity cutoff the pairs were filtered with.
    pub threshold: S,
}

/// Counts after each filtering stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterCounts {
    pub input: usize,
    pub after_threshold: usize,
    pub after_dedup: usize,
    pub after_language: usize,
}

/// Matches whose similarity is not below `threshold`.
pub fn threshold_cut<S: Scalar>(matches: &[CaptionMatch<S>], threshold: S) -> Vec<CaptionMatch<S>> {
    matches.iter().filter(|m| !(m.similarity < threshold)).cloned().collect()
}

/// Uniform val/test sample of `n` items under `seed`; the rest is train.
pub fn assign_splits(n: usize, val_size: usize, test_size: usize, seed: u64) -> Result<Vec<Split>, FilterError> {
    let needed = val_size + test_size;
    if n < needed {
        return Err(FilterError::InsufficientData { available: n, needed });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut splits = vec![Split::Train; n];
    for (rank, &i) in order.iter().enumerate().take(needed) {
        splits[i] = if rank < val_size { Split::Val } else { Split::Test };
    }
    Ok(splits)
}

/// Threshold, then dedup, then language filter, then splits.
pub fn build_corpus<S: Scalar>(
    matches: &[CaptionMatch<S>],
    config: &FilterConfig,
) -> Result<(ParallelCorpus<S>, FilterCounts), crate::Error> {
    let needed = config.val_size + config.test_size;
    let scores: Vec<S> = matches.iter().map(|m| m.similarity).collect();
    let threshold = match config.threshold(&scores) {
        Err(FilterError::TooFewScores(n)) => {
            return Err(FilterError::InsufficientData { available: n, needed: needed.max(2) }.into())
        }
        r => r?,
    };
    let cut = threshold_cut(matches, threshold);
    let unique = dedup(&cut);
    let after_dedup = unique.len();
    let kept: Vec<CaptionMatch<S>> = unique.into_iter().filter(|m| language_filter(&m.en_text, &m.ja_text)).collect();
    let counts = FilterCounts {
        input: matches.len(),
        after_threshold: cut.len(),
        after_dedup,
        after_language: kept.len(),
    };
    let splits = assign_splits(kept.len(), config.val_size, config.test_size, config.seed)?;
    let pairs = kept
        .into_iter()
        .map(|m| CorpusPair { en_text: m.en_text, ja_text: m.ja_text, similarity: m.similarity })
        .collect();
    Ok((ParallelCorpus { pairs, splits, threshold }, counts))
}

impl<S: Scalar> ParallelCorpus<S> {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in `split`, in corpus order.
    pub fn split(&self, split: Split) -> impl Iterator<Item = &CorpusPair<S>> {
        self.pairs.iter().zip(&self.splits).filter(move |(_, s)| **s == split).map(|(p, _)| p)
    }

    /// Writes `<split>.tsv` (`en<TAB>ja` per line) and `<split>.scores`
    /// (one similarity per line) for each split into `dir`.
    pub fn write(&self, dir: &Path) -> crate::Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| crate::Error::io(dir, e))?;
        for split in Split::ALL {
            let mut tsv = String::new();
            let mut scores = String::new();
            for p in self.split(split) {
                let _ = writeln!(tsv, "{}\t{}", field(&p.en_text), field(&p.ja_text));
                let _ = writeln!(scores, "{}", p.similarity);
            }
            for (ext, body) in [("tsv", tsv), ("scores", scores)] {
                let path = dir.join(format!("{}.{ext}", split.name()));
                std::fs::write(&path, body).map_err(|e| crate::Error::io(&path, e))?;
            }
        }
        Ok(())
    }
}

fn field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

/// Reads back one split written by [`ParallelCorpus::write`].
pub fn read_split<S: Scalar>(dir: &Path, split: Split) -> crate::Result<Vec<CorpusPair<S>>> {
    let tsv_path = dir.join(format!("{}.tsv", split.name()));
    let scores_path = dir.join(format!("{}.scores", split.name()));
    let tsv = std::fs::read_to_string(&tsv_path).map_err(|e| crate::Error::io(&tsv_path, e))?;
    let scores = std::fs::read_to_string(&scores_path).map_err(|e| crate::Error::io(&scores_path, e))?;
    let bad = |msg: String| crate::Error::Checkpoint { path: tsv_path.clone(), msg };
    let mut out = Vec::new();
    let mut score_lines = scores.lines();
    for (n, line) in tsv.lines().enumerate() {
        let (en, ja) = line.split_once('\t').ok_or_else(|| bad(format!("line {}: missing tab", n + 1)))?;
        let similarity = score_lines
            .next()
            .and_then(|s| s.trim().parse::<S>().ok())
            .ok_or_else(|| bad(format!("line {}: missing or bad score", n + 1)))?;
        out.push(CorpusPair { en_text: en.to_string(), ja_text: ja.to_string(), similarity });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(en: &str, ja: &str, s: f64) -> CaptionMatch<f64> {
        CaptionMatch {
            en_doc_id: "e".into(),
            ja_doc_id: "j".into(),
            ja_index: 1,
            en_index: 1,
            similarity: s,
            ja_text: ja.into(),
            en_text: en.into(),
        }
    }

    #[test]
    fn threshold_formula() {
        // mean 0.5, population sd 0.1
        let t = similarity_threshold(&[0.4, 0.6], PERCENTILE_Z).unwrap();
        assert!((t - 0.59945).abs() < 1e-12);
        assert_eq!(similarity_threshold(&[0.3, 0.3, 0.3], PERCENTILE_Z), Err(FilterError::Degenerate));
        assert_eq!(similarity_threshold(&[0.3], PERCENTILE_Z), Err(FilterError::TooFewScores(1)));
        let t32 = similarity_threshold(&[0.4f32, 0.6], 0.9945).unwrap();
        assert!((t32 - 0.59945).abs() < 1e-6);
    }

    #[test]
    fn empirical() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(empirical_threshold(&v, 0.84).unwrap(), 84.0);
        assert!((standard_normal_cdf(PERCENTILE_Z) - PERCENTILE_Q).abs() < 1e-4);
        assert!((standard_normal_cdf(0.0) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn language() {
        assert!(language_filter("hello there", "こんにちは"));
        assert!(!language_filter("こんにちは", "こんにちは"));
        assert!(!language_filter("ok", "abc def ghi"));
        assert!(language_filter("ok", "123!"));
        assert!(!language_filter("", "猫"));
        assert!(language_filter("it's 5 o'clock.", "五時だ"));
    }

    #[test]
    fn dedup_keeps_multi_reference() {
        let v = vec![m("a", "x", 0.1), m("a", "x", 0.2), m("a", "y", 0.3)];
        let d = dedup(&v);
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].similarity, 0.1);
        assert!(dedup::<f64>(&[]).is_empty());
    }

    #[test]
    fn splits_are_deterministic() {
        let a = assign_splits(100, 10, 11, 7).unwrap();
        assert_eq!(a, assign_splits(100, 10, 11, 7).unwrap());
        assert_eq!(a.iter().filter(|&&s| s == Split::Val).count(), 10);
        assert_eq!(a.iter().filter(|&&s| s == Split::Test).count(), 11);
        assert_ne!(a, assign_splits(100, 10, 11, 8).unwrap());
        assert_eq!(assign_splits(5, 3, 3, 0), Err(FilterError::InsufficientData { available: 5, needed: 6 }));
    }

    #[test]
    fn all_fail_language_filter() {
        let v: Vec<_> = (0..100).map(|i| m("猫猫", &format!("abc{i}"), i as f64)).collect();
        let cfg = FilterConfig { val_size: 1, test_size: 1, ..Default::default() };
        assert!(matches!(
            build_corpus(&v, &cfg),
            Err(crate::Error::Filter(FilterError::InsufficientData { available: 0, .. }))
        ));
    }

    #[test]
    fn corpus_roundtrip() {
        let v: Vec<_> = (0..50).map(|i| m(&format!("line {i}"), &format!("行{i}"), i as f64 / 50.0)).collect();
        let cfg = FilterConfig { val_size: 2, test_size: 2, ..Default::default() };
        let (corpus, counts) = build_corpus(&v, &cfg).unwrap();
        assert_eq!(counts.input, 50);
        assert!(corpus.pairs.iter().all(|p| p.similarity >= corpus.threshold));
        let dir = tempfile::tempdir().unwrap();
        corpus.write(dir.path()).unwrap();
        let back: Vec<CorpusPair<f64>> = read_split(dir.path(), Split::Val).unwrap();
        assert_eq!(back, corpus.split(Split::Val).cloned().collect::<Vec<_>>());
    }
}
