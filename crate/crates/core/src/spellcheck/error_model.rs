use std::collections::{HashMap, HashSet};
use std::io::BufRead;
use std::path::Path;

use super::{open, ModelError, ALPHA};

/// Word-level misspelling model `P(observed | intended)`.
///
/// `P(w | w*) = (count(w*, w) + α) / (total(w*) + α·V)` where `V` is the
/// number of distinct word forms seen in the misspelling corpus. Each
/// intended-word entry also counts one observation of the correct form, so
/// `P(w* | w*)` is learned from the corpus like any other pair.
#[derive(Debug, Clone)]
pub struct ErrorModel {
    confusion: HashMap<String, HashMap<String, u64>>,
    intended_totals: HashMap<String, u64>,
    alpha: f64,
    vocab_size: usize,
}

impl ErrorModel {
    /// Trains from `(intended, misspellings)` entries; an intended word may repeat.
    pub fn train<S: AsRef<str>>(corpus: &[(S, Vec<S>)]) -> Result<Self, ModelError> {
        if corpus.is_empty() {
            return Err(ModelError::format(0, "misspelling corpus is empty"));
        }
        let mut confusion: HashMap<String, HashMap<String, u64>> = HashMap::new();
        let mut intended_totals: HashMap<String, u64> = HashMap::new();
        let mut vocab: HashSet<String> = HashSet::new();
        for (intended, observed) in corpus {
            let intended = intended.as_ref().to_lowercase();
            if intended.is_empty() {
                return Err(ModelError::format(0, "empty intended word"));
            }
            let row = confusion.entry(intended.clone()).or_default();
            *row.entry(intended.clone()).or_default() += 1;
            for w in observed {
                let w = w.as_ref().to_lowercase();
                *row.entry(w.clone()).or_default() += 1;
                vocab.insert(w);
            }
            *intended_totals.entry(intended.clone()).or_default() += 1 + observed.len() as u64;
            vocab.insert(intended);
        }
        Ok(ErrorModel { confusion, intended_totals, alpha: ALPHA, vocab_size: vocab.len() })
    }

    /// Reads the `$intended` / one-misspelling-per-line format.
    pub fn from_reader<R: BufRead>(r: R) -> Result<Self, ModelError> {
        let mut corpus: Vec<(String, Vec<String>)> = Vec::new();
        for (n, line) in r.lines().enumerate() {
            let lineno = n + 1;
            let line = line.map_err(|e| ModelError::format(lineno, e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line.split_whitespace().count() != 1 {
                return Err(ModelError::format(lineno, "expected a single word"));
            }
            if let Some(word) = line.strip_prefix('$') {
                if word.is_empty() {
                    return Err(ModelError::format(lineno, "empty intended word"));
                }
                corpus.push((word.to_string(), Vec::new()));
            } else {
                let Some((_, obs)) = corpus.last_mut() else {
                    return Err(ModelError::format(lineno, "misspelling before any $word header"));
                };
                obs.push(line.to_string());
            }
        }
        Self::train(&corpus)
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        Self::from_reader(open(path)?).map_err(|e| e.in_file(path))
    }

    pub fn count(&self, intended: &str, observed: &str) -> u64 {
        self.confusion.get(intended).and_then(|r| r.get(observed)).copied().unwrap_or(0)
    }

    pub fn intended_total(&self, intended: &str) -> u64 {
        self.intended_totals.get(intended).copied().unwrap_or(0)
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Widens the closed vocabulary, e.g. to the spelling dictionary size.
    pub fn with_vocab_size(mut self, vocab_size: usize) -> Self {
        self.vocab_size = self.vocab_size.max(vocab_size);
        self
    }

    /// `P(observed | intended)`.
    pub fn probability(&self, observed: &str, intended: &str) -> f64 {
        let num = self.count(intended, observed) as f64 + self.alpha;
        let den = self.intended_total(intended) as f64 + self.alpha * self.vocab_size as f64;
        num / den
    }

    pub fn log_probability(&self, observed: &str, intended: &str) -> f64 {
        self.probability(observed, intended).ln()
    }

    /// All observed forms of `intended`, including the correct form.
    pub fn observed_forms(&self, intended: &str) -> impl Iterator<Item = (&str, u64)> {
        self.confusion.get(intended).into_iter().flat_map(|r| r.iter().map(|(k, &v)| (k.as_str(), v)))
    }

    pub fn intended_words(&self) -> impl Iterator<Item = &str> {
        self.intended_totals.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> ErrorModel {
        let corpus = vec![("the", vec!["teh", "hte"]), ("the", vec!["teh"])];
        ErrorModel::train(&corpus).unwrap()
    }

    #[test]
    fn repeated_entries_accumulate() {
        let m = toy();
        assert_eq!(m.count("the", "teh"), 2);
        assert_eq!(m.count("the", "hte"), 1);
        assert_eq!(m.count("the", "the"), 2);
        assert_eq!(m.intended_total("the"), 5);
        assert_eq!(m.vocab_size(), 3);
        assert!((m.probability("teh", "the") - 3.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn unseen_pair_gets_laplace_floor() {
        let m = toy();
        let p = m.probability("xqz", "the");
        assert!((p - 1.0 / (5.0 + 3.0)).abs() < 1e-12);
        assert!(p > 0.0);
    }

    #[test]
    fn sums_to_one_over_closed_vocabulary() {
        let m = toy();
        let total: f64 = ["the", "teh", "hte"].iter().map(|w| m.probability(w, "the")).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_corpus_is_format_error() {
        let empty: Vec<(&str, Vec<&str>)> = vec![];
        assert!(matches!(ErrorModel::train(&empty), Err(ModelError::Format { .. })));
        assert!(matches!(ErrorModel::from_reader(&b"\n\n"[..]), Err(ModelError::Format { .. })));
    }

    #[test]
    fn birkbeck_format() {
        let m = ErrorModel::from_reader(&b"$the\nteh\nhte\n$receive\nrecieve\n"[..]).unwrap();
        assert_eq!(m.count("receive", "recieve"), 1);
        assert!(matches!(ErrorModel::from_reader(&b"teh\n$the\n"[..]), Err(ModelError::Format { line: 1, .. })));
        assert!(matches!(ErrorModel::from_reader(&b"$the\ntwo words\n"[..]), Err(ModelError::Format { line: 2, .. })));
    }
}
