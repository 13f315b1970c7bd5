use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use super::{open, ModelError, ALPHA};

/// Context token for caption-initial words. It never appears in count
/// files, so its bigrams all fall through to the Laplace floor.
pub const SENTENCE_START: &str = "<s>";

/// Laplace-smoothed unigram and bigram model.
///
/// `P(w) = (c(w) + α) / (N + α·V)` and
/// `P(w | p) = (c(p, w) + α) / (c(p) + α·V)`, with `V` the number of
/// unigram types and `N` the total unigram count.
#[derive(Debug, Clone)]
pub struct LanguageModel {
    unigrams: HashMap<String, u64>,
    bigrams: HashMap<String, HashMap<String, u64>>,
    total_tokens: u64,
    alpha: f64,
    vocab_size: usize,
}

fn parse_count(raw: &str, line: usize) -> Result<u64, ModelError> {
    let raw = raw.trim();
    if raw.starts_with('-') {
        return Err(ModelError::format(line, "negative count"));
    }
    if raw.is_empty() || !raw.chars().all(|c| c.is_ascii_digit()) {
        return Err(ModelError::format(line, format!("count {raw:?} is not a non-negative integer")));
    }
    raw.parse().map_err(|_| ModelError::Overflow { file: None, line })
}

fn parse_unigrams<R: BufRead>(r: R) -> Result<Vec<(String, u64)>, ModelError> {
    let mut out = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line.map_err(|e| ModelError::format(n + 1, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let (w, c) = line.rsplit_once('\t').ok_or_else(|| ModelError::format(n + 1, "expected word<TAB>count"))?;
        if w.is_empty() || w.contains(' ') {
            return Err(ModelError::format(n + 1, "unigram must be a single word"));
        }
        out.push((w.to_string(), parse_count(c, n + 1)?));
    }
    Ok(out)
}

fn parse_bigrams<R: BufRead>(r: R) -> Result<Vec<((String, String), u64)>, ModelError> {
    let mut out = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line.map_err(|e| ModelError::format(n + 1, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let (ws, c) =
            line.rsplit_once('\t').ok_or_else(|| ModelError::format(n + 1, "expected word1 word2<TAB>count"))?;
        let (p, w) = ws.split_once(' ').ok_or_else(|| ModelError::format(n + 1, "bigram needs two words"))?;
        if p.is_empty() || w.is_empty() || w.contains(' ') {
            return Err(ModelError::format(n + 1, "bigram needs exactly two words"));
        }
        out.push(((p.to_string(), w.to_string()), parse_count(c, n + 1)?));
    }
    Ok(out)
}

impl LanguageModel {
    pub fn from_counts(
        unigrams: impl IntoIterator<Item = (String, u64)>,
        bigrams: impl IntoIterator<Item = ((String, String), u64)>,
    ) -> Result<Self, ModelError> {
        let mut uni: HashMap<String, u64> = HashMap::new();
        let mut total: u64 = 0;
        for (w, c) in unigrams {
            if c == 0 {
                continue;
            }
            let slot = uni.entry(w).or_default();
            *slot = slot.checked_add(c).ok_or(ModelError::Overflow { file: None, line: 0 })?;
            total = total.checked_add(c).ok_or(ModelError::Overflow { file: None, line: 0 })?;
        }
        if uni.is_empty() {
            return Err(ModelError::format(0, "no unigram counts"));
        }
        let mut bi: HashMap<String, HashMap<String, u64>> = HashMap::new();
        for ((p, w), c) in bigrams {
            if c == 0 {
                continue;
            }
            let slot = bi.entry(p).or_default().entry(w).or_default();
            *slot = slot.checked_add(c).ok_or(ModelError::Overflow { file: None, line: 0 })?;
        }
        let vocab_size = uni.len();
        Ok(LanguageModel { unigrams: uni, bigrams: bi, total_tokens: total, alpha: ALPHA, vocab_size })
    }

    /// Counts unigrams and within-sentence bigrams from tokenized sentences.
    pub fn from_sentences<S: AsRef<str>>(sentences: &[Vec<S>]) -> Result<Self, ModelError> {
        let mut uni: HashMap<String, u64> = HashMap::new();
        let mut bi: HashMap<(String, String), u64> = HashMap::new();
        for s in sentences {
            for (i, w) in s.iter().enumerate() {
                *uni.entry(w.as_ref().to_string()).or_default() += 1;
                if i > 0 {
                    *bi.entry((s[i - 1].as_ref().to_string(), w.as_ref().to_string())).or_default() += 1;
                }
            }
        }
        Self::from_counts(uni, bi)
    }

    /// Reads `word<TAB>count` and `word1 word2<TAB>count` files.
    pub fn from_readers<U: BufRead, B: BufRead>(unigram: U, bigram: B) -> Result<Self, ModelError> {
        Self::from_counts(parse_unigrams(unigram)?, parse_bigrams(bigram)?)
    }

    pub fn load(unigram_path: &Path, bigram_path: &Path) -> Result<Self, ModelError> {
        let uni = parse_unigrams(open(unigram_path)?).map_err(|e| e.in_file(unigram_path))?;
        let bi = parse_bigrams(open(bigram_path)?).map_err(|e| e.in_file(bigram_path))?;
        Self::from_counts(uni, bi)
    }

    pub fn unigram_count(&self, w: &str) -> u64 {
        self.unigrams.get(w).copied().unwrap_or(0)
    }

    pub fn bigram_count(&self, prev: &str, w: &str) -> u64 {
        self.bigrams.get(prev).and_then(|r| r.get(w)).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.unigrams.keys().map(String::as_str)
    }

    pub fn unigram_probability(&self, w: &str) -> f64 {
        (self.unigram_count(w) as f64 + self.alpha)
            / (self.total_tokens as f64 + self.alpha * self.vocab_size as f64)
    }

    pub fn bigram_probability(&self, prev: &str, w: &str) -> f64 {
        (self.bigram_count(prev, w) as f64 + self.alpha)
            / (self.unigram_count(prev) as f64 + self.alpha * self.vocab_size as f64)
    }
}
