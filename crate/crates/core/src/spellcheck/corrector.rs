use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{generate_candidates, Candidate, Dictionary, ErrorModel, LanguageModel, DEFAULT_MAX_COST, SENTENCE_START};
use crate::ingest::SubtitleDocument;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionStats {
    /// Alphabetic out-of-dictionary tokens looked at.
    pub checked: usize,
    /// Tokens actually replaced.
    pub corrected: usize,
}

impl CorrectionStats {
    pub fn merge(&mut self, o: CorrectionStats) {
        self.checked += o.checked;
        self.corrected += o.corrected;
    }
}

/// Trained models plus dictionary. Immutable; share freely across threads.
#[derive(Debug, Clone)]
pub struct SpellChecker {
    pub error_model: ErrorModel,
    pub language_model: LanguageModel,
    pub dictionary: Dictionary,
    pub max_cost: u32,
}

fn is_word(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| c.is_alphabetic() && !c.is_uppercase())
}

impl SpellChecker {
    pub fn new(error_model: ErrorModel, language_model: LanguageModel, dictionary: Dictionary) -> Self {
        SpellChecker { error_model, language_model, dictionary, max_cost: DEFAULT_MAX_COST }
    }

    /// `ln P(token | candidate) + ln P(candidate) + ln P(candidate | prev)`.
    pub fn score(&self, token: &str, candidate: &str, prev: &str) -> f64 {
        self.error_model.log_probability(token, candidate)
            + self.language_model.unigram_probability(candidate).ln()
            + self.language_model.bigram_probability(prev, candidate).ln()
    }

    /// Scored candidates, best first: score descending, then edit cost, then word.
    pub fn rank(&self, token: &str, prev: &str) -> Vec<Candidate> {
        let mut cands = generate_candidates(token, &self.dictionary, self.max_cost);
        for c in &mut cands {
            c.score = self.score(token, &c.word, prev);
        }
        cands.sort_by(|a, b| {
            b.score.total_cmp(&a.score).then(a.edit_cost.cmp(&b.edit_cost)).then_with(|| a.word.cmp(&b.word))
        });
        cands
    }

    /// Returns the token unchanged when it is in the dictionary, is not a
    /// lowercase alphabetic word, or has no candidate.
    pub fn correct_token(&self, token: &str, prev: &str) -> String {
        if !is_word(token) || self.dictionary.contains(token) {
            return token.to_string();
        }
        self.rank(token, prev).into_iter().next().map_or_else(|| token.to_string(), |c| c.word)
    }

    /// Corrects whitespace-separated tokens left to right. Surrounding ASCII
    /// punctuation is peeled off and put back; each corrected word is the
    /// context of the next, and sentence-final punctuation resets the
    /// context to the start marker.
    pub fn correct_caption(&self, text: &str, cache: &mut HashMap<(String, String), String>) -> (String, CorrectionStats) {
        let mut stats = CorrectionStats::default();
        let mut prev = SENTENCE_START.to_string();
        let mut out: Vec<String> = Vec::new();
        for tok in text.split_whitespace() {
            let core = tok.trim_matches(|c: char| c.is_ascii_punctuation());
            let lead = tok.find(core).unwrap_or(0);
            let (head, tail) = (&tok[..lead], &tok[lead + core.len()..]);
            let fixed = if is_word(core) && !self.dictionary.contains(core) {
                stats.checked += 1;
                let key = (prev.clone(), core.to_string());
                let fixed = cache.entry(key).or_insert_with(|| self.correct_token(core, &prev)).clone();
                if fixed != core {
                    stats.corrected += 1;
                }
                fixed
            } else {
                core.to_string()
            };
            out.push(format!("{head}{fixed}{tail}"));
            prev = if tail.contains(['.', '?', '!']) || fixed.is_empty() {
                SENTENCE_START.to_string()
            } else {
                fixed
            };
        }
        (out.join(" "), stats)
    }

    pub fn correct_document(&self, doc: &SubtitleDocument) -> (SubtitleDocument, CorrectionStats) {
        let mut cache = HashMap::new();
        let mut stats = CorrectionStats::default();
        let mut out = doc.clone();
        for c in &mut out.captions {
            let (t, s) = self.correct_caption(&c.text, &mut cache);
            stats.merge(s);
            c.text = t;
        }
        (out, stats)
    }
}

/// Free-standing form of [`SpellChecker::correct_token`].
pub fn correct_token(
    token: &str,
    prev_token: &str,
    error_model: &ErrorModel,
    language_model: &LanguageModel,
    dictionary: &Dictionary,
) -> String {
    if !is_word(token) || dictionary.contains(token) {
        return token.to_string();
    }
    let mut best: Option<(f64, u32, String)> = None;
    for c in generate_candidates(token, dictionary, DEFAULT_MAX_COST) {
        let s = error_model.log_probability(token, &c.word)
            + language_model.unigram_probability(&c.word).ln()
            + language_model.bigram_probability(prev_token, &c.word).ln();
        let better = match &best {
            None => true,
            Some((bs, bc, bw)) => s > *bs || (s == *bs && (c.edit_cost, &c.word) < (*bc, bw)),
        };
        if better {
            best = Some((s, c.edit_cost, c.word));
        }
    }
    best.map_or_else(|| token.to_string(), |(_, _, w)| w)
}
