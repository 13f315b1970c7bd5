use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::filter::{CorpusPair, FilterCounts, ParallelCorpus, Split};
use crate::text::{is_hiragana, is_kanji, is_katakana};
use crate::Scalar;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestCounts {
    pub files_seen: usize,
    pub documents: usize,
    pub rejected: usize,
    pub captions: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizeCounts {
    pub documents_in: usize,
    pub documents_out: usize,
    pub captions_in: usize,
    pub captions_out: usize,
    pub chars_removed: usize,
    pub rules_fired: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpellcheckCounts {
    pub enabled: bool,
    pub tokens_checked: usize,
    pub corrections: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocAlignCounts {
    pub en_documents: usize,
    pub ja_documents: usize,
    pub title_candidates: usize,
    pub pairs: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapAlignCounts {
    pub pairs: usize,
    pub ja_captions: usize,
    pub matches: usize,
}

/// Per-language corpus statistics.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SideStats {
    pub unique_tokens: usize,
    pub mean_tokens: f64,
    /// Distinct phrases paired with at least two distinct translations.
    pub multi_reference: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub pairs: usize,
    pub train: usize,
    pub val: usize,
    pub test: usize,
    pub en: SideStats,
    pub ja: SideStats,
}

/// Every stage's counters for one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageStats {
    pub ingest_en: IngestCounts,
    pub ingest_ja: IngestCounts,
    pub normalize_en: NormalizeCounts,
    pub normalize_ja: NormalizeCounts,
    pub spellcheck: SpellcheckCounts,
    pub docalign: DocAlignCounts,
    pub capalign: CapAlignCounts,
    pub filter: FilterCounts,
    pub corpus: CorpusStats,
}

impl StageStats {
    /// `(stage, in, out)` for every stage that only removes items.
    pub fn counter_chain(&self) -> Vec<(&'static str, usize, usize)> {
        vec![
            ("ingest.en", self.ingest_en.files_seen, self.ingest_en.documents),
            ("ingest.ja", self.ingest_ja.files_seen, self.ingest_ja.documents),
            ("normalize.en.documents", self.normalize_en.documents_in, self.normalize_en.documents_out),
            ("normalize.ja.documents", self.normalize_ja.documents_in, self.normalize_ja.documents_out),
            ("normalize.en.captions", self.normalize_en.captions_in, self.normalize_en.captions_out),
            ("normalize.ja.captions", self.normalize_ja.captions_in, self.normalize_ja.captions_out),
            ("docalign.candidates", self.docalign.title_candidates, self.docalign.pairs),
            ("capalign", self.capalign.ja_captions, self.capalign.matches),
            ("filter.threshold", self.filter.input, self.filter.after_threshold),
            ("filter.dedup", self.filter.after_threshold, self.filter.after_dedup),
            ("filter.language", self.filter.after_dedup, self.filter.after_language),
        ]
    }

    /// Whether no filtering stage reports more output than input.
    pub fn is_monotone(&self) -> bool {
        self.counter_chain().iter().all(|(_, i, o)| o <= i)
    }
}

/// Script-run tokens of Japanese text: maximal runs of kanji, hiragana,
/// katakana or other word characters.
pub fn japanese_tokens(text: &str) -> Vec<&str> {
    fn class(c: char) -> u8 {
        if is_kanji(c) {
            1
        } else if is_hiragana(c) {
            2
        } else if is_katakana(c) || c == 'ー' {
            3
        } else if c.is_alphanumeric() {
            4
        } else {
            0
        }
    }
    let mut out = Vec::new();
    let mut run: Option<(usize, u8)> = None;
    for (i, c) in text.char_indices() {
        let k = class(c);
        if let Some((s, rk)) = run {
            if rk == k {
                continue;
            }
            out.push(&text[s..i]);
        }
        run = (k != 0).then_some((i, k));
    }
    if let Some((s, _)) = run {
        out.push(&text[s..]);
    }
    out
}

fn side_stats<'a>(
    phrases: impl Iterator<Item = (&'a str, &'a str)>,
    tokenize: impl Fn(&'a str) -> Vec<&'a str>,
) -> SideStats {
    let mut vocab: HashSet<&str> = HashSet::new();
    let mut total_tokens = 0usize;
    let mut n = 0usize;
    let mut refs: HashMap<&str, HashSet<&str>> = HashMap::new();
    for (phrase, other) in phrases {
        let toks = tokenize(phrase);
        total_tokens += toks.len();
        vocab.extend(toks);
        n += 1;
        refs.entry(phrase).or_default().insert(other);
    }
    SideStats {
        unique_tokens: vocab.len(),
        mean_tokens: if n == 0 { 0.0 } else { total_tokens as f64 / n as f64 },
        multi_reference: refs.values().filter(|r| r.len() >= 2).count(),
    }
}

impl CorpusStats {
    pub fn from_pairs<S>(pairs: &[CorpusPair<S>], splits: &[Split]) -> Self {
        let count = |s: Split| splits.iter().filter(|&&x| x == s).count();
        CorpusStats {
            pairs: pairs.len(),
            train: count(Split::Train),
            val: count(Split::Val),
            test: count(Split::Test),
            en: side_stats(pairs.iter().map(|p| (p.en_text.as_str(), p.ja_text.as_str())), |t| {
                t.split_whitespace().collect()
            }),
            ja: side_stats(pairs.iter().map(|p| (p.ja_text.as_str(), p.en_text.as_str())), japanese_tokens),
        }
    }

    pub fn from_corpus<S: Scalar>(corpus: &ParallelCorpus<S>) -> Self {
        Self::from_pairs(&corpus.pairs, &corpus.splits)
    }
}

/// Human-readable report of every counter and the corpus statistics.
pub fn stats_report(stats: &StageStats) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "stage\tin\tout");
    for (name, i, o) in stats.counter_chain() {
        let _ = writeln!(out, "{name}\t{i}\t{o}");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "spellcheck.tokens_checked\t{}", stats.spellcheck.tokens_checked);
    let _ = writeln!(out, "spellcheck.corrections\t{}", stats.spellcheck.corrections);
    for (lang, n) in [("en", &stats.normalize_en), ("ja", &stats.normalize_ja)] {
        for (rule, count) in &n.rules_fired {
            let _ = writeln!(out, "normalize.{lang}.rule.{rule}\t{count}");
        }
    }
    let c = &stats.corpus;
    let _ = writeln!(out);
    let _ = writeln!(out, "corpus.pairs\t{}", c.pairs);
    let _ = writeln!(out, "corpus.train\t{}", c.train);
    let _ = writeln!(out, "corpus.val\t{}", c.val);
    let _ = writeln!(out, "corpus.test\t{}", c.test);
    for (lang, s) in [("en", &c.en), ("ja", &c.ja)] {
        let _ = writeln!(out, "corpus.{lang}.unique_tokens\t{}", s.unique_tokens);
        let _ = writeln!(out, "corpus.{lang}.mean_tokens\t{:.4}", s.mean_tokens);
        let _ = writeln!(out, "corpus.{lang}.multi_reference\t{}", s.multi_reference);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(en: &str, ja: &str) -> CorpusPair<f64> {
        CorpusPair { en_text: en.into(), ja_text: ja.into(), similarity: 1.0 }
    }

    #[test]
    fn multi_reference() {
        let pairs = vec![pair("hello there", "こんにちは"), pair("hello there", "やあ")];
        let s = CorpusStats::from_pairs(&pairs, &[Split::Train, Split::Test]);
        assert_eq!(s.en.multi_reference, 1);
        assert_eq!(s.ja.multi_reference, 0);
        assert_eq!(s.en.unique_tokens, 2);
        assert_eq!(s.en.mean_tokens, 2.0);
        assert_eq!((s.train, s.val, s.test), (1, 0, 1));
    }

    #[test]
    fn empty_corpus() {
        let s = CorpusStats::from_pairs::<f64>(&[], &[]);
        assert_eq!(s, CorpusStats::default());
        let report = stats_report(&StageStats::default());
        assert!(report.contains("corpus.pairs\t0"));
        assert!(report.contains("corpus.en.mean_tokens\t0.0000"));
    }

    #[test]
    fn japanese_runs() {
        assert_eq!(japanese_tokens("猫が魚を食べる。"), ["猫", "が", "魚", "を", "食", "べる"]);
        assert_eq!(japanese_tokens("テレビ OK"), ["テレビ", "OK"]);
        assert!(japanese_tokens("。 、").is_empty());
    }
}
