//! Caption text cleanup.
//!
//! Rules run in a fixed order and the sequence is repeated until the text
//! stops changing, so a deletion that exposes new junk (a dash left at the
//! front once a bracketed cue is gone) is handled and the result is
//! idempotent.

use std::collections::BTreeMap;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{reindex, Language, SubtitleDocument, MIN_CUES};
use crate::text::{self, collapse_whitespace};

#[derive(Debug, Error)]
pub enum NormalizeError {
    #[error("document {doc_id} rejected: only {survivors} caption(s) left after normalization")]
    Rejected { doc_id: String, survivors: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rule {
    Lowercase,
    Brackets,
    Tags,
    Punctuation,
    Signatures,
    OutOfLanguage,
    Whitespace,
}

impl Rule {
    pub const ORDER: [Rule; 7] = [
        Rule::Lowercase,
        Rule::Brackets,
        Rule::Tags,
        Rule::Punctuation,
        Rule::Signatures,
        Rule::OutOfLanguage,
        Rule::Whitespace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Lowercase => "lowercase",
            Rule::Brackets => "brackets",
            Rule::Tags => "tags",
            Rule::Punctuation => "punctuation",
            Rule::Signatures => "signatures",
            Rule::OutOfLanguage => "out_of_language",
            Rule::Whitespace => "whitespace",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleToggle {
    pub enabled: bool,
}

impl Default for RuleToggle {
    fn default() -> Self {
        RuleToggle { enabled: true }
    }
}

/// `normalize.rules.<name>.enabled` in the config file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RuleSet {
    pub lowercase: RuleToggle,
    pub brackets: RuleToggle,
    pub tags: RuleToggle,
    pub punctuation: RuleToggle,
    pub signatures: RuleToggle,
    pub out_of_language: RuleToggle,
    pub whitespace: RuleToggle,
}

impl RuleSet {
    pub fn enabled(&self, rule: Rule) -> bool {
        match rule {
            Rule::Lowercase => self.lowercase.enabled,
            Rule::Brackets => self.brackets.enabled,
            Rule::Tags => self.tags.enabled,
            Rule::Punctuation => self.punctuation.enabled,
            Rule::Signatures => self.signatures.enabled,
            Rule::OutOfLanguage => self.out_of_language.enabled,
            Rule::Whitespace => self.whitespace.enabled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormalizeConfig {
    pub rules: RuleSet,
    /// Documents with fewer surviving captions are rejected.
    pub min_captions: usize,
}

impl Default for NormalizeConfig {
    fn default() -> Self {
        NormalizeConfig { rules: RuleSet::default(), min_captions: MIN_CUES }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationReport {
    /// Rule name to number of captions the rule changed.
    pub rules_fired: BTreeMap<String, usize>,
    pub chars_removed: usize,
}

impl NormalizationReport {
    pub fn merge(&mut self, other: &NormalizationReport) {
        for (k, v) in &other.rules_fired {
            *self.rules_fired.entry(k.clone()).or_default() += v;
        }
        self.chars_removed += other.chars_removed;
    }
}

const BRACKETS: [(char, char); 5] = [('(', ')'), ('[', ']'), ('{', '}'), ('【', '】'), ('（', '）')];
const DASHES: [char; 6] = ['-', '‐', '‑', '–', '—', '―'];

static TAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"<[^>]*>").unwrap());
static EN_SIGNATURE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)\b(?:re-?)?(?:subbed|subs|subtitles|subtitled|sync|synced|synchronized|synchronised|corrected|ripped|encoded|captioned)(?:\s+(?:and|&)\s+[a-z]+)?\s+by\b.*$",
    )
    .unwrap()
});
static JA_SIGNATURE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"字幕(?:翻訳|制作|製作|作成|協力|提供|担当)?(?:\s*[:：]|\s+\S).*$").unwrap()
});

fn remove_brackets(s: &str) -> String {
    let mut out: Vec<char> = Vec::with_capacity(s.len());
    // (opener, position in `out`)
    let mut open: Vec<(char, usize)> = Vec::new();
    for c in s.chars() {
        if BRACKETS.iter().any(|&(o, _)| o == c) {
            open.push((c, out.len()));
            out.push(c);
        } else if let Some(&(o, _)) = BRACKETS.iter().find(|&&(_, cl)| cl == c) {
            if let Some(k) = open.iter().rposition(|&(oc, _)| oc == o) {
                out.truncate(open[k].1);
                open.truncate(k);
            }
            // an unmatched closer is simply dropped
        } else {
            out.push(c);
        }
    }
    for &(_, at) in open.iter().rev() {
        out.remove(at);
    }
    out.into_iter().collect()
}

fn clean_punctuation(s: &str) -> String {
    let no_music: String = s.chars().filter(|&c| !text::is_music_glyph(c)).collect();
    let body = no_music.trim_start_matches(|c: char| c.is_whitespace() || DASHES.contains(&c));

    let mut out = String::with_capacity(body.len());
    let chars: Vec<char> = body.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let mut j = i + 1;
        while j < chars.len() && chars[j] == c {
            j += 1;
        }
        let run = j - i;
        if run >= 2 && text::is_punct(c) {
            if c == '.' && run >= 3 {
                out.push_str("...");
            } else {
                out.push(c);
            }
        } else {
            out.extend(&chars[i..j]);
        }
        i = j;
    }
    out.trim_end_matches(|c: char| c.is_whitespace() || matches!(c, ',' | '、' | '，')).to_string()
}

fn remove_signatures(s: &str, language: Language) -> String {
    let re = match language {
        Language::En => &*EN_SIGNATURE,
        Language::Ja => &*JA_SIGNATURE,
    };
    re.replace(s, "").into_owned()
}

fn out_of_language_char(c: char, language: Language) -> bool {
    match language {
        Language::En => {
            !(c.is_whitespace() || c.is_numeric() || text::is_latin_letter(c) || text::is_punct(c))
        }
        Language::Ja => text::is_latin_letter(c),
    }
}

fn remove_foreign_runs(s: &str, language: Language) -> String {
    let min_run = match language {
        Language::En => 3,
        Language::Ja => 8,
    };
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::with_capacity(s.len());
    let mut i = 0;
    while i < chars.len() {
        if out_of_language_char(chars[i], language) {
            let mut j = i;
            while j < chars.len() && out_of_language_char(chars[j], language) {
                j += 1;
            }
            if j - i < min_run {
                out.extend(&chars[i..j]);
            }
            i = j;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}

fn apply(rule: Rule, s: &str, language: Language) -> String {
    match rule {
        Rule::Lowercase => match language {
            Language::En => s.to_lowercase(),
            Language::Ja => s.to_string(),
        },
        Rule::Brackets => remove_brackets(s),
        Rule::Tags => TAG.replace_all(s, "").into_owned(),
        Rule::Punctuation => clean_punctuation(s),
        Rule::Signatures => remove_signatures(s, language),
        Rule::OutOfLanguage => remove_foreign_runs(s, language),
        Rule::Whitespace => collapse_whitespace(s),
    }
}

/// Cleans one caption. An empty result means the caption should be dropped.
pub fn normalize_caption(text: &str, language: Language, rules: &RuleSet) -> (String, NormalizationReport) {
    let mut fired = [false; 7];
    let mut cur = text.to_string();
    let max_passes = cur.chars().count() + 4;
    for _ in 0..max_passes {
        let before = cur.clone();
        for (k, &rule) in Rule::ORDER.iter().enumerate() {
            if !rules.enabled(rule) {
                continue;
            }
            let next = apply(rule, &cur, language);
            if next != cur {
                fired[k] = true;
                cur = next;
            }
        }
        if cur == before {
            break;
        }
    }
    let mut report = NormalizationReport {
        chars_removed: text.chars().count().saturating_sub(cur.chars().count()),
        ..Default::default()
    };
    for (k, rule) in Rule::ORDER.iter().enumerate() {
        if fired[k] {
            report.rules_fired.insert(rule.name().to_string(), 1);
        }
    }
    (cur, report)
}

/// Normalizes every caption, drops the ones that end up empty and renumbers.
pub fn normalize_document(
    doc: &SubtitleDocument,
    config: &NormalizeConfig,
) -> Result<(SubtitleDocument, NormalizationReport), NormalizeError> {
    let mut report = NormalizationReport::default();
    let mut captions = Vec::with_capacity(doc.captions.len());
    for c in &doc.captions {
        let (clean, r) = normalize_caption(&c.text, doc.language, &config.rules);
        report.merge(&r);
        if !clean.is_empty() {
            captions.push(crate::ingest::Caption { text: clean, ..c.clone() });
        }
    }
    if captions.len() < config.min_captions {
        return Err(NormalizeError::Rejected { doc_id: doc.doc_id.clone(), survivors: captions.len() });
    }
    reindex(&mut captions);
    Ok((SubtitleDocument { captions, ..doc.clone() }, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Caption;

    fn en(s: &str) -> String {
        normalize_caption(s, Language::En, &RuleSet::default()).0
    }

    fn ja(s: &str) -> String {
        normalize_caption(s, Language::Ja, &RuleSet::default()).0
    }

    #[test]
    fn laughs_and_lowercase() {
        assert_eq!(en("(laughs) Hello THERE"), "hello there");
    }

    #[test]
    fn signature_line() {
        assert_eq!(en("- Sync by honeybunny -"), "");
        assert_eq!(en("Subs by someone @ site.org"), "");
        assert_eq!(en("Synced and corrected by foo"), "");
        assert_eq!(ja("字幕：山田太郎"), "");
        assert_eq!(ja("字幕がない"), "字幕がない");
    }

    #[test]
    fn japanese_identity() {
        assert_eq!(ja("こんにちは"), "こんにちは");
    }

    #[test]
    fn brackets_all_kinds() {
        assert_eq!(en("a [music] b {\\an8} c"), "a b c");
        assert_eq!(ja("【拍手】ありがとう（笑）"), "ありがとう");
        assert_eq!(en("nested (a [b] c) d"), "nested d");
        assert_eq!(en("stray ) and ( here"), "stray and here");
    }

    #[test]
    fn tags_and_punctuation() {
        assert_eq!(en("<i>what?!!</i>"), "what?!");
        assert_eq!(en("wait.... no.."), "wait... no.");
        assert_eq!(en("ok..."), "ok...");
        assert_eq!(en("♪ la la la ♪"), "la la la");
        assert_eq!(en("-- well, yes,"), "well, yes");
    }

    #[test]
    fn out_of_language_runs() {
        assert_eq!(en("hello Ð¿Ñ€Ð junk"), "hello ð¿ñ€ð junk");
        assert_eq!(en("hello привет there"), "hello there");
        assert_eq!(en("café 3000"), "café 3000");
        assert_eq!(ja("これはabcdefghijですカメラOK"), "これはですカメラOK");
    }

    #[test]
    fn dash_exposed_by_bracket_removal() {
        assert_eq!(en("(sighs) - fine"), "fine");
    }

    #[test]
    fn toggles() {
        let mut rules = RuleSet::default();
        rules.lowercase.enabled = false;
        assert_eq!(normalize_caption("(x) Hi", Language::En, &rules).0, "Hi");
    }

    #[test]
    fn report_counts() {
        let (_, r) = normalize_caption("(laughs) Hi", Language::En, &RuleSet::default());
        assert_eq!(r.rules_fired.get("brackets"), Some(&1));
        assert_eq!(r.rules_fired.get("lowercase"), Some(&1));
        assert_eq!(r.chars_removed, 9);
    }

    fn doc(texts: &[&str]) -> SubtitleDocument {
        let caps = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Caption { index: i + 1, start_ms: i as u64 * 1000, end_ms: i as u64 * 1000 + 500, text: t.to_string() })
            .collect();
        SubtitleDocument::new("en/x", "x", Language::En, caps)
    }

    #[test]
    fn document_clean_kept() {
        let texts: Vec<String> = (0..10).map(|i| format!("Line {i}")).collect();
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        let (d, _) = normalize_document(&doc(&refs), &NormalizeConfig::default()).unwrap();
        assert_eq!(d.captions.len(), 10);
        assert_eq!(d.captions[3].text, "line 3");
    }

    #[test]
    fn document_all_sound_cues_rejected() {
        let d = doc(&["[door]", "(laughs)", "[music]", "(sighs)", "[thunder]", "(gasps)"]);
        assert!(matches!(
            normalize_document(&d, &NormalizeConfig::default()),
            Err(NormalizeError::Rejected { survivors: 0, .. })
        ));
    }

    #[test]
    fn document_signature_dropped() {
        let mut texts: Vec<String> = (0..20).map(|i| format!("line {i}")).collect();
        texts[19] = "Subtitles by the team".into();
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        let (d, _) = normalize_document(&doc(&refs), &NormalizeConfig::default()).unwrap();
        assert_eq!(d.captions.len(), 19);
        assert_eq!(d.captions.last().unwrap().index, 19);
    }
}
