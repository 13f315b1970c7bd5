//! Content-word extraction: drop function words, keep stems.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;
use std::path::Path;

use rust_stemmers::{Algorithm, Stemmer};

use super::{Lexicon, ResourceError};
use crate::ingest::Language;
use crate::text::{is_hiragana, is_kanji, is_katakana, is_latin_letter};

/// A content word as it appeared (`surface`) and in base form (`stem`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentWord {
    pub surface: String,
    pub stem: String,
}

/// Morphological front end. Implementations must be shareable across
/// alignment workers.
pub trait ContentWordExtractor: Send + Sync {
    fn language(&self) -> Language;
    fn extract(&self, text: &str) -> Vec<ContentWord>;
}

const ENGLISH_STOPWORDS: &str = include_str!("stopwords_en.txt");
const JAPANESE_PARTICLES: &str = include_str!("particles_ja.txt");

/// Reads a one-token-per-line word list.
pub fn read_word_list(reader: impl BufRead) -> Result<HashSet<String>, ResourceError> {
    let mut set = HashSet::new();
    for line in reader.lines() {
        let line = line.map_err(|e| ResourceError::Read { path: None, source: e })?;
        let w = line.trim();
        if !w.is_empty() && !w.starts_with('#') {
            set.insert(w.to_lowercase());
        }
    }
    Ok(set)
}

pub fn load_word_list(path: &Path) -> Result<HashSet<String>, ResourceError> {
    read_word_list(super::open(path)?).map_err(|e| e.in_file(path))
}

fn builtin_list(text: &str) -> HashSet<String> {
    read_word_list(text.as_bytes()).expect("built-in list")
}

/// Tokenizes on anything other than letters, digits and inner apostrophes,
/// removes stopwords and applies the Snowball English stemmer.
pub struct EnglishExtractor {
    stopwords: HashSet<String>,
    stemmer: Stemmer,
}

impl Default for EnglishExtractor {
    fn default() -> Self {
        Self::with_stopwords(builtin_list(ENGLISH_STOPWORDS))
    }
}

impl EnglishExtractor {
    pub fn with_stopwords(stopwords: HashSet<String>) -> Self {
        EnglishExtractor { stopwords, stemmer: Stemmer::create(Algorithm::English) }
    }

    pub fn stem(&self, word: &str) -> String {
        self.stemmer.stem(word).into_owned()
    }
}

impl ContentWordExtractor for EnglishExtractor {
    fn language(&self) -> Language {
        Language::En
    }

    fn extract(&self, text: &str) -> Vec<ContentWord> {
        let lower = text.to_lowercase();
        lower
            .split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '’'))
            .map(|t| t.trim_matches(['\'', '’']))
            .filter(|t| !t.is_empty() && !self.stopwords.contains(*t))
            .filter_map(|t| {
                let stem = self.stem(t);
                (!stem.is_empty()).then(|| ContentWord { surface: t.to_string(), stem })
            })
            .collect()
    }
}

/// Endings of dictionary-form verbs and i-adjectives. A headword ending in
/// one of these, minus the ending, is an inflection stem.
const INFLECTING_ENDINGS: &[char] = &['う', 'く', 'ぐ', 'す', 'つ', 'ぬ', 'ぶ', 'む', 'る', 'い'];

/// Longest-match segmentation against the lexicon headwords. Verb and
/// adjective headwords also match their stem followed by a hiragana
/// inflection tail. Text not covered by the lexicon is split into runs of
/// one script. Particles and auxiliaries are then dropped.
pub struct JapaneseExtractor {
    headwords: HashSet<String>,
    /// Inflection stem to the dictionary forms it came from, sorted.
    stems: HashMap<String, Vec<String>>,
    max_len: usize,
    particles: HashSet<String>,
}

impl JapaneseExtractor {
    pub fn new(lexicon: &Lexicon) -> Self {
        Self::with_particles(lexicon, builtin_list(JAPANESE_PARTICLES))
    }

    pub fn with_particles(lexicon: &Lexicon, particles: HashSet<String>) -> Self {
        let headwords: HashSet<String> = lexicon.headwords().map(str::to_string).collect();
        let mut stems: HashMap<String, Vec<String>> = HashMap::new();
        for w in &headwords {
            let mut chars: Vec<char> = w.chars().collect();
            if chars.len() >= 2 && INFLECTING_ENDINGS.contains(chars.last().unwrap()) {
                chars.pop();
                let stem: String = chars.into_iter().collect();
                if !headwords.contains(&stem) {
                    stems.entry(stem).or_default().push(w.clone());
                }
            }
        }
        for forms in stems.values_mut() {
            forms.sort();
        }
        let max_len = headwords.iter().map(|w| w.chars().count()).max().unwrap_or(0);
        JapaneseExtractor { headwords, stems, max_len, particles }
    }

    /// Splits `text` into `(surface, base form)` segments, function words included.
    pub fn segment(&self, text: &str) -> Vec<ContentWord> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if !is_word_char(c) {
                i += 1;
                continue;
            }
            if let Some((len, stem)) = self.lexicon_match(&chars, i) {
                out.push(ContentWord { surface: chars[i..i + len].iter().collect(), stem });
                i += len;
                continue;
            }
            let class = script(c);
            let mut j = i + 1;
            while j < chars.len() && script(chars[j]) == class && is_word_char(chars[j]) {
                if class == Script::Hiragana && self.lexicon_match(&chars, j).is_some() {
                    break;
                }
                j += 1;
            }
            let run: String = chars[i..j].iter().collect();
            out.extend(self.split_particles(&run, class));
            i = j;
        }
        out
    }

    /// Longest headword or inflected form starting at `i`: `(chars consumed, base form)`.
    fn lexicon_match(&self, chars: &[char], i: usize) -> Option<(usize, String)> {
        let limit = self.max_len.min(chars.len() - i);
        for len in (1..=limit).rev() {
            let cand: String = chars[i..i + len].iter().collect();
            if self.headwords.contains(&cand) {
                return Some((len, cand));
            }
            if let Some(forms) = self.stems.get(&cand) {
                let mut end = i + len;
                while end < chars.len() && is_hiragana(chars[end]) && !self.starts_particle(chars, end) {
                    end += 1;
                }
                if end > i + len {
                    return Some((end - i, forms[0].clone()));
                }
            }
        }
        None
    }

    fn starts_particle(&self, chars: &[char], i: usize) -> bool {
        // Tails never swallow a case particle; they may swallow auxiliaries.
        matches!(chars[i], 'は' | 'が' | 'を' | 'に' | 'へ' | 'と' | 'も' | 'の' | 'や')
            && (i == 0 || !matches!(chars[i - 1], 'て' | 'で'))
    }

    /// A hiragana run is broken at particle boundaries greedily from the
    /// left; other runs stay whole.
    fn split_particles(&self, run: &str, class: Script) -> Vec<ContentWord> {
        let word = |s: &str| ContentWord { surface: s.to_string(), stem: s.to_string() };
        if class != Script::Hiragana || self.particles.contains(run) {
            return vec![word(run)];
        }
        let chars: Vec<char> = run.chars().collect();
        let mut out = Vec::new();
        let mut start = 0;
        let mut i = 0;
        while i < chars.len() {
            let hit = (1..=chars.len() - i).rev().find(|&l| {
                let s: String = chars[i..i + l].iter().collect();
                self.particles.contains(&s)
            });
            match hit {
                Some(l) => {
                    if start < i {
                        out.push(word(&chars[start..i].iter().collect::<String>()));
                    }
                    out.push(word(&chars[i..i + l].iter().collect::<String>()));
                    i += l;
                    start = i;
                }
                None => i += 1,
            }
        }
        if start < chars.len() {
            out.push(word(&chars[start..].iter().collect::<String>()));
        }
        out
    }
}

impl ContentWordExtractor for JapaneseExtractor {
    fn language(&self) -> Language {
        Language::Ja
    }

    fn extract(&self, text: &str) -> Vec<ContentWord> {
        self.segment(text).into_iter().filter(|w| !self.particles.contains(&w.surface)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Script {
    Hiragana,
    Katakana,
    Kanji,
    Latin,
    Other,
}

fn script(c: char) -> Script {
    if is_hiragana(c) {
        Script::Hiragana
    } else if is_katakana(c) || c == 'ー' {
        Script::Katakana
    } else if is_kanji(c) || c == '々' {
        Script::Kanji
    } else if is_latin_letter(c) || c.is_ascii_digit() {
        Script::Latin
    } else {
        Script::Other
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == 'ー' || c == '々'
}

/// Content-word stems of `text` from the extractor for its language.
pub fn extract_content_words(text: &str, extractor: &dyn ContentWordExtractor) -> Vec<String> {
    extractor.extract(text).into_iter().map(|w| w.stem).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lexicon() -> Lexicon {
        let mut l = Lexicon::new();
        l.insert("猫", ["cat"]);
        l.insert("食べる", ["to eat"]);
        l.insert("大きい", ["big"]);
        l.insert("犬", ["dog"]);
        l.insert("走る", ["to run"]);
        l
    }

    #[test]
    fn english_golden() {
        let e = EnglishExtractor::default();
        assert_eq!(extract_content_words("the cats are running", &e), ["cat", "run"]);
        assert_eq!(extract_content_words("", &e), Vec::<String>::new());
        assert_eq!(extract_content_words("I don't know, John!", &e), ["know", "john"]);
        assert_eq!(extract_content_words("The cat eats.", &e), ["cat", "eat"]);
    }

    #[test]
    fn japanese_particles_only() {
        let j = JapaneseExtractor::new(&lexicon());
        assert!(extract_content_words("は が を", &j).is_empty());
        assert!(extract_content_words("", &j).is_empty());
    }

    #[test]
    fn japanese_segmentation() {
        let j = JapaneseExtractor::new(&lexicon());
        assert_eq!(extract_content_words("猫 食べる", &j), ["猫", "食べる"]);
        assert_eq!(extract_content_words("猫が魚を食べました", &j), ["猫", "魚", "食べる"]);
        assert_eq!(extract_content_words("大きかった犬が走っている", &j), ["大きい", "犬", "走る"]);
        let w = j.extract("食べたい");
        assert_eq!(w[0], ContentWord { surface: "食べたい".into(), stem: "食べる".into() });
        assert_eq!(extract_content_words("テレビを見て", &j), ["テレビ", "見"]);
    }
}
