//! The toy world: lexicon, embeddings, dictionary, misspellings and a
//! phrase generator, all derived deterministically from the built-in
//! vocabulary.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::IndexedRandom;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::vocab::{ADJECTIVES, FUNCTION_WORDS, NOUNS, VERBS};
use super::SynthError;
use crate::capalign::{AlignmentResources, EmbeddingTable, EnglishExtractor, Lexicon};
use crate::spellcheck::{Dictionary, ErrorModel, LanguageModel, SpellChecker};

/// Dimension of the toy embeddings.
pub const EMBEDDING_DIM: usize = 32;
const WORLD_SEED: u64 = 0x5eed_0f70_u64;
/// Typical misspellings generated per English word.
const VARIANTS_PER_WORD: usize = 4;
/// Misspelling instances per English word in the corpus.
const INSTANCES_PER_WORD: usize = 10;
/// Sentences used to count the toy language model.
const LM_SENTENCES: usize = 4000;

/// One caption's worth of parallel text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilingualPhrase {
    pub ja: String,
    pub en: String,
}

/// Phrases plus the misspellings the English side may be corrupted with.
#[derive(Debug, Clone)]
pub struct Template {
    pub phrases: Vec<BilingualPhrase>,
    /// English word to its typical misspellings.
    pub misspellings: HashMap<String, Vec<String>>,
}

/// Deterministic bilingual toy world.
#[derive(Debug, Clone)]
pub struct ToyWorld {
    pub lexicon: Lexicon,
    pub embeddings: EmbeddingTable<f64>,
    /// Every English word the templates can emit.
    pub dictionary: Vec<String>,
    /// Birkbeck-style corpus: `(intended, observed misspellings)`.
    pub misspelling_corpus: Vec<(String, Vec<String>)>,
    variants: HashMap<String, Vec<String>>,
    /// Unnormalized Zipf weights for sampling nouns, verbs, adjectives.
    noun_weights: Vec<f64>,
    verb_weights: Vec<f64>,
    adjective_weights: Vec<f64>,
}

fn zipf(n: usize) -> Vec<f64> {
    (1..=n).map(|r| 1.0 / r as f64).collect()
}

fn pick<'a, T>(rng: &mut impl Rng, items: &'a [T], weights: &[f64]) -> &'a T {
    let total: f64 = weights.iter().sum();
    let mut x = rng.random::<f64>() * total;
    for (item, w) in items.iter().zip(weights) {
        if x < *w {
            return item;
        }
        x -= w;
    }
    items.last().expect("non-empty vocabulary")
}

/// A plausible misspelling of `word`: transposition, deletion, doubling,
/// vowel swap or neighbouring-key substitution.
fn misspell(word: &str, rng: &mut impl Rng) -> String {
    const VOWELS: &[char] = &['a', 'e', 'i', 'o', 'u'];
    const ROWS: &[&str] = &["qwertyuiop", "asdfghjkl", "zxcvbnm"];
    let mut c: Vec<char> = word.chars().collect();
    let n = c.len();
    match rng.random_range(0..5) {
        0 if n >= 2 => {
            let i = rng.random_range(0..n - 1);
            c.swap(i, i + 1);
        }
        1 if n >= 3 => {
            c.remove(rng.random_range(0..n));
        }
        2 => {
            let i = rng.random_range(0..n);
            c.insert(i, c[i]);
        }
        3 if c.iter().any(|x| VOWELS.contains(x)) => {
            let idx: Vec<usize> = (0..n).filter(|&i| VOWELS.contains(&c[i])).collect();
            let i = *idx.choose(rng).unwrap();
            c[i] = *VOWELS.iter().filter(|&&v| v != c[i]).collect::<Vec<_>>().choose(rng).unwrap().to_owned();
        }
        _ => {
            let i = rng.random_range(0..n);
            if let Some(row) = ROWS.iter().find(|r| r.contains(c[i])) {
                let keys: Vec<char> = row.chars().collect();
                let p = keys.iter().position(|&k| k == c[i]).unwrap();
                let q = if p == 0 || (p + 1 < keys.len() && rng.random()) { p + 1 } else { p - 1 };
                c[i] = keys[q];
            }
        }
    }
    c.into_iter().collect()
}

impl Default for ToyWorld {
    fn default() -> Self {
        Self::new()
    }
}

impl ToyWorld {
    pub fn new() -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(WORLD_SEED);

        let mut lexicon = Lexicon::new();
        for (ja, en) in NOUNS {
            lexicon.insert(ja, [*en]);
        }
        for (ja, _, en, _) in VERBS {
            lexicon.insert(ja, [format!("to {en}")]);
        }
        for (ja, _, en) in ADJECTIVES {
            lexicon.insert(ja, [*en]);
        }

        let stemmer = EnglishExtractor::default();
        let mut embeddings = EmbeddingTable::new(EMBEDDING_DIM);
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        let bases = NOUNS.iter().map(|n| n.1).chain(VERBS.iter().map(|v| v.2)).chain(ADJECTIVES.iter().map(|a| a.2));
        for w in bases {
            let v: Vec<f64> = (0..EMBEDDING_DIM).map(|_| normal.sample(&mut rng)).collect();
            embeddings.insert(stemmer.stem(w), v).expect("fixed dimension");
        }

        let mut forms: BTreeSet<String> = FUNCTION_WORDS.iter().map(|s| s.to_string()).collect();
        forms.extend(NOUNS.iter().map(|n| n.1.to_string()));
        forms.extend(VERBS.iter().flat_map(|v| [v.2.to_string(), v.3.to_string()]));
        forms.extend(ADJECTIVES.iter().map(|a| a.2.to_string()));
        let dictionary: Vec<String> = forms.into_iter().collect();
        let in_dict: HashSet<&str> = dictionary.iter().map(String::as_str).collect();

        let mut variants: HashMap<String, Vec<String>> = HashMap::new();
        let mut misspelling_corpus = Vec::new();
        let instance_weights = zipf(VARIANTS_PER_WORD);
        for w in dictionary.iter().filter(|w| !FUNCTION_WORDS.contains(&w.as_str())) {
            let mut vs: Vec<String> = Vec::new();
            for _ in 0..VARIANTS_PER_WORD * 20 {
                if vs.len() == VARIANTS_PER_WORD {
                    break;
                }
                let m = misspell(w, &mut rng);
                if m != *w && !in_dict.contains(m.as_str()) && !vs.contains(&m) {
                    vs.push(m);
                }
            }
            if vs.is_empty() {
                continue;
            }
            let observed: Vec<String> = (0..INSTANCES_PER_WORD)
                .map(|_| pick(&mut rng, &vs, &instance_weights[..vs.len()]).clone())
                .collect();
            misspelling_corpus.push((w.clone(), observed));
            variants.insert(w.clone(), vs);
        }

        ToyWorld {
            lexicon,
            embeddings,
            dictionary,
            misspelling_corpus,
            variants,
            noun_weights: zipf(NOUNS.len()),
            verb_weights: zipf(VERBS.len()),
            adjective_weights: zipf(ADJECTIVES.len()),
        }
    }

    /// Typical misspellings of each English word.
    pub fn misspellings(&self) -> &HashMap<String, Vec<String>> {
        &self.variants
    }

    pub fn alignment_resources(&self) -> AlignmentResources<f64> {
        AlignmentResources::new(self.lexicon.clone(), self.embeddings.clone())
    }

    /// One random phrase and the multiset of concepts it uses.
    fn phrase(&self, rng: &mut impl Rng) -> (BilingualPhrase, Vec<&'static str>) {
        let noun = |rng: &mut _| *pick(rng, NOUNS, &self.noun_weights);
        let verb = |rng: &mut _| *pick(rng, VERBS, &self.verb_weights);
        let adj = |rng: &mut _| *pick(rng, ADJECTIVES, &self.adjective_weights);
        let polite = rng.random::<bool>();
        let (ja, en, concepts) = match rng.random_range(0..5) {
            0 => {
                let (a, n1, n2, v) = (adj(rng), noun(rng), noun(rng), verb(rng));
                let vj = if polite { v.1 } else { v.0 };
                (
                    format!("{}{}が{}を{}", a.0, n1.0, n2.0, vj),
                    format!("The {} {} {} the {}.", a.2, n1.1, v.3, n2.1),
                    vec![a.2, n1.1, n2.1, v.2],
                )
            }
            1 => {
                let (n, a) = (noun(rng), adj(rng));
                let (aj, be) = if polite { (a.1, "was") } else { (a.0, "is") };
                (format!("{}は{}", n.0, aj), format!("The {} {be} {}.", n.1, a.2), vec![n.1, a.2])
            }
            2 => {
                let (n1, n2, v) = (noun(rng), noun(rng), verb(rng));
                let vj = if polite { v.1 } else { v.0 };
                (
                    format!("{}と{}を{}", n1.0, n2.0, vj),
                    format!("I {} the {} and the {}.", v.2, n1.1, n2.1),
                    vec![n1.1, n2.1, v.2],
                )
            }
            3 => {
                let (n1, n2, v) = (noun(rng), noun(rng), verb(rng));
                let vj = if polite { v.1 } else { v.0 };
                (
                    format!("{}の{}を{}", n1.0, n2.0, vj),
                    format!("They {} the {} of the {}.", v.2, n2.1, n1.1),
                    vec![n1.1, n2.1, v.2],
                )
            }
            _ => {
                let (a, n1, n2, v) = (adj(rng), noun(rng), noun(rng), verb(rng));
                let vj = if polite { v.1 } else { v.0 };
                (
                    format!("{}で{}{}を{}", n1.0, a.0, n2.0, vj),
                    format!("We {} the {} {} at the {}.", v.2, a.2, n2.1, n1.1),
                    vec![n1.1, a.2, n2.1, v.2],
                )
            }
        };
        let ja = format!("{ja}。");
        (BilingualPhrase { ja, en }, concepts)
    }

    /// `n` phrases whose concept multisets are pairwise distinct.
    pub fn phrase_table(&self, n: usize, seed: u64) -> Result<Vec<BilingualPhrase>, SynthError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen: HashSet<Vec<&str>> = HashSet::new();
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0usize;
        while out.len() < n {
            attempts += 1;
            if attempts > 50 * n + 1000 {
                return Err(SynthError::TemplateTooSmall { needed: n, available: out.len() });
            }
            let (p, mut concepts) = self.phrase(&mut rng);
            concepts.sort_unstable();
            if seen.insert(concepts) {
                out.push(p);
            }
        }
        Ok(out)
    }

    pub fn template(&self, n: usize, seed: u64) -> Result<Template, SynthError> {
        Ok(Template { phrases: self.phrase_table(n, seed)?, misspellings: self.variants.clone() })
    }

    /// Lowercased, punctuation-free token sentences from the phrase generator.
    fn lm_sentences(&self) -> Vec<Vec<String>> {
        let mut rng = ChaCha8Rng::seed_from_u64(WORLD_SEED ^ 0x1a46);
        (0..LM_SENTENCES)
            .map(|_| {
                let (p, _) = self.phrase(&mut rng);
                tokenize_english(&p.en)
            })
            .collect()
    }

    pub fn language_model(&self) -> LanguageModel {
        LanguageModel::from_sentences(&self.lm_sentences()).expect("non-empty toy corpus")
    }

    pub fn error_model(&self) -> ErrorModel {
        ErrorModel::train(&self.misspelling_corpus).expect("non-empty toy corpus")
    }

    pub fn spell_dictionary(&self) -> Dictionary {
        Dictionary::new(self.dictionary.iter())
    }

    pub fn spell_checker(&self) -> SpellChecker {
        SpellChecker::new(self.error_model(), self.language_model(), self.spell_dictionary())
    }

    /// Writes every resource file the pipeline reads and returns their paths.
    pub fn write_resources(&self, dir: &Path) -> std::io::Result<ResourcePaths> {
        std::fs::create_dir_all(dir)?;
        let paths = ResourcePaths::in_dir(dir);

        let mut lex = String::new();
        let mut heads: Vec<&str> = self.lexicon.headwords().collect();
        heads.sort_unstable();
        for h in heads {
            let _ = writeln!(lex, "{h}\t{}", self.lexicon.get(h).unwrap_or_default().join("/"));
        }
        std::fs::write(&paths.lexicon, lex)?;

        let mut emb = format!("{} {}\n", self.embeddings.len(), EMBEDDING_DIM);
        let mut words: Vec<&str> = self.embeddings.words().collect();
        words.sort_unstable();
        for w in words {
            let v = self.embeddings.get(w).expect("listed word");
            let _ = writeln!(emb, "{w} {}", v.iter().map(f64::to_string).collect::<Vec<_>>().join(" "));
        }
        std::fs::write(&paths.embeddings, emb)?;

        std::fs::write(&paths.dictionary, self.dictionary.join("\n") + "\n")?;

        let mut miss = String::new();
        for (w, obs) in &self.misspelling_corpus {
            let _ = writeln!(miss, "${w}");
            for o in obs {
                let _ = writeln!(miss, "{o}");
            }
        }
        std::fs::write(&paths.misspellings, miss)?;

        let mut uni: BTreeMap<String, u64> = BTreeMap::new();
        let mut bi: BTreeMap<(String, String), u64> = BTreeMap::new();
        for s in self.lm_sentences() {
            for (i, w) in s.iter().enumerate() {
                *uni.entry(w.clone()).or_default() += 1;
                if i > 0 {
                    *bi.entry((s[i - 1].clone(), w.clone())).or_default() += 1;
                }
            }
        }
        let uni_text: String = uni.iter().map(|(w, c)| format!("{w}\t{c}\n")).collect();
        let bi_text: String = bi.iter().map(|((a, b), c)| format!("{a} {b}\t{c}\n")).collect();
        std::fs::write(&paths.unigrams, uni_text)?;
        std::fs::write(&paths.bigrams, bi_text)?;
        Ok(paths)
    }
}

/// Splits English text into lowercase word tokens, dropping punctuation.
pub fn tokenize_english(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| c.is_ascii_punctuation()).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Locations of the resource files written by [`ToyWorld::write_resources`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourcePaths {
    pub lexicon: PathBuf,
    pub embeddings: PathBuf,
    pub dictionary: PathBuf,
    pub misspellings: PathBuf,
    pub unigrams: PathBuf,
    pub bigrams: PathBuf,
}

impl ResourcePaths {
    pub fn in_dir(dir: &Path) -> Self {
        ResourcePaths {
            lexicon: dir.join("lexicon.tsv"),
            embeddings: dir.join("embeddings.txt"),
            dictionary: dir.join("dictionary.txt"),
            misspellings: dir.join("misspellings.txt"),
            unigrams: dir.join("unigrams.tsv"),
            bigrams: dir.join("bigrams.tsv"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capalign::caption_similarity;

    #[test]
    fn inflections_share_stems() {
        let e = EnglishExtractor::default();
        for (_, _, base, third) in VERBS {
            assert_eq!(e.stem(base), e.stem(third), "{base}/{third}");
        }
    }

    #[test]
    fn phrases_translate_exactly() {
        let w = ToyWorld::new();
        let r = w.alignment_resources();
        for p in w.phrase_table(300, 1).unwrap() {
            let s = caption_similarity(&p.ja, &p.en, &r).unwrap();
            assert!((s - 1.0).abs() < 1e-12, "{p:?} -> {s}");
            let mut ja = r.japanese_words(&p.ja);
            let mut en = r.english_words(&p.en);
            ja.sort();
            en.sort();
            assert_eq!(ja, en, "{p:?}");
        }
    }

    #[test]
    fn misspellings_are_out_of_dictionary() {
        let w = ToyWorld::new();
        let dict = w.spell_dictionary();
        assert!(w.misspelling_corpus.len() > 100);
        for (_, obs) in &w.misspelling_corpus {
            assert!(obs.iter().all(|o| !dict.contains(o)));
        }
    }

    #[test]
    fn deterministic() {
        let a = ToyWorld::new();
        let b = ToyWorld::new();
        assert_eq!(a.misspelling_corpus, b.misspelling_corpus);
        assert_eq!(a.phrase_table(20, 3).unwrap(), b.phrase_table(20, 3).unwrap());
        assert_eq!(a.embeddings.get("cat"), b.embeddings.get("cat"));
    }

    #[test]
    fn resources_roundtrip() {
        let w = ToyWorld::new();
        let dir = tempfile::tempdir().unwrap();
        let p = w.write_resources(dir.path()).unwrap();
        let emb: EmbeddingTable<f64> = EmbeddingTable::load(&p.embeddings).unwrap();
        assert_eq!(emb.len(), w.embeddings.len());
        assert_eq!(emb.get("cat"), w.embeddings.get("cat"));
        let lex = Lexicon::load(&p.lexicon).unwrap();
        assert_eq!(lex.get("食べる").unwrap(), ["to eat"]);
        let lm = LanguageModel::load(&p.unigrams, &p.bigrams).unwrap();
        assert_eq!(lm.total_tokens(), w.language_model().total_tokens());
        let em = ErrorModel::load(&p.misspellings).unwrap();
        assert_eq!(em.vocab_size(), w.error_model().vocab_size());
    }
}
