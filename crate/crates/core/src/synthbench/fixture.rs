//! A small on-disk corpus for end-to-end runs: a few episodes of a toy show
//! in both languages, the resource files, a pipeline configuration, and a
//! manifest of the caption pairs that were planted.

use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BilingualPhrase, ToyWorld};
use crate::filter::FilterConfig;
use crate::ingest::{Caption, Encoding, Language, write_srt};
use crate::normalize::{normalize_caption, RuleSet};
use crate::pipeline::{PipelineConfig, ResourceConfig};
use crate::{Error, Result};

/// Manifest file name inside a fixture directory.
pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub episodes: usize,
    /// Parallel captions per episode.
    pub planted: usize,
    /// Japanese-only captions per episode, with content unrelated to any
    /// English caption.
    pub ja_distractors: usize,
    /// English-only captions per episode, with some words misspelled.
    pub en_distractors: usize,
    pub seed: u64,
}

impl Default for FixtureSpec {
    fn default() -> Self {
        FixtureSpec { episodes: 3, planted: 20, ja_distractors: 40, en_distractors: 8, seed: 7 }
    }
}

/// A planted pair with both texts as they read after normalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedText {
    pub ja_doc_id: String,
    pub ja_index: usize,
    pub en_doc_id: String,
    pub en_index: usize,
    pub ja_text: String,
    pub en_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureManifest {
    pub spec: FixtureSpec,
    pub config: PathBuf,
    pub planted: Vec<PlantedText>,
}

impl FixtureManifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Planted,
    JaOnly,
    EnOnly,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn crlf(s: &str) -> String {
    s.replace('\n', "\r\n")
}

/// Encodes a Japanese episode; episodes rotate through the encodings found
/// in the wild so ingest detection is exercised.
fn encode_ja(episode: usize, srt: &str) -> Vec<u8> {
    match episode % 3 {
        1 => {
            let mut out = vec![0xEF, 0xBB, 0xBF];
            out.extend_from_slice(srt.as_bytes());
            out
        }
        2 => Encoding::ShiftJis.encode(&crlf(srt)),
        _ => {
            let mut out = vec![0xFF, 0xFE];
            out.extend(Encoding::Utf16Le.encode(srt));
            out
        }
    }
}

/// English as a fan transcript would write it: occasional sound cues and
/// italics around the line.
fn decorate_en(text: &str, rng: &mut ChaCha8Rng) -> String {
    match rng.random_range(0..6) {
        0 => format!("(laughs) {text}"),
        1 => format!("<i>{text}</i>"),
        _ => text.to_string(),
    }
}

/// Replaces about a third of the misspellable words with a recorded
/// misspelling, so the spelling stage has work to do.
fn misspell(text: &str, world: &ToyWorld, rng: &mut ChaCha8Rng) -> String {
    let words: Vec<String> = text
        .split(' ')
        .map(|tok| {
            let core = tok.trim_end_matches(|c: char| c.is_ascii_punctuation());
            match world.misspellings().get(core) {
                Some(v) if rng.random_range(0..3) == 0 => format!("{}{}", v[rng.random_range(0..v.len())], &tok[core.len()..]),
                _ => tok.to_string(),
            }
        })
        .collect();
    words.join(" ")
}

/// Writes a fixture under `dir` and returns its manifest. The layout is
/// `en/`, `ja/`, `resources/`, `config.toml` and `manifest.json`; the
/// configuration uses paths relative to `dir`.
pub fn write_fixture(dir: &Path, spec: &FixtureSpec) -> Result<FixtureManifest> {
    let world = ToyWorld::new();
    let per_episode = spec.planted + spec.ja_distractors + spec.en_distractors;
    // One extra episode's worth feeds an English file with no Japanese counterpart.
    let mut phrases: Vec<BilingualPhrase> =
        world.phrase_table(per_episode * (spec.episodes + 1), spec.seed).map_err(Error::from)?;
    let orphan: Vec<BilingualPhrase> = phrases.split_off(per_episode * spec.episodes);

    let en_dir = dir.join("en");
    let ja_dir = dir.join("ja");
    let res_dir = dir.join("resources");
    for d in [&en_dir, &ja_dir, &res_dir] {
        std::fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
    }
    let paths = world.write_resources(&res_dir).map_err(|e| Error::io(&res_dir, e))?;

    let rules = RuleSet::default();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut planted = Vec::new();
    for (ep, chunk) in phrases.chunks(per_episode).enumerate() {
        let ep = ep + 1;
        let en_name = format!("Toy.Drama.S01E{ep:02}.720p.en.srt");
        let ja_name = format!("[Fansub] Toy Drama - {ep:02} [1080p].ja.srt");
        let en_id = format!("{}/{en_name}", Language::En);
        let ja_id = format!("{}/{ja_name}", Language::Ja);

        let mut slots: Vec<Slot> = std::iter::repeat_n(Slot::Planted, spec.planted)
            .chain(std::iter::repeat_n(Slot::JaOnly, spec.ja_distractors))
            .chain(std::iter::repeat_n(Slot::EnOnly, spec.en_distractors))
            .collect();
        slots.shuffle(&mut rng);

        let mut en_caps = Vec::new();
        let mut ja_caps = Vec::new();
        let mut t = 1_000u64;
        for (slot, phrase) in slots.iter().zip(chunk) {
            t += rng.random_range(500..=2_000);
            let end = t + rng.random_range(2_000..=6_000);
            let en = |caps: &mut Vec<Caption>, text: &str, rng: &mut ChaCha8Rng| {
                caps.push(Caption { index: caps.len() + 1, start_ms: t, end_ms: end, text: decorate_en(text, rng) });
            };
            let ja = |caps: &mut Vec<Caption>| {
                caps.push(Caption { index: caps.len() + 1, start_ms: t, end_ms: end, text: phrase.ja.clone() });
            };
            match slot {
                Slot::Planted => {
                    en(&mut en_caps, &phrase.en, &mut rng);
                    ja(&mut ja_caps);
                    planted.push(PlantedText {
                        ja_doc_id: ja_id.clone(),
                        ja_index: ja_caps.len(),
                        en_doc_id: en_id.clone(),
                        en_index: en_caps.len(),
                        ja_text: normalize_caption(&phrase.ja, Language::Ja, &rules).0,
                        en_text: normalize_caption(&phrase.en, Language::En, &rules).0,
                    });
                }
                Slot::JaOnly => ja(&mut ja_caps),
                Slot::EnOnly => {
                    let text = misspell(&phrase.en, &world, &mut rng);
                    en(&mut en_caps, &text, &mut rng);
                }
            }
            t = end;
        }
        write_file(&en_dir.join(&en_name), write_srt(&en_caps).as_bytes())?;
        write_file(&ja_dir.join(&ja_name), &encode_ja(ep, &write_srt(&ja_caps)))?;
    }

    let mut t = 1_000u64;
    let orphan_caps: Vec<Caption> = orphan
        .iter()
        .enumerate()
        .map(|(i, p)| {
            t += rng.random_range(2_500..=8_000);
            Caption { index: i + 1, start_ms: t - 2_000, end_ms: t, text: p.en.clone() }
        })
        .collect();
    let orphan_name = format!("Toy.Drama.S01E{:02}.720p.en.srt", spec.episodes + 1);
    write_file(&en_dir.join(orphan_name), crlf(&write_srt(&orphan_caps)).as_bytes())?;
    // Too short to be a real subtitle file; ingest rejects it.
    let stub: Vec<Caption> = orphan_caps.into_iter().take(2).collect();
    write_file(&en_dir.join("sample.srt"), write_srt(&stub).as_bytes())?;

    let rel = |p: &Path| Some(p.strip_prefix(dir).unwrap_or(p).to_path_buf());
    let config = PipelineConfig {
        en_dir: "en".into(),
        ja_dir: "ja".into(),
        output_dir: "out".into(),
        seed: Some(spec.seed),
        resources: ResourceConfig {
            dictionary: rel(&paths.dictionary),
            misspellings: rel(&paths.misspellings),
            unigrams: rel(&paths.unigrams),
            bigrams: rel(&paths.bigrams),
            lexicon: rel(&paths.lexicon),
            embeddings: rel(&paths.embeddings),
            ..Default::default()
        },
        filter: FilterConfig { val_size: 4, test_size: 4, ..Default::default() },
        ..Default::default()
    };
    let config_path = dir.join("config.toml");
    write_file(&config_path, config.to_toml().as_bytes())?;

    let manifest = FixtureManifest { spec: *spec, config: "config.toml".into(), planted };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest is plain data");
    write_file(&dir.join(MANIFEST), json.as_bytes())?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let spec = FixtureSpec::default();
        let m = write_fixture(dir.path(), &spec).unwrap();
        assert_eq!(m.planted.len(), spec.episodes * spec.planted);
        assert_eq!(FixtureManifest::load(dir.path()).unwrap(), m);
        let cfg = PipelineConfig::load(&dir.path().join("config.toml")).unwrap();
        cfg.validate(true).unwrap();
        let ja = crate::ingest::load_directory(&cfg.ja_dir, Language::Ja).unwrap();
        assert_eq!(ja.documents.len(), spec.episodes);
        assert!(ja.failures.is_empty());
        let en = crate::ingest::load_directory(&cfg.en_dir, Language::En).unwrap();
        assert_eq!((en.documents.len(), en.failures.len()), (spec.episodes + 1, 1));
        for p in &m.planted {
            let doc = ja.documents.iter().find(|d| d.doc_id == p.ja_doc_id).unwrap();
            let raw = &doc.captions[p.ja_index - 1].text;
            assert_eq!(normalize_caption(raw, Language::Ja, &RuleSet::default()).0, p.ja_text);
        }
    }
}
