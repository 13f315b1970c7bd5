use rand::seq::IndexedRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::vocab::OCR_CONFUSIONS;
use super::{SynthError, Template};
use crate::ingest::{Caption, Language, SubtitleDocument};
use crate::text::is_punct;

/// Corruptions applied to a synthetic pair. Time, drop and OCR corruptions
/// hit the Japanese side; misspellings hit the English side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorruptionSpec {
    pub time_shift_s: f64,
    pub rate_factor: f64,
    pub drop_rate: f64,
    pub ocr_noise_rate: f64,
    pub misspell_rate: f64,
    pub seed: u64,
}

impl CorruptionSpec {
    pub fn none(seed: u64) -> Self {
        CorruptionSpec { time_shift_s: 0.0, rate_factor: 1.0, drop_rate: 0.0, ocr_noise_rate: 0.0, misspell_rate: 0.0, seed }
    }

    /// 5 s shift, 0.5% speed ratio, 10% drops, 2% OCR noise, 5% misspellings.
    pub fn moderate(seed: u64) -> Self {
        CorruptionSpec {
            time_shift_s: 5.0,
            rate_factor: 1.005,
            drop_rate: 0.1,
            ocr_noise_rate: 0.02,
            misspell_rate: 0.05,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let rate = |name: &'static str, v: f64| {
            if (0.0..1.0).contains(&v) {
                Ok(())
            } else {
                Err(SynthError::InvalidSpec(format!("{name} must be in [0, 1), got {v}")))
            }
        };
        rate("drop_rate", self.drop_rate)?;
        rate("ocr_noise_rate", self.ocr_noise_rate)?;
        rate("misspell_rate", self.misspell_rate)?;
        if !(self.rate_factor > 0.0 && self.rate_factor.is_finite()) {
            return Err(SynthError::InvalidSpec(format!("rate_factor must be positive, got {}", self.rate_factor)));
        }
        if !self.time_shift_s.is_finite() {
            return Err(SynthError::InvalidSpec("time_shift_s must be finite".into()));
        }
        Ok(())
    }
}

/// One planted Japanese/English caption correspondence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlantedPair {
    pub ja_doc_id: String,
    pub ja_index: usize,
    pub en_doc_id: String,
    pub en_index: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub pairs: Vec<PlantedPair>,
}

#[derive(Debug, Clone)]
pub struct SyntheticPair {
    pub en: SubtitleDocument,
    pub ja: SubtitleDocument,
    pub truth: GroundTruth,
}

/// Id a document gets when its file `<title>.srt` is loaded from the
/// language's directory.
pub fn document_id(language: Language, title: &str) -> String {
    format!("{language}/{title}.srt")
}

/// Independent random stream per corruption kind, so raising one rate
/// leaves every other random decision unchanged.
fn stream(seed: u64, kind: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(kind);
    rng
}

/// Generates a planted pair titled `synthetic.s01e01`.
pub fn generate_pair(template: &Template, n_captions: usize, spec: &CorruptionSpec) -> Result<SyntheticPair, SynthError> {
    generate_titled_pair(template, n_captions, spec, "synthetic.s01e01")
}

/// Generates `n_captions` parallel cues (2–6 s long, 0.5–2 s apart) from
/// the first phrases of `template`, then corrupts them per `spec`.
pub fn generate_titled_pair(
    template: &Template,
    n_captions: usize,
    spec: &CorruptionSpec,
    title: &str,
) -> Result<SyntheticPair, SynthError> {
    spec.validate()?;
    if template.phrases.len() < n_captions {
        return Err(SynthError::TemplateTooSmall { needed: n_captions, available: template.phrases.len() });
    }
    let mut timing = stream(spec.seed, 0);
    let mut drops = stream(spec.seed, 1);
    let mut ocr = stream(spec.seed, 2);
    let mut typos = stream(spec.seed, 3);

    let mut times = Vec::with_capacity(n_captions);
    let mut t = 1_000u64;
    for _ in 0..n_captions {
        t += timing.random_range(500..=2_000);
        let end = t + timing.random_range(2_000..=6_000);
        times.push((t, end));
        t = end;
    }

    let en_id = document_id(Language::En, title);
    let ja_id = document_id(Language::Ja, title);
    let mut en_caps = Vec::with_capacity(n_captions);
    let mut ja_caps = Vec::new();
    let mut truth = GroundTruth::default();
    let warp = |ms: u64| (ms as f64 * spec.rate_factor + spec.time_shift_s * 1000.0).round().max(0.0) as u64;
    for (k, (phrase, &(start, end))) in template.phrases.iter().zip(&times).enumerate() {
        let en_text = misspell_text(&phrase.en, template, spec.misspell_rate, &mut typos);
        en_caps.push(Caption { index: k + 1, start_ms: start, end_ms: end, text: en_text });
        if drops.random::<f64>() < spec.drop_rate {
            continue;
        }
        let ja_text = ocr_text(&phrase.ja, spec.ocr_noise_rate, &mut ocr);
        ja_caps.push(Caption { index: ja_caps.len() + 1, start_ms: warp(start), end_ms: warp(end), text: ja_text });
        truth.pairs.push(PlantedPair {
            ja_doc_id: ja_id.clone(),
            ja_index: ja_caps.len(),
            en_doc_id: en_id.clone(),
            en_index: k + 1,
        });
    }
    Ok(SyntheticPair {
        en: SubtitleDocument::new(en_id, title, Language::En, en_caps),
        ja: SubtitleDocument::new(ja_id, title, Language::Ja, ja_caps),
        truth,
    })
}

fn misspell_text(text: &str, template: &Template, rate: f64, rng: &mut ChaCha8Rng) -> String {
    let words: Vec<String> = text
        .split(' ')
        .map(|tok| {
            let core = tok.trim_end_matches(|c: char| c.is_ascii_punctuation());
            let tail = &tok[core.len()..];
            let Some(variants) = template.misspellings.get(core) else { return tok.to_string() };
            if rng.random::<f64>() < rate {
                format!("{}{tail}", variants.choose(rng).expect("non-empty variants"))
            } else {
                tok.to_string()
            }
        })
        .collect();
    words.join(" ")
}

fn ocr_text(text: &str, rate: f64, rng: &mut ChaCha8Rng) -> String {
    text.chars()
        .map(|c| {
            if !is_punct(c) && !c.is_whitespace() && rng.random::<f64>() < rate {
                *OCR_CONFUSIONS.choose(rng).expect("non-empty")
            } else {
                c
            }
        })
        .collect()
}
