//! Synthetic ground truth: bilingual subtitle pairs with planted caption
//! correspondences and controlled corruptions, and precision/recall scoring
//! of the alignment stages against them.

mod fixture;
mod generate;
mod score;
mod vocab;
mod world;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fixture::{write_fixture, FixtureManifest, FixtureSpec, PlantedText};
pub use generate::{
    document_id, generate_pair, generate_titled_pair, CorruptionSpec, GroundTruth, PlantedPair, SyntheticPair,
};
pub use score::{score_alignment, AlignmentScore};
pub use world::{tokenize_english, BilingualPhrase, ResourcePaths, Template, ToyWorld, EMBEDDING_DIM};

use crate::docalign::DocAlignConfig;
use crate::ingest::{parse_cues, SubtitleDocument};
use crate::normalize::NormalizeConfig;
use crate::pipeline::{capalign_stage, docalign_stage, normalize_stage, spellcheck_stage, CapAlignConfig};
use crate::spellcheck::SpellChecker;
use crate::{AlignmentResourcesF64, CaptionMatchF64, Result};

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("template has {available} phrases, {needed} needed")]
    TemplateTooSmall { needed: usize, available: usize },
    #[error("invalid corruption spec: {0}")]
    InvalidSpec(String),
}

/// Stage settings for benchmark trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub n_captions: usize,
    pub normalize: NormalizeConfig,
    pub docalign: DocAlignConfig,
    pub capalign: CapAlignConfig,
    pub spellcheck: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n_captions: 50,
            normalize: NormalizeConfig::default(),
            docalign: DocAlignConfig::default(),
            capalign: CapAlignConfig::default(),
            spellcheck: true,
        }
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone)]
pub struct Trial {
    pub score: AlignmentScore,
    pub matches: Vec<CaptionMatchF64>,
    pub truth: GroundTruth,
    /// Whether document alignment paired the two files.
    pub paired: bool,
}

/// Toy world plus the models built from it, reused across trials.
pub struct Bench {
    pub world: ToyWorld,
    pub spell: SpellChecker,
    pub align: AlignmentResourcesF64,
}

impl Default for Bench {
    fn default() -> Self {
        Self::new()
    }
}

fn reparse(doc: &SubtitleDocument) -> SubtitleDocument {
    let parsed = parse_cues(&doc.to_srt());
    SubtitleDocument::new(doc.doc_id.clone(), doc.title_raw.clone(), doc.language, parsed.captions)
}

impl Bench {
    pub fn new() -> Self {
        let world = ToyWorld::new();
        let spell = world.spell_checker();
        let align = world.alignment_resources();
        Bench { world, spell, align }
    }

    /// Generates a pair under `spec`, pushes it through SubRip serialization,
    /// normalization, spell correction, document alignment and caption
    /// alignment, and scores the caption matches against the planted pairs.
    pub fn run_trial(&self, spec: &CorruptionSpec, config: &BenchConfig) -> Result<Trial> {
        let template = self.world.template(config.n_captions, spec.seed).map_err(crate::Error::from)?;
        let pair = generate_pair(&template, config.n_captions, spec).map_err(crate::Error::from)?;
        let en = vec![reparse(&pair.en)];
        let ja = if pair.ja.captions.is_empty() { Vec::new() } else { vec![reparse(&pair.ja)] };
        let (en, _) = normalize_stage(&en, &config.normalize);
        let (ja, _) = normalize_stage(&ja, &config.normalize);
        let (en, _) = spellcheck_stage(&en, config.spellcheck.then_some(&self.spell));
        let (pairs, _) = docalign_stage(&en, &ja, &config.docalign);
        let (matches, _) = capalign_stage(&pairs, &en, &ja, &config.capalign, &self.align)?;
        let score = score_alignment(&matches, &pair.truth);
        Ok(Trial { score, matches, truth: pair.truth, paired: !pairs.is_empty() })
    }

    /// Mean scores over `seeds`, with `spec.seed` replaced by each seed.
    pub fn mean_score(&self, spec: &CorruptionSpec, seeds: impl IntoIterator<Item = u64>, config: &BenchConfig) -> Result<AlignmentScore> {
        let mut sum = AlignmentScore { precision: 0.0, recall: 0.0, f1: 0.0 };
        let mut n = 0usize;
        for seed in seeds {
            let s = self.run_trial(&CorruptionSpec { seed, ..*spec }, config)?.score;
            sum.precision += s.precision;
            sum.recall += s.recall;
            sum.f1 += s.f1;
            n += 1;
        }
        let n = n.max(1) as f64;
        Ok(AlignmentScore { precision: sum.precision / n, recall: sum.recall / n, f1: sum.f1 / n })
    }
}

impl From<SynthError> for crate::Error {
    fn from(e: SynthError) -> Self {
        crate::Error::Config(e.to_string())
    }
}

/// Tab-separated table, one row per spec.
pub fn bench_table(rows: &[(CorruptionSpec, AlignmentScore)]) -> String {
    let mut out =
        String::from("time_shift_s\trate_factor\tdrop_rate\tocr_noise_rate\tmisspell_rate\tseed\tprecision\trecall\tf1\n");
    for (s, sc) in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}",
            s.time_shift_s,
            s.rate_factor,
            s.drop_rate,
            s.ocr_noise_rate,
            s.misspell_rate,
            s.seed,
            sc.precision,
            sc.recall,
            sc.f1
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capalign::CaptionMatch;

    fn m(ja: usize, en: usize) -> CaptionMatchF64 {
        CaptionMatch {
            en_doc_id: "en/x.srt".into(),
            ja_doc_id: "ja/x.srt".into(),
            ja_index: ja,
            en_index: en,
            similarity: 1.0,
            ja_text: String::new(),
            en_text: String::new(),
        }
    }

    fn truth(n: usize) -> GroundTruth {
        GroundTruth {
            pairs: (1..=n)
                .map(|i| PlantedPair { ja_doc_id: "ja/x.srt".into(), ja_index: i, en_doc_id: "en/x.srt".into(), en_index: i })
                .collect(),
        }
    }

    #[test]
    fn scoring_examples() {
        let t = truth(4);
        let perfect: Vec<_> = (1..=4).map(|i| m(i, i)).collect();
        assert_eq!(score_alignment(&perfect, &t), AlignmentScore { precision: 1.0, recall: 1.0, f1: 1.0 });
        assert_eq!(score_alignment::<f64>(&[], &t), AlignmentScore { precision: 1.0, recall: 0.0, f1: 0.0 });
        let partial = vec![m(1, 1), m(2, 2), m(3, 3), m(4, 1)];
        let s = score_alignment(&partial, &t);
        assert_eq!((s.precision, s.recall), (0.75, 0.75));
        assert!((s.f1 - 0.75).abs() < 1e-12);
    }

    #[test]
    fn zero_corruption_is_identity() {
        let w = ToyWorld::new();
        let t = w.template(30, 4).unwrap();
        let p = generate_pair(&t, 30, &CorruptionSpec::none(4)).unwrap();
        assert_eq!(p.en.captions.len(), 30);
        assert_eq!(p.ja.captions.len(), 30);
        for (e, j) in p.en.captions.iter().zip(&p.ja.captions) {
            assert_eq!((e.start_ms, e.end_ms), (j.start_ms, j.end_ms));
        }
        assert_eq!(p.truth, {
            let mut g = GroundTruth::default();
            for i in 1..=30 {
                g.pairs.push(PlantedPair {
                    ja_doc_id: p.ja.doc_id.clone(),
                    ja_index: i,
                    en_doc_id: p.en.doc_id.clone(),
                    en_index: i,
                });
            }
            g
        });
    }

    #[test]
    fn cadence() {
        let w = ToyWorld::new();
        let t = w.template(100, 1).unwrap();
        let p = generate_pair(&t, 100, &CorruptionSpec::none(1)).unwrap();
        let mut prev_end = 1_000;
        for c in &p.en.captions {
            assert!((2_000..=6_000).contains(&(c.end_ms - c.start_ms)));
            assert!((500..=2_000).contains(&(c.start_ms - prev_end)));
            prev_end = c.end_ms;
        }
    }

    #[test]
    fn drop_rate_binomial() {
        let w = ToyWorld::new();
        let t = w.template(100, 2).unwrap();
        let spec = CorruptionSpec { drop_rate: 0.5, ..CorruptionSpec::none(2) };
        let p = generate_pair(&t, 100, &spec).unwrap();
        // Binomial(100, 0.5): 35..=65 covers > 99.8%.
        assert!((35..=65).contains(&p.ja.captions.len()), "{}", p.ja.captions.len());
        assert_eq!(p.truth.pairs.len(), p.ja.captions.len());
    }

    #[test]
    fn time_warp_formula() {
        let w = ToyWorld::new();
        let t = w.template(20, 3).unwrap();
        let spec = CorruptionSpec { rate_factor: 1.01, time_shift_s: 2.0, ..CorruptionSpec::none(3) };
        let p = generate_pair(&t, 20, &spec).unwrap();
        for (e, j) in p.en.captions.iter().zip(&p.ja.captions) {
            assert_eq!(j.start_ms, (e.start_ms as f64 * 1.01 + 2000.0).round() as u64);
        }
    }

    #[test]
    fn template_too_small() {
        let w = ToyWorld::new();
        let t = w.template(5, 0).unwrap();
        assert_eq!(
            generate_pair(&t, 6, &CorruptionSpec::none(0)).unwrap_err(),
            SynthError::TemplateTooSmall { needed: 6, available: 5 }
        );
        assert!(CorruptionSpec { drop_rate: 1.0, ..CorruptionSpec::none(0) }.validate().is_err());
        assert!(CorruptionSpec { rate_factor: 0.0, ..CorruptionSpec::none(0) }.validate().is_err());
    }

    #[test]
    fn zero_corruption_trial_is_perfect() {
        let b = Bench::new();
        let t = b.run_trial(&CorruptionSpec::none(11), &BenchConfig::default()).unwrap();
        assert!(t.paired);
        assert_eq!(t.score, AlignmentScore { precision: 1.0, recall: 1.0, f1: 1.0 });
    }
}
