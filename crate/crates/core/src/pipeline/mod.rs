//! The full chain from two subtitle directories to corpus files, with a
//! checkpoint after every stage so interrupted runs can resume.

mod audit;
pub mod checkpoint;
mod config;
mod stats;

use std::collections::HashMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use audit::{audit, audit_strict, AuditReport};
pub use config::{CapAlignConfig, PipelineConfig, ResourceConfig, SpellcheckConfig};
pub use stats::{
    japanese_tokens, stats_report, CapAlignCounts, CorpusStats, DocAlignCounts, IngestCounts, NormalizeCounts,
    SideStats, SpellcheckCounts, StageStats,
};

use checkpoint::{read_docs, read_json, write_docs, write_json, CheckpointLayout};
use crate::capalign::{
    align_captions, load_word_list, AlignmentResources, EmbeddingTable, EnglishExtractor, JapaneseExtractor, Lexicon,
};
use crate::docalign::{align_documents_counted, DocAlignConfig, DocumentPair};
use crate::filter::{build_corpus, FilterConfig, FilterCounts};
use crate::ingest::{load_directory, Language, SubtitleDocument};
use crate::normalize::{normalize_document, NormalizationReport, NormalizeConfig};
use crate::spellcheck::{Dictionary, ErrorModel, LanguageModel, SpellChecker};
use crate::{AlignmentResourcesF64, CaptionMatchF64, Error, ParallelCorpusF64, Result};

/// Models and tables loaded from the configured resource files.
pub struct PipelineResources {
    pub spell: Option<SpellChecker>,
    pub align: AlignmentResourcesF64,
}

fn required<'a>(p: &'a Option<std::path::PathBuf>, name: &str) -> Result<&'a Path> {
    p.as_deref().ok_or_else(|| Error::Config(format!("resources.{name} is required")))
}

/// Loads every resource the configuration names. Any failure aborts.
pub fn load_resources(config: &PipelineConfig) -> Result<PipelineResources> {
    let r = &config.resources;
    let spell = if config.spellcheck.enabled {
        let em = ErrorModel::load(required(&r.misspellings, "misspellings")?)?;
        let lm = LanguageModel::load(required(&r.unigrams, "unigrams")?, required(&r.bigrams, "bigrams")?)?;
        let dict = Dictionary::load(required(&r.dictionary, "dictionary")?)?;
        let mut sc = SpellChecker::new(em, lm, dict);
        sc.max_cost = config.spellcheck.max_cost;
        Some(sc)
    } else {
        None
    };
    Ok(PipelineResources { spell, align: load_alignment_resources(config)? })
}

/// Lexicon, embeddings and extractors for caption alignment.
pub fn load_alignment_resources(config: &PipelineConfig) -> Result<AlignmentResourcesF64> {
    let r = &config.resources;
    let lexicon = Lexicon::load(required(&r.lexicon, "lexicon")?)?;
    let embeddings: EmbeddingTable<f64> = EmbeddingTable::load(required(&r.embeddings, "embeddings")?)?;
    let english = match &r.en_stopwords {
        Some(p) => EnglishExtractor::with_stopwords(load_word_list(p)?),
        None => EnglishExtractor::default(),
    };
    let japanese = match &r.ja_particles {
        Some(p) => JapaneseExtractor::with_particles(&lexicon, load_word_list(p)?),
        None => JapaneseExtractor::new(&lexicon),
    };
    Ok(AlignmentResources::with_extractors(lexicon, embeddings, Box::new(english), Box::new(japanese)))
}

/// Loads a directory; unreadable or illegitimate files are counted and skipped.
pub fn ingest_stage(dir: &Path, language: Language) -> Result<(Vec<SubtitleDocument>, IngestCounts)> {
    let load = load_directory(dir, language)?;
    for f in &load.failures {
        log::warn!("skipping {f}");
    }
    let counts = IngestCounts {
        files_seen: load.files_seen,
        documents: load.documents.len(),
        rejected: load.failures.len(),
        captions: load.documents.iter().map(|d| d.captions.len()).sum(),
    };
    Ok((load.documents, counts))
}

/// Normalizes every document; documents left with too few captions are
/// counted and dropped.
pub fn normalize_stage(docs: &[SubtitleDocument], config: &NormalizeConfig) -> (Vec<SubtitleDocument>, NormalizeCounts) {
    let results: Vec<_> = docs.par_iter().map(|d| normalize_document(d, config)).collect();
    let mut counts = NormalizeCounts {
        documents_in: docs.len(),
        captions_in: docs.iter().map(|d| d.captions.len()).sum(),
        ..Default::default()
    };
    let mut report = NormalizationReport::default();
    let mut out = Vec::with_capacity(docs.len());
    for r in results {
        match r {
            Ok((d, rep)) => {
                report.merge(&rep);
                out.push(d);
            }
            Err(e) => log::warn!("{e}"),
        }
    }
    counts.documents_out = out.len();
    counts.captions_out = out.iter().map(|d| d.captions.len()).sum();
    counts.chars_removed = report.chars_removed;
    counts.rules_fired = report.rules_fired;
    (out, counts)
}

/// Spell-corrects English documents; without a checker documents pass through.
pub fn spellcheck_stage(
    docs: &[SubtitleDocument],
    spell: Option<&SpellChecker>,
) -> (Vec<SubtitleDocument>, SpellcheckCounts) {
    let Some(sc) = spell else {
        return (docs.to_vec(), SpellcheckCounts::default());
    };
    let results: Vec<_> = docs.par_iter().map(|d| sc.correct_document(d)).collect();
    let mut counts = SpellcheckCounts { enabled: true, ..Default::default() };
    let mut out = Vec::with_capacity(docs.len());
    for (d, s) in results {
        counts.tokens_checked += s.checked;
        counts.corrections += s.corrected;
        out.push(d);
    }
    (out, counts)
}

pub fn docalign_stage(
    en: &[SubtitleDocument],
    ja: &[SubtitleDocument],
    config: &DocAlignConfig,
) -> (Vec<DocumentPair>, DocAlignCounts) {
    let (pairs, candidates) = align_documents_counted(en, ja, config);
    let counts =
        DocAlignCounts { en_documents: en.len(), ja_documents: ja.len(), title_candidates: candidates, pairs: pairs.len() };
    (pairs, counts)
}

fn lookup<'a>(map: &HashMap<&str, &'a SubtitleDocument>, id: &str) -> Result<&'a SubtitleDocument> {
    map.get(id).copied().ok_or_else(|| Error::Config(format!("document pair refers to unknown document `{id}`")))
}

/// Caption matches for every document pair, in pair order.
pub fn capalign_stage(
    pairs: &[DocumentPair],
    en: &[SubtitleDocument],
    ja: &[SubtitleDocument],
    config: &CapAlignConfig,
    resources: &AlignmentResourcesF64,
) -> Result<(Vec<CaptionMatchF64>, CapAlignCounts)> {
    let en_by_id: HashMap<&str, &SubtitleDocument> = en.iter().map(|d| (d.doc_id.as_str(), d)).collect();
    let ja_by_id: HashMap<&str, &SubtitleDocument> = ja.iter().map(|d| (d.doc_id.as_str(), d)).collect();
    let mut resolved = Vec::with_capacity(pairs.len());
    for p in pairs {
        resolved.push((p, lookup(&en_by_id, &p.en_doc_id)?, lookup(&ja_by_id, &p.ja_doc_id)?));
    }
    let per_pair: Vec<Vec<CaptionMatchF64>> = resolved
        .par_iter()
        .map(|(p, e, j)| align_captions(p, e, j, config.window_s, resources))
        .collect();
    let counts = CapAlignCounts {
        pairs: pairs.len(),
        ja_captions: resolved.iter().map(|(_, _, j)| j.captions.len()).sum(),
        matches: per_pair.iter().map(Vec::len).sum(),
    };
    Ok((per_pair.into_iter().flatten().collect(), counts))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Reuse completed stage checkpoints when the configuration is unchanged.
    pub resume: bool,
}

pub struct PipelineOutput {
    pub corpus: ParallelCorpusF64,
    pub stats: StageStats,
}

#[derive(Debug, Serialize, Deserialize)]
struct PerLanguage<T> {
    en: T,
    ja: T,
}

/// Cutoff record written next to the corpus for later audits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterRecord {
    pub threshold: f64,
    pub config: FilterConfig,
    pub counts: FilterCounts,
}

pub const FILTER_RECORD: &str = "filter.json";

/// Runs every stage in order, writing checkpoints, the corpus files,
/// `stats.json` and `stats.txt` under `config.output_dir`.
pub fn run_pipeline(config: &PipelineConfig, options: &RunOptions) -> Result<PipelineOutput> {
    config.validate(true)?;
    if config.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", config.workers)))?;
        pool.install(|| run_stages(config, options))
    } else {
        run_stages(config, options)
    }
}

/// Tracks which checkpoints may be reused: once a stage recomputes, every
/// later stage does too.
struct Resume<'a> {
    layout: &'a CheckpointLayout,
    reuse: bool,
}

impl Resume<'_> {
    fn stage<T>(&mut self, name: &str, load: impl FnOnce() -> Result<T>, compute: impl FnOnce() -> Result<T>) -> Result<T> {
        if self.reuse && self.layout.stats(name).is_file() {
            log::info!("resuming {name} from checkpoint");
            return load();
        }
        self.reuse = false;
        log::info!("running {name}");
        compute()
    }
}

fn run_stages(config: &PipelineConfig, options: &RunOptions) -> Result<PipelineOutput> {
    let layout = CheckpointLayout::new(&config.output_dir);
    let snapshot = config.to_toml();
    let same_config = std::fs::read_to_string(layout.config()).is_ok_and(|s| s == snapshot);
    if !(options.resume && same_config) && layout.dir.exists() {
        std::fs::remove_dir_all(&layout.dir).map_err(|e| Error::io(&layout.dir, e))?;
    }
    std::fs::create_dir_all(&layout.dir).map_err(|e| Error::io(&layout.dir, e))?;
    std::fs::write(layout.config(), &snapshot).map_err(|e| Error::io(layout.config(), e))?;

    let mut resume = Resume { layout: &layout, reuse: options.resume && same_config };
    let mut resources: Option<PipelineResources> = None;
    let mut stats = StageStats::default();

    let (en, ja, counts) = resume.stage(
        "ingest",
        || {
            let c: PerLanguage<IngestCounts> = read_json(&layout.stats("ingest"))?;
            Ok((read_docs(&layout.docs("ingest", "en"))?, read_docs(&layout.docs("ingest", "ja"))?, c))
        },
        || {
            let (en, en_c) = ingest_stage(&config.en_dir, Language::En)?;
            let (ja, ja_c) = ingest_stage(&config.ja_dir, Language::Ja)?;
            write_docs(&layout.docs("ingest", "en"), &en)?;
            write_docs(&layout.docs("ingest", "ja"), &ja)?;
            let c = PerLanguage { en: en_c, ja: ja_c };
            write_json(&layout.stats("ingest"), &c)?;
            Ok((en, ja, c))
        },
    )?;
    (stats.ingest_en, stats.ingest_ja) = (counts.en, counts.ja);

    let (en, ja, counts) = resume.stage(
        "normalize",
        || {
            let c: PerLanguage<NormalizeCounts> = read_json(&layout.stats("normalize"))?;
            Ok((read_docs(&layout.docs("normalize", "en"))?, read_docs(&layout.docs("normalize", "ja"))?, c))
        },
        || {
            let (en, en_c) = normalize_stage(&en, &config.normalize);
            let (ja, ja_c) = normalize_stage(&ja, &config.normalize);
            write_docs(&layout.docs("normalize", "en"), &en)?;
            write_docs(&layout.docs("normalize", "ja"), &ja)?;
            let c = PerLanguage { en: en_c, ja: ja_c };
            write_json(&layout.stats("normalize"), &c)?;
            Ok((en, ja, c))
        },
    )?;
    (stats.normalize_en, stats.normalize_ja) = (counts.en, counts.ja);

    let (en, counts) = resume.stage(
        "spellcheck",
        || Ok((read_docs(&layout.docs("spellcheck", "en"))?, read_json(&layout.stats("spellcheck"))?)),
        || {
            let res = resources.insert(load_resources(config)?);
            let (en, c) = spellcheck_stage(&en, res.spell.as_ref());
            write_docs(&layout.docs("spellcheck", "en"), &en)?;
            write_json(&layout.stats("spellcheck"), &c)?;
            Ok((en, c))
        },
    )?;
    stats.spellcheck = counts;

    let (pairs, counts) = resume.stage(
        "docalign",
        || Ok((checkpoint::read_pairs(&layout.table("docalign"))?, read_json(&layout.stats("docalign"))?)),
        || {
            let (pairs, c) = docalign_stage(&en, &ja, &config.docalign);
            checkpoint::write_pairs(&layout.table("docalign"), &pairs)?;
            write_json(&layout.stats("docalign"), &c)?;
            Ok((pairs, c))
        },
    )?;
    stats.docalign = counts;

    let (matches, counts) = resume.stage(
        "capalign",
        || Ok((checkpoint::read_matches(&layout.table("capalign"))?, read_json(&layout.stats("capalign"))?)),
        || {
            let res = match resources.take() {
                Some(r) => r,
                None => load_resources(config)?,
            };
            let (m, c) = capalign_stage(&pairs, &en, &ja, &config.capalign, &res.align)?;
            checkpoint::write_matches(&layout.table("capalign"), &m)?;
            write_json(&layout.stats("capalign"), &c)?;
            Ok((m, c))
        },
    )?;
    stats.capalign = counts;

    let filter = config.effective_filter();
    let (corpus, counts) = build_corpus(&matches, &filter)?;
    corpus.write(&config.output_dir)?;
    let record = FilterRecord { threshold: corpus.threshold, config: filter, counts };
    write_json(&layout.dir.join(FILTER_RECORD), &record)?;
    stats.filter = counts;
    stats.corpus = CorpusStats::from_corpus(&corpus);

    write_json(&config.output_dir.join("stats.json"), &stats)?;
    let report_path = config.output_dir.join("stats.txt");
    std::fs::write(&report_path, stats_report(&stats)).map_err(|e| Error::io(&report_path, e))?;
    Ok(PipelineOutput { corpus, stats })
}

/// Ingests, normalizes and (for English, given a checker) spell-corrects
/// one directory without checkpoints.
pub fn prepare_directory(
    dir: &Path,
    language: Language,
    normalize: &NormalizeConfig,
    spell: Option<&SpellChecker>,
) -> Result<(Vec<SubtitleDocument>, StageStats)> {
    let mut stats = StageStats::default();
    let (docs, ingest) = ingest_stage(dir, language)?;
    let (docs, norm) = normalize_stage(&docs, normalize);
    let docs = match (language, spell) {
        (Language::En, Some(sc)) => {
            let (d, c) = spellcheck_stage(&docs, Some(sc));
            stats.spellcheck = c;
            d
        }
        _ => docs,
    };
    match language {
        Language::En => (stats.ingest_en, stats.normalize_en) = (ingest, norm),
        Language::Ja => (stats.ingest_ja, stats.normalize_ja) = (ingest, norm),
    }
    Ok((docs, stats))
}
