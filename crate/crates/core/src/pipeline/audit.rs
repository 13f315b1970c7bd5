//! Post-hoc check of an emitted corpus against the checkpoints it came from.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::checkpoint::{read_docs, read_json, read_matches, read_pairs, CheckpointLayout};
use super::{FilterRecord, PipelineConfig, FILTER_RECORD};
use crate::docalign::{extract_title_meta, metadata_match, temporal_distance};
use crate::filter::{language_filter, read_split, CorpusPair, Split};
use crate::ingest::SubtitleDocument;
use crate::{CaptionMatchF64, Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub document_pairs: usize,
    pub matches: usize,
    pub corpus_pairs: usize,
    pub threshold: f64,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Recomputes, from the checkpoints under `output_dir`, every document
/// pair's title similarity and temporal distance, the similarity cutoff,
/// and the language filter, and checks that each emitted corpus pair traces
/// back to a caption match inside a retained document pair.
pub fn audit(output_dir: &Path) -> Result<AuditReport> {
    let layout = CheckpointLayout::new(output_dir);
    let config = PipelineConfig::load(&layout.config())?;
    let en = read_docs(&layout.docs("spellcheck", "en"))?;
    let ja = read_docs(&layout.docs("normalize", "ja"))?;
    let pairs = read_pairs(&layout.table("docalign"))?;
    let matches: Vec<CaptionMatchF64> = read_matches(&layout.table("capalign"))?;
    let record: FilterRecord = read_json(&layout.dir.join(FILTER_RECORD))?;

    let mut violations = Vec::new();
    let by_id = |docs: &[SubtitleDocument]| -> HashMap<String, usize> {
        docs.iter().enumerate().map(|(i, d)| (d.doc_id.clone(), i)).collect()
    };
    let (en_ids, ja_ids) = (by_id(&en), by_id(&ja));
    let dc = &config.docalign;

    let mut retained: HashSet<(&str, &str)> = HashSet::new();
    for p in &pairs {
        let tag = format!("pair {} / {}", p.en_doc_id, p.ja_doc_id);
        let (Some(&ei), Some(&ji)) = (en_ids.get(&p.en_doc_id), ja_ids.get(&p.ja_doc_id)) else {
            violations.push(format!("{tag}: document missing from checkpoints"));
            continue;
        };
        let (e, j) = (&en[ei], &ja[ji]);
        match metadata_match(&extract_title_meta(&e.title_raw), &extract_title_meta(&j.title_raw), dc.title_threshold) {
            None => violations.push(format!("{tag}: fails the title test (> {})", dc.title_threshold)),
            Some(sim) if sim != p.title_similarity => {
                violations.push(format!("{tag}: title similarity {sim} recorded as {}", p.title_similarity))
            }
            Some(_) => {}
        }
        if !(p.title_similarity > dc.title_threshold) {
            violations.push(format!("{tag}: title similarity {} not above {}", p.title_similarity, dc.title_threshold));
        }
        let (distance, shift) = temporal_distance(e, j, dc.shift_range_s);
        if distance > dc.hamming_threshold {
            violations.push(format!("{tag}: temporal distance {distance} above {}", dc.hamming_threshold));
        }
        if (distance, shift) != (p.temporal_distance, p.best_shift_s) {
            violations.push(format!(
                "{tag}: recomputed distance/shift {distance}/{shift}, recorded {}/{}",
                p.temporal_distance, p.best_shift_s
            ));
        }
        retained.insert((&p.en_doc_id, &p.ja_doc_id));
    }

    let filter = config.effective_filter();
    let scores: Vec<f64> = matches.iter().map(|m| m.similarity).collect();
    let threshold = match filter.threshold(&scores) {
        Ok(t) => t,
        Err(e) => {
            violations.push(format!("similarity cutoff cannot be recomputed: {e}"));
            record.threshold
        }
    };
    if threshold != record.threshold {
        violations.push(format!("similarity cutoff recomputed as {threshold}, recorded {}", record.threshold));
    }

    let mut sources: HashMap<(&str, &str), Vec<&CaptionMatchF64>> = HashMap::new();
    for m in &matches {
        if !retained.contains(&(m.en_doc_id.as_str(), m.ja_doc_id.as_str())) {
            violations.push(format!(
                "match {}#{} / {}#{}: outside every retained document pair",
                m.en_doc_id, m.en_index, m.ja_doc_id, m.ja_index
            ));
        }
        sources.entry((&m.en_text, &m.ja_text)).or_default().push(m);
    }

    let mut corpus: Vec<CorpusPair<f64>> = Vec::new();
    for split in Split::ALL {
        corpus.extend(read_split::<f64>(output_dir, split)?);
    }
    for (i, p) in corpus.iter().enumerate() {
        let tag = format!("corpus pair {} ({:?} / {:?})", i + 1, p.en_text, p.ja_text);
        if p.similarity < threshold {
            violations.push(format!("{tag}: similarity {} below cutoff {threshold}", p.similarity));
        }
        if !language_filter(&p.en_text, &p.ja_text) {
            violations.push(format!("{tag}: fails the language filter"));
        }
        let traced = sources
            .get(&(p.en_text.as_str(), p.ja_text.as_str()))
            .is_some_and(|ms| ms.iter().any(|m| m.similarity == p.similarity));
        if !traced {
            violations.push(format!("{tag}: no caption match with these texts and score"));
        }
    }

    Ok(AuditReport {
        document_pairs: pairs.len(),
        matches: matches.len(),
        corpus_pairs: corpus.len(),
        threshold,
        violations,
    })
}

/// [`audit`], turning violations into an error.
pub fn audit_strict(output_dir: &Path) -> Result<AuditReport> {
    let report = audit(output_dir)?;
    if report.passed() {
        Ok(report)
    } else {
        Err(Error::AuditFailed(report.violations.len()))
    }
}
