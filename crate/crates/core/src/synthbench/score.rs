use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{GroundTruth, PlantedPair};
use crate::capalign::CaptionMatch;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignmentScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision, recall and F1 of predicted caption matches against the
/// planted pairs. No predictions means precision 1; no planted pairs means
/// recall 1.
pub fn score_alignment<S>(predicted: &[CaptionMatch<S>], truth: &GroundTruth) -> AlignmentScore {
    let predicted: HashSet<PlantedPair> = predicted
        .iter()
        .map(|m| PlantedPair {
            ja_doc_id: m.ja_doc_id.clone(),
            ja_index: m.ja_index,
            en_doc_id: m.en_doc_id.clone(),
            en_index: m.en_index,
        })
        .collect();
    let truth: HashSet<&PlantedPair> = truth.pairs.iter().collect();
    let hits = predicted.iter().filter(|p| truth.contains(p)).count();
    let precision = if predicted.is_empty() { 1.0 } else { hits as f64 / predicted.len() as f64 };
    let recall = if truth.is_empty() { 1.0 } else { hits as f64 / truth.len() as f64 };
    let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
    AlignmentScore { precision, recall, f1 }
}
