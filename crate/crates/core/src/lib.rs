//! Mine a sentence-aligned Japanese–English parallel corpus out of raw,
//! noisy subtitle files.
//!
//! The stages run in this order and each one lives in its own module:
//!
//! 1. [`ingest`]: encoding detection, SubRip parsing, document model.
//! 2. [`normalize`]: caption text cleanup.
//! 3. [`spellcheck`]: noisy-channel correction of English captions.
//! 4. [`docalign`]: pair documents by title metadata and caption timing.
//! 5. [`capalign`]: pair captions inside each document pair by content.
//! 6. [`filter`]: similarity cutoff, dedup, language filter, splits.
//!
//! [`pipeline`] chains them with checkpoints; [`synthbench`] plants known
//! alignments in synthetic documents and scores the chain against them.
//!
//! The numeric parts of caption alignment and filtering are generic over
//! [`Scalar`] (`f32` or `f64`); the aliases below fix the precision the
//! pipeline itself runs at.

pub mod capalign;
pub mod docalign;
pub mod error;
pub mod filter;
pub mod ingest;
pub mod normalize;
#[cfg(any(test, feature = "oracle"))]
#[doc(hidden)]
pub mod oracle;
pub mod pipeline;
pub mod scalar;
pub mod spellcheck;
pub mod synthbench;
pub mod text;

pub use error::{Error, Result};
pub use ingest::{Caption, Language, SubtitleDocument};
pub use scalar::Scalar;

/// Embedding table at single precision, the usual storage for GloVe-style files.
pub type EmbeddingTableF32 = capalign::EmbeddingTable<f32>;
/// Embedding table at double precision; what the pipeline uses.
pub type EmbeddingTableF64 = capalign::EmbeddingTable<f64>;
pub type CaptionMatchF32 = capalign::CaptionMatch<f32>;
pub type CaptionMatchF64 = capalign::CaptionMatch<f64>;
pub type ParallelCorpusF64 = filter::ParallelCorpus<f64>;
pub type AlignmentResourcesF64 = capalign::AlignmentResources<f64>;
