//! Streaming curation toolkit for document-delimited Czech–English parallel
//! corpora.
//!
//! The crate covers the full curation path: ingesting raw aligned text,
//! segmenting it into documents, scoring pairs with a character n-gram
//! language classifier and dual conditional cross-entropy, filtering at
//! document and sentence granularity, deduplicating documents, and emitting
//! the six-column tab-separated corpus format bit-exactly.

pub mod config;
pub mod docfilter;
pub mod langid;
pub mod model;
pub mod pipeline;
pub mod sentfilter;
pub mod stats;
pub mod text;
pub mod tsv;
pub mod verdict;
pub mod xent;

pub use model::{CrossEntropyPair, DocKey, Document, LangDistribution, PairId, ScoreTriple, SentencePair};
