//! Lexical-overlap analysis for summarization corpora.
//!
//! This crate is `no_std` (it needs only `alloc`) and holds every algorithm of
//! the toolkit: tokenization and sentence segmentation, n-gram tables and
//! percent-overlap scoring, test-set partitioning, repetition-bounded
//! training-subset selection, ROUGE and entity metrics, the non-neural
//! reference summarizers, and the per-partition evaluation harness.
//!
//! File formats, the binary table index and the `lexdiv` command line live in
//! the companion `lexdiv` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod baselines;
pub mod corpus;
pub mod curate;
mod error;
pub mod harness;
pub mod hash;
pub mod metrics;
pub mod ngram;
pub mod partition;
pub mod rng;

pub use error::{Error, Result};

pub use baselines::{Provenance, SummarizerOutput};
pub use corpus::{Dataset, Sample, SentenceSplitter, Split, TokenSeq, Tokenizer};
pub use curate::{CountMode, SelectionPolicy, SubsetSelection, Theta};
pub use harness::{EvaluationReport, InterventionCase, Outcome};
pub use metrics::{EntityMention, EntityMetricRecord, RougeScore};
pub use ngram::{NGramTable, OverlapMode, OverlapScore};
pub use partition::{Bin, PartitionSet};
