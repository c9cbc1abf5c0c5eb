use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("empty training corpus")]
    EmptyTrainingCorpus,

    #[error("expected a {expected} split, got {actual}")]
    WrongSplit { expected: &'static str, actual: &'static str },

    #[error("n-gram hash collision between {first:?} and {second:?}")]
    HashCollision { first: Vec<String>, second: Vec<String> },

    #[error("no precomputed entities for id {id:?} (field {field})")]
    MissingAnnotations { id: String, field: &'static str },

    #[error("document too short for pseudo-summarization")]
    DocumentTooShort,

    #[error("output id {0:?} is not in the test set")]
    UnknownOutputId(String),

    #[error("duplicate output id {0:?}")]
    DuplicateOutputId(String),

    #[error("missing outputs for {} test samples: {}", .0.len(), .0.join(", "))]
    MissingOutputs(Vec<String>),

    #[error("partition does not cover the test set: {0}")]
    PartitionMismatch(String),

    #[error("bin structure mismatch: {0}")]
    BinMismatch(String),

    #[error("entity pool has {pool} candidates, fewer than the {requested} requested")]
    EntityPoolTooSmall { pool: usize, requested: usize },
}
