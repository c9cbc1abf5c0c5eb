//! ROUGE-N and the entity metric family.

mod entity;
mod rouge;

pub use entity::{
    entity_metrics, entity_present, token_set, Denominator, EntityExtractor, EntityMention, EntityMetricRecord,
    HeuristicExtractor, PrecomputedEntities, StopWords, TextField,
};
pub use rouge::{rouge_n, rouge_texts, RougeScore};
