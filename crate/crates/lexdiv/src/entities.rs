//! Sidecar entity annotations: JSON-lines `{id, field, mentions}`.

use std::path::Path;

use lexdiv_core::metrics::{PrecomputedEntities, StopWords, TextField};
use serde::{Deserialize, Serialize};

use crate::io::{read_jsonl, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidecarRecord {
    pub id: String,
    pub field: TextField,
    pub mentions: Vec<String>,
}

/// Later records for the same `(id, field)` replace earlier ones.
pub fn load_sidecar(path: &Path, stop: StopWords) -> Result<PrecomputedEntities> {
    let mut out = PrecomputedEntities::new(stop);
    for r in read_jsonl::<SidecarRecord>(path)? {
        out.insert(r.id, r.field, r.mentions);
    }
    Ok(out)
}
