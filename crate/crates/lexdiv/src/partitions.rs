//! Partition reports: a JSON summary plus one id file per bin.

use std::path::{Path, PathBuf};

use lexdiv_core::{Bin, PartitionSet};
use serde::{Deserialize, Serialize};

use crate::io::{read_ids, read_json, write_ids, write_json, IoError, Result};

pub const REPORT_FILE: &str = "partitions.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinEntry {
    pub label: String,
    pub lower: f64,
    pub upper: Option<f64>,
    pub count: usize,
    /// Relative to the report's directory.
    pub ids_file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub total: usize,
    #[serde(default)]
    pub min_samples: Option<usize>,
    pub bins: Vec<BinEntry>,
}

/// Write `partitions.json` and `bin_NN.ids` into `dir`; returns the report.
pub fn write_partitions(dir: &Path, set: &PartitionSet, min_samples: Option<usize>) -> Result<PartitionReport> {
    let mut bins = Vec::with_capacity(set.bins.len());
    for (i, bin) in set.bins.iter().enumerate() {
        let ids_file = format!("bin_{i:02}.ids");
        write_ids(&dir.join(&ids_file), &bin.sample_ids)?;
        bins.push(BinEntry { label: bin.label(), lower: bin.lower, upper: bin.upper, count: bin.len(), ids_file });
    }
    let report = PartitionReport { total: set.total(), min_samples, bins };
    write_json(&dir.join(REPORT_FILE), &report)?;
    Ok(report)
}

/// Accepts either the report file or its directory.
pub fn read_partitions(path: &Path) -> Result<PartitionSet> {
    let file: PathBuf = if path.is_dir() { path.join(REPORT_FILE) } else { path.to_path_buf() };
    let report: PartitionReport = read_json(&file)?;
    let dir = file.parent().unwrap_or(Path::new("."));
    let mut bins = Vec::with_capacity(report.bins.len());
    for (i, entry) in report.bins.into_iter().enumerate() {
        let sample_ids = read_ids(&dir.join(&entry.ids_file))?;
        if sample_ids.len() != entry.count {
            return Err(IoError::Validation {
                path: file.clone(),
                line: 0,
                message: format!("bin {i}: {} ids listed, count says {}", sample_ids.len(), entry.count),
            });
        }
        bins.push(Bin { lower: entry.lower, upper: entry.upper, sample_ids });
    }
    Ok(PartitionSet { bins })
}
