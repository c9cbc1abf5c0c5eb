//! Disjoint percent-overlap bins over a scored test set.
//!
//! Bins are lower-inclusive and upper-exclusive; the last bin is open-ended
//! and also holds samples scoring exactly 100. The first bin is the most
//! novel subset and the last bin the most similar one.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::ngram::OverlapScore;
use crate::{Error, Result};

/// Width unit of adaptive bins, in percentage points.
pub const WIDTH_STEP: u32 = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub lower: f64,
    /// `None` for the final open-ended bin.
    pub upper: Option<f64>,
    pub sample_ids: Vec<String>,
}

impl Bin {
    pub fn contains(&self, percent: f64) -> bool {
        percent >= self.lower && self.upper.is_none_or(|u| percent < u)
    }

    pub fn len(&self) -> usize {
        self.sample_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample_ids.is_empty()
    }

    /// Human-readable range such as `5-10` or `>70`.
    pub fn label(&self) -> String {
        match self.upper {
            Some(u) => format!("{}-{}", fmt_bound(self.lower), fmt_bound(u)),
            None => format!(">{}", fmt_bound(self.lower)),
        }
    }
}

pub(crate) fn fmt_bound(v: f64) -> String {
    if libm::trunc(v) == v && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSet {
    pub bins: Vec<Bin>,
}

impl PartitionSet {
    /// Most novel subset.
    pub fn t_nov(&self) -> &Bin {
        &self.bins[0]
    }

    /// Most similar subset.
    pub fn t_sim(&self) -> &Bin {
        &self.bins[self.bins.len() - 1]
    }

    pub fn total(&self) -> usize {
        self.bins.iter().map(Bin::len).sum()
    }

    /// Index of the bin a score falls in.
    pub fn bin_of(&self, percent: f64) -> Option<usize> {
        self.bins.iter().position(|b| b.contains(percent))
    }

    /// Bin index per sample id.
    pub fn assignment(&self) -> alloc::collections::BTreeMap<&str, usize> {
        let mut out = alloc::collections::BTreeMap::new();
        for (i, bin) in self.bins.iter().enumerate() {
            for id in &bin.sample_ids {
                out.insert(id.as_str(), i);
            }
        }
        out
    }
}

/// Sample ids sorted by ascending score; ties keep input order.
fn ranked(scores: &[OverlapScore]) -> Vec<&OverlapScore> {
    let mut ranked: Vec<&OverlapScore> = scores.iter().collect();
    ranked.sort_by(|a, b| a.percent.total_cmp(&b.percent));
    ranked
}

/// Greedy adaptive binning.
///
/// Each bin starts at the previous upper bound with width 5 and widens in
/// steps of 5 until it holds at least `min_samples` samples. A bin whose
/// upper bound would reach 100 becomes the final open-ended bin; if that final
/// bin holds fewer than `min_samples` it is merged into its predecessor.
pub fn partition(scores: &[OverlapScore], min_samples: usize) -> Result<PartitionSet> {
    if scores.is_empty() {
        return Err(Error::InvalidArgument("no scores to partition".into()));
    }
    if min_samples == 0 {
        return Err(Error::InvalidArgument("min_samples must be at least 1".into()));
    }
    if let Some(bad) = scores.iter().find(|s| !(0.0..=100.0).contains(&s.percent)) {
        return Err(Error::InvalidArgument(format!("score {} of {:?} outside [0,100]", bad.percent, bad.sample_id)));
    }
    let ranked = ranked(scores);
    let mut bins: Vec<Bin> = Vec::new();
    let mut lower: u32 = 0;
    let mut cursor = 0;
    loop {
        let mut upper = lower + WIDTH_STEP;
        let mut end = cursor;
        loop {
            if upper >= 100 {
                break;
            }
            while end < ranked.len() && ranked[end].percent < f64::from(upper) {
                end += 1;
            }
            if end - cursor >= min_samples {
                break;
            }
            upper += WIDTH_STEP;
        }
        if upper >= 100 {
            let rest: Vec<String> = ranked[cursor..].iter().map(|s| s.sample_id.clone()).collect();
            match bins.last_mut() {
                Some(prev) if rest.len() < min_samples => {
                    prev.upper = None;
                    prev.sample_ids.extend(rest);
                }
                _ => bins.push(Bin { lower: f64::from(lower), upper: None, sample_ids: rest }),
            }
            break;
        }
        bins.push(Bin {
            lower: f64::from(lower),
            upper: Some(f64::from(upper)),
            sample_ids: ranked[cursor..end].iter().map(|s| s.sample_id.clone()).collect(),
        });
        cursor = end;
        lower = upper;
    }
    Ok(PartitionSet { bins })
}

/// Bins with explicit edges: `[b0,b1), [b1,b2), ..., [bk, open)`.
pub fn partition_fixed(scores: &[OverlapScore], boundaries: &[f64]) -> Result<PartitionSet> {
    if boundaries.is_empty() || boundaries[0] != 0.0 {
        return Err(Error::InvalidArgument("boundaries must start at 0".into()));
    }
    if boundaries.windows(2).any(|w| w[0] >= w[1]) || boundaries.iter().any(|b| !b.is_finite()) {
        return Err(Error::InvalidArgument("boundaries must be strictly increasing".into()));
    }
    let mut bins: Vec<Bin> = boundaries
        .iter()
        .enumerate()
        .map(|(i, &lower)| Bin { lower, upper: boundaries.get(i + 1).copied(), sample_ids: Vec::new() })
        .collect();
    for score in ranked(scores) {
        let idx = bins
            .iter()
            .position(|b| b.contains(score.percent))
            .ok_or_else(|| Error::InvalidArgument(format!("score {} below 0", score.percent)))?;
        bins[idx].sample_ids.push(score.sample_id.clone());
    }
    Ok(PartitionSet { bins })
}

/// Default minimum bin size: `total / (desired_bins * 2)`, at least 1.
pub fn default_min_samples(total: usize, desired_bins: usize) -> usize {
    (total / (desired_bins.max(1) * 2)).max(1)
}
