//! Training-subset construction.
//!
//! * [`select_repetition_bounded`]: visit samples in a seeded shuffle order and
//!   keep a sample only if its summary n-grams keep every running count at or
//!   below `theta`. Rejected samples are never revisited.
//! * [`select_highest_repetition`]: the samples whose most repeated n-gram is
//!   most frequent corpus-wide.
//! * [`select_random`]: a seeded uniform sample of a given size.
//!
//! Subsets for different `theta` values are not nested in general: admitting
//! a sample at a larger threshold changes the counts every later decision sees.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Tokenizer};
use crate::ngram::{ngram_keys, CountMap};
use crate::rng::shuffled_indices;
use crate::{Error, Result};

/// Repetition threshold. `Unbounded` admits everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theta {
    Finite(u64),
    Unbounded,
}

impl Theta {
    fn allows(self, count: u64) -> bool {
        match self {
            Theta::Finite(t) => count <= t,
            Theta::Unbounded => true,
        }
    }

    pub fn as_option(self) -> Option<u64> {
        match self {
            Theta::Finite(t) => Some(t),
            Theta::Unbounded => None,
        }
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Finite(t) => write!(f, "{t}"),
            Theta::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for Theta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "all" | "unbounded" => Ok(Theta::Unbounded),
            _ => s.parse::<u64>().map(Theta::Finite).map_err(|_| Error::InvalidArgument(format!("bad theta {s:?}"))),
        }
    }
}

/// How a summary's own repeated n-grams contribute to the running counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Every occurrence counts.
    #[default]
    Occurrences,
    /// Each distinct n-gram counts once per summary.
    DistinctPerSample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionPolicy {
    RepetitionBounded,
    HighestRepetition,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetSelection {
    pub policy: SelectionPolicy,
    pub theta: Option<u64>,
    pub seed: Option<u64>,
    pub n: usize,
    /// Retained ids in visitation order.
    pub retained_ids: Vec<String>,
    /// Largest n-gram count within the retained subset.
    pub max_ngram_count: u64,
}

impl SubsetSelection {
    pub fn len(&self) -> usize {
        self.retained_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.retained_ids.is_empty()
    }
}

/// Local n-gram counts of one summary, as `(key, count)` sorted by key.
fn local_counts(summary: &str, n: usize, tokenizer: &Tokenizer, mode: CountMode) -> Vec<(u64, u64)> {
    let mut keys = ngram_keys(&tokenizer.words(summary), n);
    keys.sort_unstable();
    let mut out: Vec<(u64, u64)> = Vec::with_capacity(keys.len());
    for key in keys {
        match out.last_mut() {
            Some((k, c)) if *k == key => {
                if mode == CountMode::Occurrences {
                    *c += 1;
                }
            }
            _ => out.push((key, 1)),
        }
    }
    out
}

/// Greedy single-pass selection under a repetition threshold.
pub fn select_repetition_bounded(
    train: &Dataset,
    n: usize,
    theta: Theta,
    seed: u64,
    tokenizer: &Tokenizer,
    mode: CountMode,
) -> Result<SubsetSelection> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if theta == Theta::Finite(0) {
        return Err(Error::InvalidArgument("theta must be at least 1".into()));
    }
    let samples = train.samples();
    let mut counts = CountMap::default();
    let mut retained = Vec::new();
    let mut max_count = 0;
    for idx in shuffled_indices(samples.len(), seed) {
        let local = local_counts(&samples[idx].summary, n, tokenizer, mode);
        let fits = local.iter().all(|(key, c)| theta.allows(counts.get(key).copied().unwrap_or(0) + c));
        if !fits {
            continue;
        }
        for (key, c) in local {
            let slot = counts.entry(key).or_insert(0);
            *slot += c;
            max_count = max_count.max(*slot);
        }
        retained.push(samples[idx].id.clone());
    }
    Ok(SubsetSelection {
        policy: SelectionPolicy::RepetitionBounded,
        theta: theta.as_option(),
        seed: Some(seed),
        n,
        retained_ids: retained,
        max_ngram_count: max_count,
    })
}

/// Max n-gram count of a subset, by recount.
pub fn max_ngram_count(
    train: &Dataset,
    ids: &[String],
    n: usize,
    tokenizer: &Tokenizer,
    mode: CountMode,
) -> Result<u64> {
    let subset = train.subset(ids)?;
    let mut counts = CountMap::default();
    for sample in subset.samples() {
        for (key, c) in local_counts(&sample.summary, n, tokenizer, mode) {
            *counts.entry(key).or_insert(0) += c;
        }
    }
    Ok(counts.values().copied().max().unwrap_or(0))
}

fn check_size(train: &Dataset, size: usize) -> Result<()> {
    if size == 0 || size > train.len() {
        return Err(Error::InvalidArgument(format!("size {size} out of range 1..={}", train.len())));
    }
    Ok(())
}

/// Top `size` samples by the corpus-wide count of their most repeated n-gram.
/// Ties go to the earlier sample in file order.
pub fn select_highest_repetition(
    train: &Dataset,
    n: usize,
    size: usize,
    tokenizer: &Tokenizer,
    mode: CountMode,
) -> Result<SubsetSelection> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_size(train, size)?;
    let samples = train.samples();
    let locals: Vec<Vec<(u64, u64)>> = samples.iter().map(|s| local_counts(&s.summary, n, tokenizer, mode)).collect();
    let mut counts = CountMap::default();
    for local in &locals {
        for (key, c) in local {
            *counts.entry(*key).or_insert(0) += c;
        }
    }
    let keys: Vec<u64> = locals.iter().map(|local| local.iter().map(|(k, _)| counts[k]).max().unwrap_or(0)).collect();
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|a, b| keys[*b].cmp(&keys[*a]));
    order.truncate(size);
    let retained: Vec<String> = order.iter().map(|&i| samples[i].id.clone()).collect();
    let max_count = max_ngram_count(train, &retained, n, tokenizer, mode)?;
    Ok(SubsetSelection {
        policy: SelectionPolicy::HighestRepetition,
        theta: None,
        seed: None,
        n,
        retained_ids: retained,
        max_ngram_count: max_count,
    })
}

/// Seeded uniform sample without replacement: the first `size` entries of the
/// seeded shuffle.
pub fn select_random(
    train: &Dataset,
    size: usize,
    seed: u64,
    n: usize,
    tokenizer: &Tokenizer,
) -> Result<SubsetSelection> {
    check_size(train, size)?;
    let samples = train.samples();
    let mut order = shuffled_indices(samples.len(), seed);
    order.truncate(size);
    let retained: Vec<String> = order.iter().map(|&i| samples[i].id.clone()).collect();
    let max_count = if n == 0 { 0 } else { max_ngram_count(train, &retained, n, tokenizer, CountMode::Occurrences)? };
    Ok(SubsetSelection {
        policy: SelectionPolicy::Random,
        theta: None,
        seed: Some(seed),
        n,
        retained_ids: retained,
        max_ngram_count: max_count,
    })
}
