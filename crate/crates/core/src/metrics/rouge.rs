use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Tokenizer;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub n: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    fn from_counts(n: usize, matched: usize, cand_total: usize, ref_total: usize) -> Self {
        let precision = if cand_total > 0 { matched as f64 / cand_total as f64 } else { 0.0 };
        let recall = if ref_total > 0 { matched as f64 / ref_total as f64 } else { 0.0 };
        let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        Self { n, precision, recall, f1 }
    }
}

fn grams<S: AsRef<str>>(tokens: &[S], n: usize) -> BTreeMap<Vec<&str>, usize> {
    let mut out = BTreeMap::new();
    for window in tokens.windows(n) {
        *out.entry(window.iter().map(AsRef::as_ref).collect()).or_insert(0) += 1;
    }
    out
}

/// Clipped n-gram matching: each distinct n-gram matches
/// `min(candidate count, reference count)` times. No stemming.
pub fn rouge_n<A: AsRef<str>, B: AsRef<str>>(candidate: &[A], reference: &[B], n: usize) -> RougeScore {
    if n == 0 {
        return RougeScore { n, precision: 0.0, recall: 0.0, f1: 0.0 };
    }
    let cand = grams(candidate, n);
    let refs = grams(reference, n);
    let matched = cand.iter().map(|(g, c)| refs.get(g).map_or(0, |r| (*c).min(*r))).sum();
    RougeScore::from_counts(n, matched, candidate.len().saturating_sub(n - 1), reference.len().saturating_sub(n - 1))
}

/// ROUGE-N between two raw texts under `tokenizer`.
pub fn rouge_texts(candidate: &str, reference: &str, n: usize, tokenizer: &Tokenizer) -> RougeScore {
    rouge_n(&tokenizer.words(candidate), &tokenizer.words(reference), n)
}
