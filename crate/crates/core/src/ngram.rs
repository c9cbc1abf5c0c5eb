//! N-gram occurrence tables over summary collections and percent-overlap
//! scoring of test summaries against them.
//!
//! N-grams are keyed by a 64-bit hash of their token tuple (see
//! [`crate::hash::ngram_key`]). A builder can optionally keep the token tuple
//! behind every key and fail on the first collision.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashMap;
use rustc_hash::FxBuildHasher;
use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Split, Tokenizer};
use crate::hash::{ngram_key, token_hash, Fingerprint};
use crate::{Error, Result};

pub const DEFAULT_N: usize = 4;

pub type CountMap = HashMap<u64, u64, FxBuildHasher>;

/// All contiguous n-grams of `tokens` as a multiset.
pub fn extract_ngrams<S: AsRef<str>>(tokens: &[S], n: usize) -> Result<BTreeMap<Vec<String>, usize>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut out = BTreeMap::new();
    for window in tokens.windows(n) {
        let gram: Vec<String> = window.iter().map(|t| String::from(t.as_ref())).collect();
        *out.entry(gram).or_insert(0) += 1;
    }
    Ok(out)
}

/// Hash keys of all contiguous n-grams, in text order.
pub fn ngram_keys<S: AsRef<str>>(tokens: &[S], n: usize) -> Vec<u64> {
    if n == 0 || tokens.len() < n {
        return Vec::new();
    }
    let hashes: Vec<u64> = tokens.iter().map(|t| token_hash(t.as_ref())).collect();
    hashes.windows(n).map(ngram_key).collect()
}

/// Occurrence counts of n-grams over a set of summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct NGramTable {
    n: usize,
    counts: CountMap,
    total_summaries: u64,
    total_instances: u64,
    tokenizer_fingerprint: u64,
    corpus_fingerprint: u64,
}

impl NGramTable {
    /// Count every n-gram occurrence in every training summary.
    pub fn build(train: &Dataset, n: usize, tokenizer: &Tokenizer) -> Result<Self> {
        if train.split != Split::Train {
            return Err(Error::WrongSplit { expected: "train", actual: train.split.as_str() });
        }
        let mut builder = TableBuilder::new(n, *tokenizer)?;
        for sample in train.samples() {
            builder.add_summary(&sample.summary)?;
        }
        builder.finish()
    }

    /// Reassemble a table from persisted parts.
    pub fn from_parts(
        n: usize,
        counts: CountMap,
        total_summaries: u64,
        tokenizer_fingerprint: u64,
        corpus_fingerprint: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if counts.values().any(|&c| c == 0) {
            return Err(Error::Validation("table contains a zero count".into()));
        }
        let total_instances = counts.values().sum();
        Ok(Self { n, counts, total_summaries, total_instances, tokenizer_fingerprint, corpus_fingerprint })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, key: u64) -> u64 {
        self.counts.get(&key).copied().unwrap_or(0)
    }

    pub fn contains(&self, key: u64) -> bool {
        self.counts.contains_key(&key)
    }

    /// Count of the n-gram made of `tokens` (must have length `n`).
    pub fn count_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> u64 {
        if tokens.len() != self.n {
            return 0;
        }
        ngram_keys(tokens, self.n).first().map_or(0, |k| self.count(*k))
    }

    /// Number of distinct n-grams.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Sum of all counts.
    pub fn total_instances(&self) -> u64 {
        self.total_instances
    }

    pub fn total_summaries(&self) -> u64 {
        self.total_summaries
    }

    pub fn tokenizer_fingerprint(&self) -> u64 {
        self.tokenizer_fingerprint
    }

    pub fn corpus_fingerprint(&self) -> u64 {
        self.corpus_fingerprint
    }

    pub fn counts(&self) -> &CountMap {
        &self.counts
    }

    /// `(key, count)` pairs in ascending key order.
    pub fn sorted_entries(&self) -> Vec<(u64, u64)> {
        let mut entries: Vec<(u64, u64)> = self.counts.iter().map(|(k, v)| (*k, *v)).collect();
        entries.sort_unstable();
        entries
    }

    pub fn max_count(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }
}

/// Incremental table construction. Builders over disjoint shards can be
/// merged; the merged table equals the one built sequentially, except for the
/// corpus fingerprint which depends on shard order.
#[derive(Debug, Clone)]
pub struct TableBuilder {
    n: usize,
    tokenizer: Tokenizer,
    counts: CountMap,
    summaries: u64,
    corpus: Fingerprint,
    witnesses: Option<HashMap<u64, Vec<String>, FxBuildHasher>>,
}

impl TableBuilder {
    pub fn new(n: usize, tokenizer: Tokenizer) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        Ok(Self {
            n,
            tokenizer,
            counts: CountMap::default(),
            summaries: 0,
            corpus: Fingerprint::new().u64(tokenizer.fingerprint()).u64(n as u64),
            witnesses: None,
        })
    }

    /// Keep the token tuple of every key and fail on hash collisions.
    pub fn with_collision_check(mut self) -> Self {
        self.witnesses = Some(HashMap::default());
        self
    }

    pub fn add_summary(&mut self, summary: &str) -> Result<()> {
        let tokens = self.tokenizer.words(summary);
        self.add_tokens(&tokens)?;
        self.corpus = core::mem::take(&mut self.corpus).str(summary);
        Ok(())
    }

    pub fn add_tokens<S: AsRef<str>>(&mut self, tokens: &[S]) -> Result<()> {
        self.summaries += 1;
        let keys = ngram_keys(tokens, self.n);
        if let Some(witnesses) = self.witnesses.as_mut() {
            for (key, window) in keys.iter().zip(tokens.windows(self.n)) {
                let gram: Vec<String> = window.iter().map(|t| String::from(t.as_ref())).collect();
                match witnesses.get(key) {
                    Some(prev) if *prev != gram => {
                        return Err(Error::HashCollision { first: prev.clone(), second: gram });
                    }
                    Some(_) => {}
                    None => {
                        witnesses.insert(*key, gram);
                    }
                }
            }
        }
        for key in keys {
            *self.counts.entry(key).or_insert(0) += 1;
        }
        Ok(())
    }

    /// Fold another shard into this one by adding counts.
    pub fn merge(&mut self, other: TableBuilder) -> Result<()> {
        if other.n != self.n || other.tokenizer != self.tokenizer {
            return Err(Error::InvalidArgument("cannot merge tables with different configuration".into()));
        }
        for (key, count) in other.counts {
            *self.counts.entry(key).or_insert(0) += count;
        }
        self.summaries += other.summaries;
        self.corpus = core::mem::take(&mut self.corpus).u64(other.corpus.finish());
        if let (Some(mine), Some(theirs)) = (self.witnesses.as_mut(), other.witnesses) {
            for (key, gram) in theirs {
                match mine.get(&key) {
                    Some(prev) if *prev != gram => {
                        return Err(Error::HashCollision { first: prev.clone(), second: gram });
                    }
                    Some(_) => {}
                    None => {
                        mine.insert(key, gram);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<NGramTable> {
        if self.summaries == 0 {
            return Err(Error::EmptyTrainingCorpus);
        }
        let total_instances = self.counts.values().sum();
        Ok(NGramTable {
            n: self.n,
            counts: self.counts,
            total_summaries: self.summaries,
            total_instances,
            tokenizer_fingerprint: self.tokenizer.fingerprint(),
            corpus_fingerprint: self.corpus.finish(),
        })
    }
}

/// How a test summary's own n-grams are counted when scoring overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapMode {
    /// Each distinct n-gram counts once.
    #[default]
    Set,
    /// Every occurrence counts.
    Multiset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapScore {
    pub sample_id: String,
    pub percent: f64,
    /// Distinct n-grams in the test summary (occurrences under multiset mode).
    pub distinct_ngrams: u64,
    pub matched: u64,
    /// The summary has fewer than `n` tokens.
    pub degenerate: bool,
}

/// Percent of the summary's n-grams that occur in `table`.
pub fn percent_overlap<S: AsRef<str>>(
    sample_id: &str,
    summary: &[S],
    table: &NGramTable,
    mode: OverlapMode,
) -> OverlapScore {
    let mut keys = ngram_keys(summary, table.n());
    if mode == OverlapMode::Set {
        keys.sort_unstable();
        keys.dedup();
    }
    let total = keys.len() as u64;
    let matched = keys.iter().filter(|k| table.contains(**k)).count() as u64;
    let percent = if total > 0 { 100.0 * matched as f64 / total as f64 } else { 0.0 };
    OverlapScore {
        sample_id: String::from(sample_id),
        percent,
        distinct_ngrams: total,
        matched,
        degenerate: total == 0,
    }
}

/// Score every sample of `test` against `table`.
pub fn score_dataset(
    test: &Dataset,
    table: &NGramTable,
    tokenizer: &Tokenizer,
    mode: OverlapMode,
) -> Vec<OverlapScore> {
    test.samples().iter().map(|s| percent_overlap(&s.id, &tokenizer.words(&s.summary), table, mode)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Sample;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn train(summaries: &[&str]) -> Dataset {
        let samples = summaries.iter().enumerate().map(|(i, t)| Sample::new(format!("s{i}"), "", *t)).collect();
        Dataset::new("train", Split::Train, samples).unwrap()
    }

    #[test]
    fn extract_examples() {
        let g = extract_ngrams(&s(&["a", "b", "c", "d", "e"]), 4).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[&s(&["a", "b", "c", "d"])], 1);
        assert_eq!(g[&s(&["b", "c", "d", "e"])], 1);
        assert!(extract_ngrams(&s(&["a", "b", "c"]), 4).unwrap().is_empty());
        let g = extract_ngrams(&s(&["a"; 5]), 4).unwrap();
        assert_eq!(g[&s(&["a"; 4])], 2);
        assert!(matches!(extract_ngrams(&s(&["a"]), 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn build_examples() {
        let t = NGramTable::build(&train(&["a b c d", "a b c d"]), 4, &Tokenizer::default()).unwrap();
        assert_eq!(t.distinct(), 1);
        assert_eq!(t.count_tokens(&s(&["a", "b", "c", "d"])), 2);
        let t = NGramTable::build(&train(&["a b c d e"]), 4, &Tokenizer::default()).unwrap();
        assert_eq!(t.distinct(), 2);
        assert_eq!(t.total_instances(), 2);
    }

    #[test]
    fn build_errors() {
        let empty = Dataset::new("e", Split::Train, vec![]).unwrap();
        assert_eq!(NGramTable::build(&empty, 4, &Tokenizer::default()), Err(Error::EmptyTrainingCorpus));
        let test = Dataset::new("t", Split::Test, vec![Sample::new("a", "", "x")]).unwrap();
        assert!(matches!(NGramTable::build(&test, 4, &Tokenizer::default()), Err(Error::WrongSplit { .. })));
    }

    #[test]
    fn overlap_examples() {
        let table = NGramTable::build(&train(&["a b c d"]), 4, &Tokenizer::default()).unwrap();
        let score = percent_overlap("x", &s(&["a", "b", "c", "d", "e"]), &table, OverlapMode::Set);
        assert_eq!(score.percent, 50.0);
        assert_eq!((score.distinct_ngrams, score.matched, score.degenerate), (2, 1, false));

        let full = percent_overlap("y", &s(&["a", "b", "c", "d"]), &table, OverlapMode::Set);
        assert_eq!(full.percent, 100.0);

        let short = percent_overlap("z", &s(&["a", "b", "c"]), &table, OverlapMode::Set);
        assert_eq!(short.percent, 0.0);
        assert!(short.degenerate);
    }

    #[test]
    fn multiset_mode_counts_repeats() {
        let table = NGramTable::build(&train(&["a a a a"]), 4, &Tokenizer::default()).unwrap();
        let toks = s(&["a", "a", "a", "a", "a", "b"]);
        let set = percent_overlap("x", &toks, &table, OverlapMode::Set);
        let multi = percent_overlap("x", &toks, &table, OverlapMode::Multiset);
        assert_eq!((set.matched, set.distinct_ngrams), (1, 2));
        assert_eq!((multi.matched, multi.distinct_ngrams), (2, 3));
    }

    #[test]
    fn case_folding_is_configurable() {
        let folded = NGramTable::build(&train(&["The Big Red Dog"]), 4, &Tokenizer::default()).unwrap();
        assert_eq!(folded.count_tokens(&s(&["the", "big", "red", "dog"])), 1);
        let exact = NGramTable::build(&train(&["The Big Red Dog"]), 4, &Tokenizer::new(true)).unwrap();
        assert_eq!(exact.count_tokens(&s(&["the", "big", "red", "dog"])), 0);
        assert_ne!(folded.tokenizer_fingerprint(), exact.tokenizer_fingerprint());
    }

    #[test]
    fn collision_check_passes_on_real_grams() {
        let mut b = TableBuilder::new(2, Tokenizer::default()).unwrap().with_collision_check();
        b.add_summary("a b a b c").unwrap();
        b.add_summary("b a c").unwrap();
        assert_eq!(b.finish().unwrap().distinct(), 4);
    }

    #[test]
    fn merged_shards_equal_sequential_counts() {
        let texts = ["a b c d e", "b c d e f", "a b c d"];
        let mut left = TableBuilder::new(3, Tokenizer::default()).unwrap();
        left.add_summary(texts[0]).unwrap();
        let mut right = TableBuilder::new(3, Tokenizer::default()).unwrap();
        right.add_summary(texts[1]).unwrap();
        right.add_summary(texts[2]).unwrap();
        left.merge(right).unwrap();
        let merged = left.finish().unwrap();
        let whole = NGramTable::build(&train(&texts), 3, &Tokenizer::default()).unwrap();
        assert_eq!(merged.sorted_entries(), whole.sorted_entries());
        assert_eq!(merged.total_summaries(), 3);
    }

    fn corpus() -> impl Strategy<Value = Vec<Vec<u8>>> {
        prop::collection::vec(prop::collection::vec(0u8..6, 0..12), 1..15)
    }

    fn render(ids: &[u8]) -> String {
        ids.iter().map(|i| format!("w{i}")).collect::<Vec<_>>().join(" ")
    }

    proptest! {
        #[test]
        fn counts_match_naive_recount(docs in corpus(), n in 1usize..5) {
            let texts: Vec<String> = docs.iter().map(|d| render(d)).collect();
            let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
            let table = NGramTable::build(&train(&refs), n, &Tokenizer::default()).unwrap();
            let mut naive: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
            for d in &docs {
                for w in d.windows(n) {
                    *naive.entry(w.to_vec()).or_default() += 1;
                }
            }
            prop_assert_eq!(table.distinct(), naive.len());
            for (gram, count) in &naive {
                let toks: Vec<String> = gram.iter().map(|i| format!("w{i}")).collect();
                prop_assert_eq!(table.count_tokens(&toks), *count);
            }
            prop_assert_eq!(table.total_instances(), naive.values().sum::<u64>());
        }

        #[test]
        fn overlap_monotone_in_training_corpus(docs in corpus(), extra in corpus(), probe in prop::collection::vec(0u8..6, 0..12)) {
            let base: Vec<String> = docs.iter().map(|d| render(d)).collect();
            let mut grown = base.clone();
            grown.extend(extra.iter().map(|d| render(d)));
            let tk = Tokenizer::default();
            let small = NGramTable::build(&train(&base.iter().map(String::as_str).collect::<Vec<_>>()), 4, &tk).unwrap();
            let large = NGramTable::build(&train(&grown.iter().map(String::as_str).collect::<Vec<_>>()), 4, &tk).unwrap();
            let toks = tk.words(&render(&probe));
            let a = percent_overlap("p", &toks, &small, OverlapMode::Set);
            let b = percent_overlap("p", &toks, &large, OverlapMode::Set);
            prop_assert!(b.percent >= a.percent);
            prop_assert!(a.matched <= a.distinct_ngrams);
        }
    }
}
