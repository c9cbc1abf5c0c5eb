//! Non-neural reference summarizers and pseudo-summary construction.
//!
//! The retrieval baseline copies the summary of the most similar training
//! document verbatim, so its outputs are the rote-learning extreme: every one
//! of their n-grams occurs in the training summaries.
//!
//! Similarity is cosine over TF-IDF vectors with
//! `tf = 1 + ln(count)` and `idf = ln((1 + N) / (1 + df)) + 1`, where `N` is
//! the number of training documents and `df` a term's document frequency.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use hashbrown::HashMap;
use rustc_hash::FxBuildHasher;
use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, SentenceSplitter, Tokenizer};
use crate::metrics::{rouge_n, RougeScore};
use crate::{Error, Result};

/// How an output was produced; enough to rebuild it from the corpora.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum Provenance {
    Retrieval {
        train_id: String,
        similarity: f64,
        zero_similarity: bool,
    },
    Lead {
        sentences: Vec<usize>,
    },
    Oracle {
        sentences: Vec<usize>,
        rouge2_f1: f64,
        empty: bool,
    },
    Pseudo {
        sentence: usize,
    },
    /// Produced outside this toolkit.
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummarizerOutput {
    pub sample_id: String,
    pub summary: String,
    pub provenance: Provenance,
}

/// Inverted TF-IDF index over training documents.
#[derive(Debug, Clone)]
pub struct RetrievalIndex {
    vocab: HashMap<String, u32, FxBuildHasher>,
    idf: Vec<f64>,
    postings: Vec<Vec<(u32, f64)>>,
    norms: Vec<f64>,
    ids: Vec<String>,
    summaries: Vec<String>,
    tokenizer: Tokenizer,
}

fn tf_weight(count: u32) -> f64 {
    1.0 + libm::log(f64::from(count))
}

fn term_counts(tokens: Vec<String>) -> Vec<(String, u32)> {
    let mut tokens = tokens;
    tokens.sort_unstable();
    let mut out: Vec<(String, u32)> = Vec::new();
    for t in tokens {
        match out.last_mut() {
            Some((last, c)) if *last == t => *c += 1,
            _ => out.push((t, 1)),
        }
    }
    out
}

impl RetrievalIndex {
    pub fn build(train: &Dataset, tokenizer: &Tokenizer) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyTrainingCorpus);
        }
        let mut vocab: HashMap<String, u32, FxBuildHasher> = HashMap::default();
        let mut df: Vec<u32> = Vec::new();
        let mut docs: Vec<Vec<(u32, u32)>> = Vec::with_capacity(train.len());
        for sample in train.samples() {
            let mut doc = Vec::new();
            for (term, count) in term_counts(tokenizer.words(&sample.document)) {
                let next = vocab.len() as u32;
                let id = *vocab.entry(term).or_insert(next);
                if id as usize == df.len() {
                    df.push(0);
                }
                df[id as usize] += 1;
                doc.push((id, count));
            }
            docs.push(doc);
        }
        let n_docs = train.len() as f64;
        let idf: Vec<f64> = df.iter().map(|&d| libm::log((1.0 + n_docs) / (1.0 + f64::from(d))) + 1.0).collect();
        let mut postings = vec![Vec::new(); idf.len()];
        let mut norms = Vec::with_capacity(docs.len());
        for (doc_idx, doc) in docs.iter().enumerate() {
            let mut sq = 0.0;
            for &(term, count) in doc {
                let w = tf_weight(count) * idf[term as usize];
                sq += w * w;
                postings[term as usize].push((doc_idx as u32, w));
            }
            norms.push(libm::sqrt(sq));
        }
        Ok(Self {
            vocab,
            idf,
            postings,
            norms,
            ids: train.samples().iter().map(|s| s.id.clone()).collect(),
            summaries: train.samples().iter().map(|s| s.summary.clone()).collect(),
            tokenizer: *tokenizer,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Cosine similarity of `query` to every training document.
    pub fn similarities(&self, query: &str) -> Vec<f64> {
        let mut dots = vec![0.0; self.ids.len()];
        let mut q_sq = 0.0;
        let unseen_idf = libm::log(1.0 + self.ids.len() as f64) + 1.0;
        for (term, count) in term_counts(self.tokenizer.words(query)) {
            match self.vocab.get(&term) {
                Some(&id) => {
                    let w = tf_weight(count) * self.idf[id as usize];
                    q_sq += w * w;
                    for &(doc, dw) in &self.postings[id as usize] {
                        dots[doc as usize] += w * dw;
                    }
                }
                None => {
                    let w = tf_weight(count) * unseen_idf;
                    q_sq += w * w;
                }
            }
        }
        let q_norm = libm::sqrt(q_sq);
        dots.iter()
            .zip(&self.norms)
            .map(|(dot, norm)| if *dot > 0.0 && q_norm > 0.0 && *norm > 0.0 { dot / (q_norm * norm) } else { 0.0 })
            .collect()
    }

    /// Index and similarity of the best match; ties go to the earliest document.
    pub fn nearest(&self, query: &str) -> (usize, f64) {
        let sims = self.similarities(query);
        let mut best = (0, sims[0]);
        for (i, s) in sims.iter().enumerate().skip(1) {
            if *s > best.1 {
                best = (i, *s);
            }
        }
        best
    }

    pub fn summarize(&self, sample_id: &str, document: &str) -> SummarizerOutput {
        let (idx, similarity) = self.nearest(document);
        SummarizerOutput {
            sample_id: String::from(sample_id),
            summary: self.summaries[idx].clone(),
            provenance: Provenance::Retrieval {
                train_id: self.ids[idx].clone(),
                similarity,
                zero_similarity: similarity == 0.0,
            },
        }
    }
}

/// The first `k` sentences of the document.
pub fn lead_k(sample_id: &str, document: &str, k: usize, splitter: &SentenceSplitter) -> Result<SummarizerOutput> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let sentences = splitter.split(document);
    let take = k.min(sentences.len());
    Ok(SummarizerOutput {
        sample_id: String::from(sample_id),
        summary: sentences[..take].join(" "),
        provenance: Provenance::Lead { sentences: (0..take).collect() },
    })
}

fn concat_tokens(sentence_tokens: &[Vec<String>], picked: &[usize]) -> Vec<String> {
    picked.iter().flat_map(|&i| sentence_tokens[i].iter().cloned()).collect()
}

/// Greedy sentence selection maximizing ROUGE-2 F1 against the reference.
/// Each round adds the sentence with the largest strict improvement, lowest
/// index first on ties; selected sentences are kept in document order.
pub fn extractive_oracle(
    sample_id: &str,
    document: &str,
    reference: &str,
    max_sentences: usize,
    splitter: &SentenceSplitter,
    tokenizer: &Tokenizer,
) -> Result<SummarizerOutput> {
    if max_sentences == 0 {
        return Err(Error::InvalidArgument("max_sentences must be at least 1".into()));
    }
    let sentences = splitter.split(document);
    let sentence_tokens: Vec<Vec<String>> = sentences.iter().map(|s| tokenizer.words(s)).collect();
    let ref_tokens = tokenizer.words(reference);
    let mut picked: Vec<usize> = Vec::new();
    let mut current = 0.0;
    while picked.len() < max_sentences {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..sentences.len() {
            if picked.contains(&i) {
                continue;
            }
            let mut trial = picked.clone();
            trial.push(i);
            trial.sort_unstable();
            let f1 = rouge_n(&concat_tokens(&sentence_tokens, &trial), &ref_tokens, 2).f1;
            if f1 > best.map_or(current, |b| b.1) {
                best = Some((i, f1));
            }
        }
        match best {
            Some((i, f1)) => {
                picked.push(i);
                picked.sort_unstable();
                current = f1;
            }
            None => break,
        }
    }
    Ok(SummarizerOutput {
        sample_id: String::from(sample_id),
        summary: picked.iter().map(|&i| sentences[i]).collect::<Vec<_>>().join(" "),
        provenance: Provenance::Oracle { empty: picked.is_empty(), sentences: picked, rouge2_f1: current },
    })
}

/// Which ROUGE-1 component ranks pseudo-summary candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum R1Component {
    Recall,
    Precision,
    #[default]
    F1,
}

impl R1Component {
    pub fn pick(self, score: &RougeScore) -> f64 {
        match self {
            R1Component::Recall => score.recall,
            R1Component::Precision => score.precision,
            R1Component::F1 => score.f1,
        }
    }
}

impl FromStr for R1Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recall" => Ok(R1Component::Recall),
            "precision" => Ok(R1Component::Precision),
            "f1" => Ok(R1Component::F1),
            other => Err(Error::InvalidArgument(alloc::format!("unknown ROUGE-1 component {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoSummary {
    pub index: usize,
    pub summary: String,
    pub remainder: String,
    pub score: f64,
}

/// The sentence with the highest ROUGE-1 against the rest of the document,
/// and the document with that sentence removed.
pub fn pseudo_summary(
    document: &str,
    component: R1Component,
    splitter: &SentenceSplitter,
    tokenizer: &Tokenizer,
) -> Result<PseudoSummary> {
    let sentences = splitter.split(document);
    if sentences.len() < 2 {
        return Err(Error::DocumentTooShort);
    }
    let tokens: Vec<Vec<String>> = sentences.iter().map(|s| tokenizer.words(s)).collect();
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..sentences.len() {
        let rest: Vec<&String> =
            tokens.iter().enumerate().filter(|(j, _)| *j != i).flat_map(|(_, t)| t.iter()).collect();
        let score = component.pick(&rouge_n(&tokens[i], &rest.iter().map(|s| s.as_str()).collect::<Vec<_>>(), 1));
        if score > best.1 {
            best = (i, score);
        }
    }
    let remainder =
        sentences.iter().enumerate().filter(|(j, _)| *j != best.0).map(|(_, s)| *s).collect::<Vec<_>>().join(" ");
    Ok(PseudoSummary { index: best.0, summary: String::from(sentences[best.0]), remainder, score: best.1 })
}
