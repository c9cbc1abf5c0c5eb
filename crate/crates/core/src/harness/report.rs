use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::baselines::SummarizerOutput;
use crate::corpus::{Dataset, Tokenizer};
use crate::hash::Fingerprint;
use crate::metrics::{entity_metrics, rouge_n, Denominator, EntityExtractor, EntityMetricRecord, RougeScore};
use crate::partition::{fmt_bound, PartitionSet};
use crate::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Knobs that change per-sample scores.
#[derive(Default)]
pub struct EvalConfig<'a> {
    pub tokenizer: Tokenizer,
    pub denominator: Denominator,
    /// Applied to every ROUGE token, e.g. a stemmer.
    pub token_map: Option<&'a dyn Fn(&str) -> String>,
    /// Free-form description folded into the fingerprint (extractor, stop words, ...).
    pub label: String,
}

impl EvalConfig<'_> {
    pub fn fingerprint(&self) -> u64 {
        Fingerprint::new()
            .u64(self.tokenizer.fingerprint())
            .str(match self.denominator {
                Denominator::Generated => "generated",
                Denominator::Reference => "reference",
            })
            .u64(u64::from(self.token_map.is_some()))
            .str(&self.label)
            .finish()
    }

    fn rouge_tokens(&self, text: &str) -> Vec<String> {
        let words = self.tokenizer.words(text);
        match self.token_map {
            Some(f) => words.iter().map(|w| f(w)).collect(),
            None => words,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleEvaluation {
    pub sample_id: String,
    pub rouge1: RougeScore,
    pub rouge2: RougeScore,
    pub entities: EntityMetricRecord,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricMeans {
    pub count: usize,
    /// Samples whose generated summary has at least one entity.
    pub entity_count: usize,
    /// Samples with a defined recall; differs from `entity_count` only under the reference denominator.
    pub e_rec_count: usize,
    pub r2: Option<f64>,
    pub e_rec: Option<f64>,
    pub e_prc: Option<f64>,
    pub e_rem: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinRecord {
    pub lower: f64,
    pub upper: Option<f64>,
    pub means: MetricMeans,
}

impl BinRecord {
    fn same_bounds(&self, other: &BinRecord) -> bool {
        self.lower == other.lower && self.upper == other.upper
    }
}

/// Ratios against a baseline; `None` where either side is undefined or the baseline is zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct NormalizedBin {
    pub r2: Option<f64>,
    pub e_rec: Option<f64>,
    pub e_prc: Option<f64>,
    pub e_rem: Option<f64>,
    /// Metrics whose baseline value was zero.
    pub zero_baseline: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedView {
    pub baseline_fingerprint: String,
    pub bins: Vec<NormalizedBin>,
    pub corpus: NormalizedBin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub schema_version: u32,
    pub config_fingerprint: String,
    pub bins: Vec<BinRecord>,
    pub corpus: MetricMeans,
    #[serde(default)]
    pub normalized: Option<NormalizedView>,
}

fn check_outputs(outputs: &[SummarizerOutput], test: &Dataset) -> Result<BTreeMap<String, usize>> {
    let index = test.index();
    let mut seen = BTreeMap::new();
    for (i, out) in outputs.iter().enumerate() {
        if !index.contains_key(out.sample_id.as_str()) {
            return Err(Error::UnknownOutputId(out.sample_id.clone()));
        }
        if seen.insert(out.sample_id.clone(), i).is_some() {
            return Err(Error::DuplicateOutputId(out.sample_id.clone()));
        }
    }
    let missing: Vec<String> =
        test.samples().iter().filter(|s| !seen.contains_key(&s.id)).map(|s| s.id.clone()).collect();
    if !missing.is_empty() {
        return Err(Error::MissingOutputs(missing));
    }
    Ok(seen)
}

fn check_partitions(partitions: &PartitionSet, test: &Dataset) -> Result<()> {
    let index = test.index();
    let mut seen = BTreeSet::new();
    for id in partitions.bins.iter().flat_map(|b| &b.sample_ids) {
        if !index.contains_key(id.as_str()) {
            return Err(Error::PartitionMismatch(format!("partition id {id:?} not in test set")));
        }
        if !seen.insert(id.as_str()) {
            return Err(Error::PartitionMismatch(format!("id {id:?} appears in more than one bin")));
        }
    }
    if seen.len() != test.len() {
        return Err(Error::PartitionMismatch(format!(
            "partitions cover {} of {} test samples",
            seen.len(),
            test.len()
        )));
    }
    Ok(())
}

/// Per-sample R2 and entity metrics, in test-set order.
pub fn score_samples<E: EntityExtractor + ?Sized>(
    outputs: &[SummarizerOutput],
    test: &Dataset,
    extractor: &E,
    config: &EvalConfig<'_>,
) -> Result<Vec<SampleEvaluation>> {
    let by_id = check_outputs(outputs, test)?;
    test.samples()
        .iter()
        .map(|sample| {
            let generated = &outputs[by_id[&sample.id]].summary;
            let cand = config.rouge_tokens(generated);
            let reference = config.rouge_tokens(&sample.summary);
            let rouge1 = rouge_n(&cand, &reference, 1);
            let rouge2 = rouge_n(&cand, &reference, 2);
            let entities = entity_metrics(
                &sample.id,
                generated,
                &sample.summary,
                &sample.document,
                extractor,
                config.denominator,
            )?;
            Ok(SampleEvaluation { sample_id: sample.id.clone(), rouge1, rouge2, entities })
        })
        .collect()
}

#[derive(Default)]
struct Sums {
    count: usize,
    entity_count: usize,
    e_rec_count: usize,
    r2: f64,
    e_rec: f64,
    e_prc: f64,
    e_rem: f64,
}

impl Sums {
    fn add(&mut self, s: &SampleEvaluation) {
        self.count += 1;
        self.r2 += s.rouge2.f1;
        let e = &s.entities;
        if let Some(v) = e.e_rec {
            self.e_rec_count += 1;
            self.e_rec += v;
        }
        if let (Some(p), Some(m)) = (e.e_prc, e.e_rem) {
            self.entity_count += 1;
            self.e_prc += p;
            self.e_rem += m;
        }
    }

    fn absorb(&mut self, o: &Sums) {
        self.count += o.count;
        self.entity_count += o.entity_count;
        self.e_rec_count += o.e_rec_count;
        self.r2 += o.r2;
        self.e_rec += o.e_rec;
        self.e_prc += o.e_prc;
        self.e_rem += o.e_rem;
    }

    fn means(&self) -> MetricMeans {
        let mean = |sum: f64, n: usize| (n > 0).then(|| sum / n as f64);
        MetricMeans {
            count: self.count,
            entity_count: self.entity_count,
            e_rec_count: self.e_rec_count,
            r2: mean(self.r2, self.count),
            e_rec: mean(self.e_rec, self.e_rec_count),
            e_prc: mean(self.e_prc, self.entity_count),
            e_rem: mean(self.e_rem, self.entity_count),
        }
    }
}

/// Unweighted per-bin means plus corpus means.
pub fn aggregate(
    samples: &[SampleEvaluation],
    partitions: &PartitionSet,
    config_fingerprint: u64,
) -> Result<EvaluationReport> {
    let by_id: BTreeMap<&str, &SampleEvaluation> = samples.iter().map(|s| (s.sample_id.as_str(), s)).collect();
    let mut corpus = Sums::default();
    let mut bins = Vec::with_capacity(partitions.bins.len());
    for bin in &partitions.bins {
        let mut sums = Sums::default();
        for id in &bin.sample_ids {
            let s =
                by_id.get(id.as_str()).ok_or_else(|| Error::PartitionMismatch(format!("no evaluation for {id:?}")))?;
            sums.add(s);
        }
        corpus.absorb(&sums);
        bins.push(BinRecord { lower: bin.lower, upper: bin.upper, means: sums.means() });
    }
    if corpus.count != samples.len() {
        return Err(Error::PartitionMismatch(format!(
            "partitions cover {} of {} evaluated samples",
            corpus.count,
            samples.len()
        )));
    }
    Ok(EvaluationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        config_fingerprint: format!("{config_fingerprint:016x}"),
        bins,
        corpus: corpus.means(),
        normalized: None,
    })
}

/// Score every output and aggregate by partition bin.
pub fn evaluate<E: EntityExtractor + ?Sized>(
    outputs: &[SummarizerOutput],
    test: &Dataset,
    partitions: &PartitionSet,
    extractor: &E,
    config: &EvalConfig<'_>,
) -> Result<EvaluationReport> {
    check_partitions(partitions, test)?;
    let samples = score_samples(outputs, test, extractor, config)?;
    let mut fp = Fingerprint::new().u64(config.fingerprint());
    for b in &partitions.bins {
        fp = fp.u64(b.lower.to_bits()).u64(b.upper.map_or(u64::MAX, f64::to_bits));
    }
    aggregate(&samples, partitions, fp.finish())
}

fn ratio(name: &str, value: Option<f64>, base: Option<f64>, zero: &mut Vec<String>) -> Option<f64> {
    match (value, base) {
        (_, Some(0.0)) => {
            zero.push(name.to_string());
            None
        }
        (Some(v), Some(b)) => Some(v / b),
        _ => None,
    }
}

fn ratios(m: &MetricMeans, b: &MetricMeans) -> NormalizedBin {
    let mut zero = Vec::new();
    NormalizedBin {
        r2: ratio("r2", m.r2, b.r2, &mut zero),
        e_rec: ratio("e_rec", m.e_rec, b.e_rec, &mut zero),
        e_prc: ratio("e_prc", m.e_prc, b.e_prc, &mut zero),
        e_rem: ratio("e_rem", m.e_rem, b.e_rem, &mut zero),
        zero_baseline: zero,
    }
}

/// Attach each bin's value divided by the baseline's same-bin value.
pub fn normalize(report: &EvaluationReport, baseline: &EvaluationReport) -> Result<EvaluationReport> {
    if report.bins.len() != baseline.bins.len() {
        return Err(Error::BinMismatch(format!("{} bins vs {} in baseline", report.bins.len(), baseline.bins.len())));
    }
    if let Some((i, (a, _))) = report.bins.iter().zip(&baseline.bins).enumerate().find(|(_, (a, b))| !a.same_bounds(b))
    {
        return Err(Error::BinMismatch(format!("bin {i} ({}, {:?}) differs from baseline", a.lower, a.upper)));
    }
    let view = NormalizedView {
        baseline_fingerprint: baseline.config_fingerprint.clone(),
        bins: report.bins.iter().zip(&baseline.bins).map(|(a, b)| ratios(&a.means, &b.means)).collect(),
        corpus: ratios(&report.corpus, &baseline.corpus),
    };
    let mut out = report.clone();
    out.normalized = Some(view);
    Ok(out)
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.4}"))
}

fn bound(v: f64) -> String {
    format!("{v:.4}")
}

impl EvaluationReport {
    pub const CSV_COLUMNS: &'static [&'static str] =
        &["bin", "lower", "upper", "count", "entity_count", "r2", "e_rec", "e_prc", "e_rem"];
    pub const CSV_NORMALIZED_COLUMNS: &'static [&'static str] = &["norm_r2", "norm_e_rec", "norm_e_prc", "norm_e_rem"];

    /// One row per bin then an `all` row; floats with 4 decimals, absent values empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut header: Vec<&str> = Self::CSV_COLUMNS.to_vec();
        if self.normalized.is_some() {
            header.extend_from_slice(Self::CSV_NORMALIZED_COLUMNS);
        }
        out.push_str(&header.join(","));
        out.push('\n');
        let norm_bins = self.normalized.as_ref().map(|n| &n.bins);
        for (i, b) in self.bins.iter().enumerate() {
            let label = match b.upper {
                Some(u) => format!("{}-{}", fmt_bound(b.lower), fmt_bound(u)),
                None => format!(">{}", fmt_bound(b.lower)),
            };
            let upper = b.upper.map(bound).unwrap_or_default();
            row(&mut out, &label, &bound(b.lower), &upper, &b.means, norm_bins.map(|n| &n[i]));
        }
        row(&mut out, "all", "", "", &self.corpus, self.normalized.as_ref().map(|n| &n.corpus));
        out
    }
}

fn row(out: &mut String, label: &str, lower: &str, upper: &str, m: &MetricMeans, norm: Option<&NormalizedBin>) {
    let _ = write!(
        out,
        "{label},{lower},{upper},{},{},{},{},{},{}",
        m.count,
        m.entity_count,
        cell(m.r2),
        cell(m.e_rec),
        cell(m.e_prc),
        cell(m.e_rem)
    );
    if let Some(n) = norm {
        let _ = write!(out, ",{},{},{},{}", cell(n.r2), cell(n.e_rec), cell(n.e_prc), cell(n.e_rem));
    }
    out.push('\n');
}
