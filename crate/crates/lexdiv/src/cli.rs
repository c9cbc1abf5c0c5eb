//! `lexdiv` subcommands.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lexdiv_core::baselines::{extractive_oracle, lead_k, pseudo_summary, R1Component, RetrievalIndex};
use lexdiv_core::curate::{select_highest_repetition, select_random, select_repetition_bounded};
use lexdiv_core::harness::{
    classify_intervention, evaluate, make_interventions, normalize, score_outcomes, score_samples, EvalConfig,
    InterventionCase, InterventionConfig,
};
use lexdiv_core::hash::Fingerprint;
use lexdiv_core::metrics::{Denominator, EntityExtractor, HeuristicExtractor, StopWords};
use lexdiv_core::ngram::score_dataset;
use lexdiv_core::partition::{default_min_samples, partition, partition_fixed};
use lexdiv_core::{
    CountMode, Dataset, EvaluationReport, NGramTable, OverlapMode, OverlapScore, Sample, SentenceSplitter, Split,
    SubsetSelection, Theta, Tokenizer,
};
use serde::Serialize;
use serde_json::json;

use crate::config::expand_args;
use crate::entities::load_sidecar;
use crate::export::{export, Format};
use crate::io::{
    load_jsonl, read_ids, read_json, read_jsonl, read_outputs, to_pretty, write_ids, write_json, write_jsonl,
    write_jsonl_to,
};
use crate::partitions::{read_partitions, write_partitions};
use crate::stem::EnglishStemmer;

#[derive(Debug, Parser)]
#[command(
    name = "lexdiv",
    version,
    about = "Lexical-overlap corpus analysis and fine-grained summarization evaluation"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// TOML file whose `[subcommand]` tables supply default flags.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a corpus file and print statistics as JSON.
    Ingest(IngestArgs),
    /// Build an n-gram table over training summaries and save it.
    Index(IndexArgs),
    /// Percent n-gram overlap of each test summary with the training summaries.
    Overlap(OverlapArgs),
    /// Bin overlap scores into disjoint partitions.
    Partition(PartitionArgs),
    /// Select a training subset.
    Select(SelectArgs),
    /// Run a reference summarizer.
    Summarize(SummarizeArgs),
    /// Build pseudo-summaries (best self-ROUGE-1 sentence).
    Pseudo(PseudoArgs),
    /// Per-sample ROUGE and entity metrics.
    Metrics(MetricsArgs),
    /// Per-partition evaluation report.
    Evaluate(EvaluateArgs),
    /// Build fact-substitution and fact-addition cases.
    Intervene(IntervenArgs),
    /// Classify generated summaries for intervention cases.
    InterveneScore(IntervenScoreArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SplitArg {
    Train,
    Validation,
    Test,
}

impl From<SplitArg> for Split {
    fn from(s: SplitArg) -> Self {
        match s {
            SplitArg::Train => Split::Train,
            SplitArg::Validation => Split::Validation,
            SplitArg::Test => Split::Test,
        }
    }
}

#[derive(Debug, Args)]
pub struct TokenOpts {
    /// Match tokens without case folding.
    #[arg(long)]
    pub case_sensitive: bool,
}

impl TokenOpts {
    fn tokenizer(&self) -> Tokenizer {
        Tokenizer::new(self.case_sensitive)
    }
}

#[derive(Debug, Args)]
pub struct SplitterOpts {
    /// Abbreviation list for sentence splitting, one per line.
    #[arg(long, value_name = "PATH")]
    pub abbreviations: Option<PathBuf>,
}

impl SplitterOpts {
    fn splitter(&self) -> Result<SentenceSplitter> {
        match &self.abbreviations {
            None => Ok(SentenceSplitter::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Ok(SentenceSplitter::with_abbreviations(
                    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from),
                ))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtractorKind {
    Heuristic,
    Precomputed,
}

#[derive(Debug, Args)]
pub struct ExtractorOpts {
    #[arg(long, value_enum, default_value = "heuristic")]
    pub extractor: ExtractorKind,
    /// Sidecar annotations for the precomputed extractor.
    #[arg(long, value_name = "PATH")]
    pub entities: Option<PathBuf>,
    /// Replacement stop-word list.
    #[arg(long, value_name = "PATH")]
    pub stopwords: Option<PathBuf>,
    #[command(flatten)]
    pub splitter: SplitterOpts,
}

impl ExtractorOpts {
    fn stop_words(&self) -> Result<(StopWords, String)> {
        match &self.stopwords {
            None => Ok((StopWords::builtin(), format!("builtin-{}", StopWords::BUILTIN_VERSION))),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                let fp = Fingerprint::new().str(&text).finish();
                Ok((StopWords::parse(&text), format!("file-{fp:016x}")))
            }
        }
    }

    /// The extractor and a label describing it.
    fn build(&self) -> Result<(Box<dyn EntityExtractor>, String)> {
        let (stop, stop_label) = self.stop_words()?;
        match self.extractor {
            ExtractorKind::Heuristic => {
                if self.entities.is_some() {
                    bail!("--entities requires --extractor precomputed");
                }
                let splitter = self.splitter.splitter()?;
                let label = format!("heuristic;stopwords={stop_label};abbrev={:?}", splitter.abbreviations());
                Ok((Box::new(HeuristicExtractor::new(stop, splitter)), label))
            }
            ExtractorKind::Precomputed => {
                let path =
                    self.entities.as_ref().context("--extractor precomputed needs --entities <sidecar.jsonl>")?;
                let text = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
                let fp = Fingerprint::new().str(&String::from_utf8_lossy(&text)).finish();
                let label = format!("precomputed-{fp:016x};stopwords={stop_label}");
                Ok((Box::new(load_sidecar(path, stop)?), label))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DenominatorArg {
    Generated,
    Reference,
}

#[derive(Debug, Args)]
pub struct ScoringOpts {
    /// Entity set that entity recall divides by.
    #[arg(long, value_enum, default_value = "generated")]
    pub denominator: DenominatorArg,
    /// Snowball English stemming of ROUGE tokens.
    #[arg(long)]
    pub stemming: bool,
    #[command(flatten)]
    pub tokens: TokenOpts,
}

impl ScoringOpts {
    fn denominator(&self) -> Denominator {
        match self.denominator {
            DenominatorArg::Generated => Denominator::Generated,
            DenominatorArg::Reference => Denominator::Reference,
        }
    }
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub split: SplitArg,
    /// Accept records with a missing or empty summary and flag them.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[command(flatten)]
    pub tokens: TokenOpts,
    /// Check every new n-gram hash against the tokens it was built from.
    #[arg(long)]
    pub check_collisions: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["train", "table"])))]
pub struct OverlapArgs {
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Previously saved table instead of `--train`.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[command(flatten)]
    pub tokens: TokenOpts,
    /// Count repeated test n-grams once per occurrence.
    #[arg(long)]
    pub multiset: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long, conflicts_with = "boundaries")]
    pub min_samples: Option<usize>,
    /// Explicit bin edges, e.g. `0,5,15`.
    #[arg(long, value_delimiter = ',')]
    pub boundaries: Option<Vec<f64>>,
    /// Target bin count used for the default minimum bin size.
    #[arg(long, default_value_t = 8)]
    pub bins: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Bounded,
    Top,
    Random,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long, value_enum)]
    pub policy: PolicyArg,
    /// Repetition bound; `inf` admits everything.
    #[arg(long)]
    pub theta: Option<Theta>,
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub seeds: Vec<u64>,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Count each n-gram at most once per summary.
    #[arg(long)]
    pub distinct_per_sample: bool,
    #[command(flatten)]
    pub tokens: TokenOpts,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SummarizerArg {
    Retrieval,
    Lead,
    Oracle,
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    #[arg(long, value_enum)]
    pub policy: SummarizerArg,
    #[arg(long, required_if_eq("policy", "retrieval"))]
    pub train: Option<PathBuf>,
    /// Restrict the retrieval pool to these training ids (one per line), e.g. a `select` output.
    #[arg(long, requires = "train")]
    pub train_ids: Option<PathBuf>,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub max_sentences: usize,
    #[command(flatten)]
    pub tokens: TokenOpts,
    #[command(flatten)]
    pub splitter: SplitterOpts,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PseudoArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "f1")]
    pub r1_component: R1Component,
    #[command(flatten)]
    pub tokens: TokenOpts,
    #[command(flatten)]
    pub splitter: SplitterOpts,
    /// Fail on documents with fewer than two sentences instead of skipping them.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Generated summaries: JSON-lines with `id` (or `sample_id`) and `summary`.
    #[arg(long)]
    pub generated: PathBuf,
    /// Corpus whose `summary` fields are the references.
    #[arg(long)]
    pub reference: PathBuf,
    /// Corpus whose `document` fields are the sources; defaults to `--reference`.
    #[arg(long)]
    pub source: Option<PathBuf>,
    #[command(flatten)]
    pub extractor: ExtractorOpts,
    #[command(flatten)]
    pub scoring: ScoringOpts,
    /// Per-sample records.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub outputs: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// `partitions.json` or the directory holding it.
    #[arg(long)]
    pub partitions: PathBuf,
    /// JSON report of the baseline run.
    #[arg(long)]
    pub normalize_against: Option<PathBuf>,
    #[command(flatten)]
    pub extractor: ExtractorOpts,
    #[command(flatten)]
    pub scoring: ScoringOpts,
    /// `csv` or `json`; inferred from the `--out` extension when absent.
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IntervenArgs {
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 2000)]
    pub top_entities: usize,
    #[arg(long, default_value_t = 2)]
    pub per_document: usize,
    /// Add-mode sentence; `{entity}` marks the new value.
    #[arg(long, default_value = lexdiv_core::harness::DEFAULT_TEMPLATE)]
    pub template: String,
    /// JSON object mapping an entity (as case-folded content tokens) to replacement values.
    #[arg(long)]
    pub replacements: Option<PathBuf>,
    #[command(flatten)]
    pub extractor: ExtractorOpts,
    /// Where to write skipped cases; standard error when absent.
    #[arg(long)]
    pub skipped_log: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IntervenScoreArgs {
    #[arg(long)]
    pub cases: PathBuf,
    /// JSON-lines with `case_id` (or `id`) and `summary`.
    #[arg(long)]
    pub generated: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub stopwords: Option<PathBuf>,
    /// Scored cases.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit_jsonl<T: Serialize>(out: Option<&Path>, items: &[T]) -> Result<()> {
    match out {
        Some(p) => write_jsonl(p, items)?,
        None => write_jsonl_to(&mut std::io::stdout().lock(), items)?,
    }
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    std::io::stdout().lock().write_all(to_pretty(value).as_bytes())?;
    Ok(())
}

fn ingest(a: &IngestArgs) -> Result<()> {
    let ds = load_jsonl(&a.input, a.split.into(), a.lenient)?;
    let tok = Tokenizer::default();
    let doc_tokens: usize = ds.samples().iter().map(|s| tok.words(&s.document).len()).sum();
    let sum_tokens: usize = ds.samples().iter().map(|s| tok.words(&s.summary).len()).sum();
    let n = ds.len().max(1) as f64;
    print_json(&json!({
        "name": ds.name,
        "split": ds.split.as_str(),
        "samples": ds.len(),
        "flagged": ds.samples().iter().filter(|s| s.flagged).count(),
        "document_tokens": doc_tokens,
        "summary_tokens": sum_tokens,
        "mean_document_tokens": doc_tokens as f64 / n,
        "mean_summary_tokens": sum_tokens as f64 / n,
        "tokenizer": Tokenizer::VERSION,
    }))
}

fn build_table(train: &Path, n: usize, tokenizer: &Tokenizer, check: bool) -> Result<NGramTable> {
    let ds = load_jsonl(train, Split::Train, false)?;
    if !check {
        return Ok(NGramTable::build(&ds, n, tokenizer)?);
    }
    if ds.is_empty() {
        return Err(lexdiv_core::Error::EmptyTrainingCorpus.into());
    }
    let mut b = lexdiv_core::ngram::TableBuilder::new(n, *tokenizer)?.with_collision_check();
    for s in ds.samples() {
        b.add_summary(&s.summary)?;
    }
    Ok(b.finish()?)
}

fn index(a: &IndexArgs) -> Result<()> {
    let table = build_table(&a.train, a.n, &a.tokens.tokenizer(), a.check_collisions)?;
    crate::table::save(&table, &a.out)?;
    print_json(&json!({
        "n": table.n(),
        "summaries": table.total_summaries(),
        "distinct": table.distinct(),
        "instances": table.total_instances(),
        "max_count": table.max_count(),
    }))
}

fn overlap(a: &OverlapArgs) -> Result<()> {
    let tok = a.tokens.tokenizer();
    let table = match (&a.train, &a.table) {
        (Some(train), _) => build_table(train, a.n, &tok, false)?,
        (None, Some(path)) => crate::table::load(path, &tok, Some(a.n))?,
        (None, None) => unreachable!("clap requires one source"),
    };
    let test = load_jsonl(&a.test, Split::Test, true)?;
    let mode = if a.multiset { OverlapMode::Multiset } else { OverlapMode::Set };
    emit_jsonl(a.out.as_deref(), &score_dataset(&test, &table, &tok, mode))
}

fn partition_cmd(a: &PartitionArgs) -> Result<()> {
    let scores: Vec<OverlapScore> = read_jsonl(&a.scores)?;
    let (set, min) = match (&a.boundaries, a.min_samples) {
        (Some(b), _) => (partition_fixed(&scores, b)?, None),
        (None, m) => {
            let m = m.unwrap_or_else(|| default_min_samples(scores.len(), a.bins));
            (partition(&scores, m)?, Some(m))
        }
    };
    let report = write_partitions(&a.out_dir, &set, min)?;
    print_json(&report)
}

#[derive(Serialize)]
struct SelectAudit {
    #[serde(flatten)]
    selection: SelectionSummary,
    ids_file: String,
}

#[derive(Serialize)]
struct SelectionSummary {
    policy: lexdiv_core::SelectionPolicy,
    theta: Option<u64>,
    seed: Option<u64>,
    n: usize,
    retained: usize,
    max_ngram_count: u64,
}

impl From<&SubsetSelection> for SelectionSummary {
    fn from(s: &SubsetSelection) -> Self {
        Self {
            policy: s.policy,
            theta: s.theta,
            seed: s.seed,
            n: s.n,
            retained: s.len(),
            max_ngram_count: s.max_ngram_count,
        }
    }
}

fn select(a: &SelectArgs) -> Result<()> {
    let train = load_jsonl(&a.train, Split::Train, false)?;
    let tok = a.tokens.tokenizer();
    let mode = if a.distinct_per_sample { CountMode::DistinctPerSample } else { CountMode::Occurrences };
    let mut runs: Vec<(String, SubsetSelection)> = Vec::new();
    match a.policy {
        PolicyArg::Bounded => {
            let theta = a.theta.context("--policy bounded needs --theta")?;
            for &seed in &a.seeds {
                let sel = select_repetition_bounded(&train, a.n, theta, seed, &tok, mode)?;
                runs.push((format!("bounded_theta{theta}_seed{seed}.ids"), sel));
            }
        }
        PolicyArg::Top => {
            let size = a.size.context("--policy top needs --size")?;
            runs.push((format!("top_size{size}.ids"), select_highest_repetition(&train, a.n, size, &tok, mode)?));
        }
        PolicyArg::Random => {
            let size = a.size.context("--policy random needs --size")?;
            for &seed in &a.seeds {
                runs.push((format!("random_size{size}_seed{seed}.ids"), select_random(&train, size, seed, a.n, &tok)?));
            }
        }
    }
    let mut audit = Vec::with_capacity(runs.len());
    for (file, sel) in &runs {
        write_ids(&a.out_dir.join(file), &sel.retained_ids)?;
        audit.push(SelectAudit { selection: sel.into(), ids_file: file.clone() });
    }
    write_json(&a.out_dir.join("audit.json"), &audit)?;
    print_json(&audit)
}

fn summarize(a: &SummarizeArgs) -> Result<()> {
    let test = load_jsonl(&a.test, Split::Test, true)?;
    let tok = a.tokens.tokenizer();
    let splitter = a.splitter.splitter()?;
    let outputs = match a.policy {
        SummarizerArg::Retrieval => {
            let train =
                load_jsonl(a.train.as_deref().context("--policy retrieval needs --train")?, Split::Train, false)?;
            let train = match &a.train_ids {
                Some(p) => train.subset(&read_ids(p)?)?,
                None => train,
            };
            let index = RetrievalIndex::build(&train, &tok)?;
            test.samples().iter().map(|s| index.summarize(&s.id, &s.document)).collect::<Vec<_>>()
        }
        SummarizerArg::Lead => {
            test.samples().iter().map(|s| lead_k(&s.id, &s.document, a.k, &splitter)).collect::<Result<Vec<_>, _>>()?
        }
        SummarizerArg::Oracle => test
            .samples()
            .iter()
            .map(|s| extractive_oracle(&s.id, &s.document, &s.summary, a.max_sentences, &splitter, &tok))
            .collect::<Result<Vec<_>, _>>()?,
    };
    emit_jsonl(a.out.as_deref(), &outputs)
}

#[derive(Serialize)]
struct PseudoRecord {
    id: String,
    /// Equal to `remainder`, so the output loads as a corpus.
    document: String,
    summary: String,
    remainder: String,
    sentence_index: usize,
    score: f64,
}

fn pseudo(a: &PseudoArgs) -> Result<()> {
    let input = load_jsonl(&a.input, Split::Train, true)?;
    let tok = a.tokens.tokenizer();
    let splitter = a.splitter.splitter()?;
    let mut out = Vec::with_capacity(input.len());
    let mut skipped = 0usize;
    for s in input.samples() {
        match pseudo_summary(&s.document, a.r1_component, &splitter, &tok) {
            Ok(p) => out.push(PseudoRecord {
                id: s.id.clone(),
                document: p.remainder.clone(),
                summary: p.summary,
                remainder: p.remainder,
                sentence_index: p.index,
                score: p.score,
            }),
            Err(lexdiv_core::Error::DocumentTooShort) if !a.strict => skipped += 1,
            Err(e) => return Err(anyhow::Error::from(e).context(format!("sample {:?}", s.id))),
        }
    }
    if skipped > 0 {
        eprintln!("skipped {skipped} document(s) with fewer than two sentences");
    }
    emit_jsonl(a.out.as_deref(), &out)
}

fn eval_config<'a>(
    scoring: &ScoringOpts,
    label: String,
    stemmer: Option<&'a (dyn Fn(&str) -> String + 'a)>,
) -> EvalConfig<'a> {
    EvalConfig { tokenizer: scoring.tokens.tokenizer(), denominator: scoring.denominator(), token_map: stemmer, label }
}

fn metrics(a: &MetricsArgs) -> Result<()> {
    let reference = load_jsonl(&a.reference, Split::Test, false)?;
    let source = match &a.source {
        Some(p) => Some(load_jsonl(p, Split::Test, true)?),
        None => None,
    };
    let joined: Vec<Sample> = reference
        .samples()
        .iter()
        .map(|r| {
            let document = match &source {
                Some(src) => {
                    src.get(&r.id).map(|s| s.document.clone()).with_context(|| format!("{:?} not in --source", r.id))
                }
                None => Ok(r.document.clone()),
            }?;
            Ok(Sample { document, ..r.clone() })
        })
        .collect::<Result<_>>()?;
    let test = Dataset::new(reference.name.clone(), Split::Test, joined)?;
    let outputs = read_outputs(&a.generated)?;
    let (extractor, label) = a.extractor.build()?;
    let stemmer = EnglishStemmer::new();
    let stem_fn = |t: &str| stemmer.stem(t);
    let config = eval_config(&a.scoring, label, a.scoring.stemming.then_some(&stem_fn as &dyn Fn(&str) -> String));
    let samples = score_samples(&outputs, &test, extractor.as_ref(), &config)?;
    write_jsonl(&a.out, &samples)?;
    let single = lexdiv_core::PartitionSet {
        bins: vec![lexdiv_core::Bin {
            lower: 0.0,
            upper: None,
            sample_ids: test.samples().iter().map(|s| s.id.clone()).collect(),
        }],
    };
    let report = lexdiv_core::harness::aggregate(&samples, &single, config.fingerprint())?;
    let n = samples.len().max(1) as f64;
    let r1 = samples.iter().map(|s| s.rouge1.f1).sum::<f64>() / n;
    print_json(&json!({
        "samples": samples.len(),
        "rouge1_f1": r1,
        "means": report.corpus,
        "config_fingerprint": report.config_fingerprint,
    }))
}

fn evaluate_cmd(a: &EvaluateArgs) -> Result<()> {
    let test = load_jsonl(&a.test, Split::Test, false)?;
    let outputs = read_outputs(&a.outputs)?;
    let partitions = read_partitions(&a.partitions)?;
    let (extractor, label) = a.extractor.build()?;
    let stemmer = EnglishStemmer::new();
    let stem_fn = |t: &str| stemmer.stem(t);
    let config = eval_config(&a.scoring, label, a.scoring.stemming.then_some(&stem_fn as &dyn Fn(&str) -> String));
    let mut report = evaluate(&outputs, &test, &partitions, extractor.as_ref(), &config)?;
    if let Some(base) = &a.normalize_against {
        let baseline: EvaluationReport = read_json(base)?;
        report = normalize(&report, &baseline)?;
    }
    let format = a.format.unwrap_or_else(|| Format::for_path(&a.out));
    export(&report, format, &a.out)?;
    Ok(())
}

fn intervene(a: &IntervenArgs) -> Result<()> {
    let test = load_jsonl(&a.test, Split::Test, false)?;
    let train = load_jsonl(&a.train, Split::Train, false)?;
    let (extractor, _) = a.extractor.build()?;
    let replacements: BTreeMap<String, Vec<String>> = match &a.replacements {
        Some(p) => read_json(p)?,
        None => BTreeMap::new(),
    };
    let config = InterventionConfig {
        count: a.count,
        seed: a.seed,
        top_entities: a.top_entities,
        per_document: a.per_document,
        template: a.template.clone(),
        replacements,
    };
    let plan = make_interventions(&test, &train, extractor.as_ref(), &config)?;
    write_jsonl(&a.out, &plan.cases)?;
    match &a.skipped_log {
        Some(p) => write_jsonl(p, &plan.skipped)?,
        None => {
            for s in &plan.skipped {
                eprintln!("skipped {} ({}): {}", s.sample_id, s.entity, s.reason);
            }
        }
    }
    print_json(&json!({ "cases": plan.cases.len(), "skipped": plan.skipped.len(), "pool_size": plan.pool_size }))
}

fn intervene_score(a: &IntervenScoreArgs) -> Result<()> {
    let mut cases: Vec<InterventionCase> = read_jsonl(&a.cases)?;
    let generated: BTreeMap<String, String> =
        read_outputs(&a.generated)?.into_iter().map(|o| (o.sample_id, o.summary)).collect();
    let stop = match &a.stopwords {
        Some(p) => StopWords::parse(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
        None => StopWords::builtin(),
    };
    let missing: Vec<&str> =
        cases.iter().filter(|c| !generated.contains_key(&c.case_id)).map(|c| c.case_id.as_str()).collect();
    if !missing.is_empty() {
        bail!("no generated summary for case(s): {}", missing.join(", "));
    }
    for c in &mut cases {
        c.outcome = Some(classify_intervention(&generated[&c.case_id], c.old_entity.as_deref(), &c.new_entity, &stop));
    }
    if let Some(p) = &a.out {
        write_jsonl(p, &cases)?;
    }
    let outcomes: Vec<_> = cases.iter().filter_map(|c| c.outcome).collect();
    let s = score_outcomes(&outcomes);
    print_json(&json!({
        "cases": s.total,
        "correct": s.correct,
        "skipped": s.skipped,
        "incorrect": s.incorrect,
        "correct%": s.correct_pct,
        "skipped%": s.skipped_pct,
        "incorrect%": s.incorrect_pct,
    }))
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Index(a) => index(a),
        Command::Overlap(a) => overlap(a),
        Command::Partition(a) => partition_cmd(a),
        Command::Select(a) => select(a),
        Command::Summarize(a) => summarize(a),
        Command::Pseudo(a) => pseudo(a),
        Command::Metrics(a) => metrics(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Intervene(a) => intervene(a),
        Command::InterveneScore(a) => intervene_score(a),
    }
}

/// Parse `argv` (config file first, then flags) and run.
pub fn main_with(argv: Vec<String>) -> Result<()> {
    let argv = expand_args(argv)?;
    let cli = Cli::parse_from(argv);
    run(&cli)
}
