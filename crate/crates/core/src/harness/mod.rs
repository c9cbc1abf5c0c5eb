//! The per-partition evaluation protocol: scoring summarizer outputs bin by
//! bin, normalizing against a baseline run, and intervention analysis.

mod intervention;
mod report;

pub use intervention::{
    classify_intervention, entity_class, make_interventions, score_outcomes, EntityClass, InterventionCase,
    InterventionConfig, InterventionMode, InterventionPlan, InterventionSummary, Outcome, SkippedIntervention,
    DEFAULT_TEMPLATE,
};
pub use report::{
    aggregate, evaluate, normalize, score_samples, BinRecord, EvalConfig, EvaluationReport, MetricMeans, NormalizedBin,
    NormalizedView, SampleEvaluation, REPORT_SCHEMA_VERSION,
};
