use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Tokenizer};
use crate::metrics::{entity_present, token_set, EntityExtractor, EntityMention, StopWords, TextField};
use crate::rng::{shuffle, SplitMix64};
use crate::{Error, Result};

pub const DEFAULT_TEMPLATE: &str = "{entity} is confirmed.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterventionMode {
    Substitute,
    Add,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Correct,
    Skipped,
    Incorrect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterventionCase {
    pub case_id: String,
    pub sample_id: String,
    pub mode: InterventionMode,
    pub old_entity: Option<String>,
    pub new_entity: String,
    pub edited_document: String,
    /// `None` until scored.
    #[serde(default)]
    pub outcome: Option<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedIntervention {
    pub sample_id: String,
    pub entity: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InterventionPlan {
    pub cases: Vec<InterventionCase>,
    pub skipped: Vec<SkippedIntervention>,
    /// Entities eligible for sampling, most frequent first.
    pub pool_size: usize,
}

#[derive(Debug, Clone)]
pub struct InterventionConfig {
    pub count: usize,
    pub seed: u64,
    /// Most frequent training-summary entities considered.
    pub top_entities: usize,
    pub per_document: usize,
    /// Add-mode sentence; `{entity}` is replaced by the new value.
    pub template: String,
    /// Curated replacements keyed by entity key (case-folded content tokens).
    pub replacements: BTreeMap<String, Vec<String>>,
}

impl Default for InterventionConfig {
    fn default() -> Self {
        Self {
            count: 50,
            seed: 0,
            top_entities: 2000,
            per_document: 2,
            template: DEFAULT_TEMPLATE.to_string(),
            replacements: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EntityClass {
    Year,
    Season,
    Number,
    Name,
}

fn digit_run(s: &str) -> usize {
    s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len())
}

/// Pattern class of an entity surface.
pub fn entity_class(surface: &str) -> EntityClass {
    let s = surface.trim();
    let lead = digit_run(s);
    if lead == 4 {
        let rest = &s[4..];
        if rest.is_empty() {
            return EntityClass::Year;
        }
        let mut chars = rest.chars();
        if matches!(chars.next(), Some('-' | '/' | '\u{2013}')) {
            let tail = chars.as_str();
            let n = digit_run(tail);
            if n == 2 || n == 4 {
                return EntityClass::Season;
            }
        }
    }
    if s.chars().find(|c| !matches!(c, '£' | '$' | '€' | '¥')).is_some_and(|c| c.is_ascii_digit()) {
        EntityClass::Number
    } else {
        EntityClass::Name
    }
}

/// Replacement values derived from the entity itself, most plausible first.
fn synthesized(surface: &str, class: EntityClass) -> Vec<String> {
    let s = surface.trim();
    match class {
        EntityClass::Year => {
            let year: i64 = s.parse().unwrap_or(2000);
            [200, -200, 100, -100, 50, -50, 10, -10]
                .iter()
                .map(|d| year + d)
                .filter(|y| (1000..=9999).contains(y))
                .map(|y| y.to_string())
                .collect()
        }
        EntityClass::Season => {
            let start: i64 = s[..4].parse().unwrap_or(2000);
            let sep = s[4..].chars().next().unwrap_or('-');
            let long = digit_run(&s[4 + sep.len_utf8()..]) == 4;
            let tail = &s[4 + sep.len_utf8() + if long { 4 } else { 2 }..];
            [1, -1, 2, -2, 5, -5]
                .iter()
                .map(|d| {
                    let y = start + d;
                    let end = if long { format!("{}", y + 1) } else { format!("{:02}", (y + 1) % 100) };
                    format!("{y}{sep}{end}{tail}")
                })
                .collect()
        }
        EntityClass::Number => {
            let start = s.find(|c: char| c.is_ascii_digit()).unwrap_or(0);
            let len = digit_run(&s[start..]);
            let Ok(v) = s[start..start + len].parse::<u64>() else {
                return Vec::new();
            };
            [v.saturating_mul(2), v + 1, v + 10]
                .iter()
                .filter(|n| **n != v)
                .map(|n| format!("{}{}{}", &s[..start], n, &s[start + len..]))
                .collect()
        }
        EntityClass::Name => Vec::new(),
    }
}

/// Outcome of one generated summary for a case.
pub fn classify_intervention(generated: &str, old_entity: Option<&str>, new_entity: &str, stop: &StopWords) -> Outcome {
    if old_entity.is_some_and(|old| entity_present(old, generated, stop)) {
        Outcome::Incorrect
    } else if entity_present(new_entity, generated, stop) {
        Outcome::Correct
    } else {
        Outcome::Skipped
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InterventionSummary {
    pub total: usize,
    pub correct: usize,
    pub skipped: usize,
    pub incorrect: usize,
    pub correct_pct: f64,
    pub skipped_pct: f64,
    pub incorrect_pct: f64,
}

pub fn score_outcomes(outcomes: &[Outcome]) -> InterventionSummary {
    let count = |o: Outcome| outcomes.iter().filter(|x| **x == o).count();
    let total = outcomes.len();
    let pct = |n: usize| {
        if total == 0 {
            0.0
        } else {
            100.0 * n as f64 / total as f64
        }
    };
    let (correct, skipped, incorrect) = (count(Outcome::Correct), count(Outcome::Skipped), count(Outcome::Incorrect));
    InterventionSummary {
        total,
        correct,
        skipped,
        incorrect,
        correct_pct: pct(correct),
        skipped_pct: pct(skipped),
        incorrect_pct: pct(incorrect),
    }
}

/// Byte ranges of every non-overlapping contiguous occurrence of `needle` in the document tokens.
fn occurrences(doc: &str, needle: &[String]) -> Vec<(usize, usize)> {
    let seq = Tokenizer::default().tokenize(doc);
    let mut out = Vec::new();
    let mut i = 0;
    while !needle.is_empty() && i + needle.len() <= seq.tokens.len() {
        if seq.tokens[i..i + needle.len()] == *needle {
            let (start, _) = seq.spans[i];
            let (last, len) = seq.spans[i + needle.len() - 1];
            out.push((start, last + len));
            i += needle.len();
        } else {
            i += 1;
        }
    }
    out
}

fn substitute(doc: &str, mention: &EntityMention, new: &str) -> Option<String> {
    let full = Tokenizer::default().words(&mention.surface);
    let spans =
        [full, mention.content_tokens.clone()].iter().map(|needle| occurrences(doc, needle)).find(|s| !s.is_empty())?;
    let mut out = String::with_capacity(doc.len() + new.len());
    let mut cursor = 0;
    for (s, e) in spans {
        out.push_str(&doc[cursor..s]);
        out.push_str(new);
        cursor = e;
    }
    out.push_str(&doc[cursor..]);
    Some(out)
}

struct Dictionary {
    by_class: BTreeMap<EntityClass, Vec<EntityMention>>,
}

impl Dictionary {
    fn candidates(
        &self,
        mention: &EntityMention,
        document: &str,
        config: &InterventionConfig,
        rng: &mut SplitMix64,
        stop: &StopWords,
    ) -> Vec<String> {
        let key = mention.key();
        let doc_tokens = token_set(document);
        let fresh = |value: &str| {
            EntityMention::new(value, None, stop).is_some_and(|m| m.key() != key && !m.present_in(&doc_tokens))
        };
        if let Some(list) = config.replacements.get(&key) {
            return list.iter().filter(|v| fresh(v)).cloned().collect();
        }
        let class = entity_class(&mention.surface);
        let mut drawn: Vec<&EntityMention> = self.by_class.get(&class).map(|v| v.iter().collect()).unwrap_or_default();
        if class == EntityClass::Name {
            let width = mention.content_tokens.len();
            drawn.sort_by_key(|m| m.content_tokens.len() != width);
            let same = drawn.iter().take_while(|m| m.content_tokens.len() == width).count();
            let (head, tail) = drawn.split_at_mut(same);
            shuffle(head, rng);
            shuffle(tail, rng);
        } else {
            shuffle(&mut drawn, rng);
        }
        let mut out: Vec<String> = Vec::new();
        let mut seen = BTreeSet::new();
        for value in drawn.iter().map(|m| m.surface.clone()).chain(synthesized(&mention.surface, class)) {
            if fresh(&value) && seen.insert(value.to_lowercase()) {
                out.push(value);
            }
        }
        out
    }
}

/// Build edited test documents around frequently remembered entities.
///
/// Training-summary entities are ranked by the number of summaries mentioning
/// them; the top `top_entities` that also occur in some test reference
/// summary form the pool, and `count` of them are drawn with `seed`. Each
/// drawn entity picks a test sample whose reference mentions it; if the
/// source document contains the entity its occurrences are replaced
/// (substitute), otherwise a templated sentence carrying a new value is
/// prepended (add).
pub fn make_interventions<E: EntityExtractor + ?Sized>(
    test: &Dataset,
    train: &Dataset,
    extractor: &E,
    config: &InterventionConfig,
) -> Result<InterventionPlan> {
    if config.count == 0 {
        return Err(Error::InvalidArgument("intervention count must be at least 1".into()));
    }
    let stop = extractor.stop_words();

    let mut freq: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut by_class: BTreeMap<EntityClass, BTreeMap<String, EntityMention>> = BTreeMap::new();
    let mut remember = |m: &EntityMention| {
        by_class.entry(entity_class(&m.surface)).or_default().entry(m.key()).or_insert_with(|| m.clone());
    };
    for (order, s) in train.samples().iter().enumerate() {
        for m in extractor.extract(&s.id, TextField::Summary, &s.summary)? {
            remember(&m);
            freq.entry(m.key()).or_insert((0, order)).0 += 1;
        }
    }
    let mut ranked: Vec<(String, usize, usize)> = freq.into_iter().map(|(k, (c, o))| (k, c, o)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    ranked.truncate(config.top_entities);

    let mut holders: BTreeMap<String, Vec<(usize, EntityMention)>> = BTreeMap::new();
    for (i, s) in test.samples().iter().enumerate() {
        for m in extractor.extract(&s.id, TextField::Summary, &s.summary)? {
            remember(&m);
            holders.entry(m.key()).or_default().push((i, m));
        }
        for m in extractor.extract(&s.id, TextField::Document, &s.document).unwrap_or_default() {
            remember(&m);
        }
    }
    let pool: Vec<&str> = ranked.iter().map(|r| r.0.as_str()).filter(|k| holders.contains_key(*k)).collect();
    if pool.len() < config.count {
        return Err(Error::EntityPoolTooSmall { pool: pool.len(), requested: config.count });
    }
    let dictionary =
        Dictionary { by_class: by_class.into_iter().map(|(c, m)| (c, m.into_values().collect())).collect() };

    let mut rng = SplitMix64::new(config.seed);
    let mut chosen = pool.clone();
    shuffle(&mut chosen, &mut rng);
    chosen.truncate(config.count);

    let mut plan = InterventionPlan { pool_size: pool.len(), ..Default::default() };
    for key in chosen {
        let docs = &holders[key];
        let (idx, mention) = &docs[rng.below(docs.len() as u64) as usize];
        let sample = &test.samples()[*idx];
        let skip = |reason: &str| SkippedIntervention {
            sample_id: sample.id.clone(),
            entity: mention.surface.clone(),
            reason: reason.to_string(),
        };
        let doc_tokens = token_set(&sample.document);
        let in_source = mention.present_in(&doc_tokens);
        if in_source && substitute(&sample.document, mention, "").is_none() {
            plan.skipped.push(skip("entity tokens not contiguous in document"));
            continue;
        }
        let values = dictionary.candidates(mention, &sample.document, config, &mut rng, stop);
        if values.len() < config.per_document {
            plan.skipped.push(skip(&format!(
                "{} replacement value(s) available, {} wanted",
                values.len(),
                config.per_document
            )));
        }
        for new in values.into_iter().take(config.per_document) {
            let (mode, edited) = if in_source {
                let edited = substitute(&sample.document, mention, &new).unwrap_or_default();
                (InterventionMode::Substitute, edited)
            } else {
                let sentence = config.template.replace("{entity}", &new);
                (InterventionMode::Add, format!("{sentence} {}", sample.document))
            };
            plan.cases.push(InterventionCase {
                case_id: format!("case-{:04}", plan.cases.len()),
                sample_id: sample.id.clone(),
                mode,
                old_entity: Some(mention.surface.clone()),
                new_entity: new,
                edited_document: edited,
                outcome: None,
            });
        }
    }
    Ok(plan)
}
