//! Entity extraction and the recall / precision / remembered-entity metrics.
//!
//! An entity is reduced to its case-folded content tokens (stop words
//! removed). It is *present in* a text when every content token occurs among
//! that text's case-folded tokens.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{word_spans, SentenceSplitter, Tokenizer};
use crate::{Error, Result};

const BUILTIN_STOP_WORDS: &str = include_str!("../../data/stopwords_en.txt");

/// Stop-word list; lines starting with `#` are comments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWords {
    words: BTreeSet<String>,
}

impl StopWords {
    pub const BUILTIN_VERSION: &'static str = "en-v1";

    pub fn builtin() -> Self {
        Self::parse(BUILTIN_STOP_WORDS)
    }

    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .flat_map(|l| Tokenizer::default().words(l))
            .collect();
        Self { words }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl Default for StopWords {
    fn default() -> Self {
        Self::builtin()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntityMention {
    pub surface: String,
    pub content_tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

impl EntityMention {
    /// `None` when nothing but stop words remain.
    pub fn new(surface: &str, kind: Option<&str>, stop: &StopWords) -> Option<Self> {
        let content_tokens: Vec<String> =
            Tokenizer::default().words(surface).into_iter().filter(|t| !stop.contains(t)).collect();
        if content_tokens.is_empty() {
            return None;
        }
        Some(Self { surface: surface.to_string(), content_tokens, kind: kind.map(str::to_string) })
    }

    /// Space-joined content tokens; mentions with the same key are the same entity.
    pub fn key(&self) -> String {
        self.content_tokens.join(" ")
    }

    pub fn present_in(&self, tokens: &BTreeSet<String>) -> bool {
        self.content_tokens.iter().all(|t| tokens.contains(t))
    }
}

/// Case-folded token set of a text.
pub fn token_set(text: &str) -> BTreeSet<String> {
    Tokenizer::default().words(text).into_iter().collect()
}

/// Whether the entity string (after stop-word removal) is present in `text`.
/// An entity made only of stop words is never present.
pub fn entity_present(entity: &str, text: &str, stop: &StopWords) -> bool {
    EntityMention::new(entity, None, stop).is_some_and(|m| m.present_in(&token_set(text)))
}

/// Dedupe by key, keep the first surface, sort by key.
fn into_set(mentions: Vec<EntityMention>) -> Vec<EntityMention> {
    let mut by_key: BTreeMap<String, EntityMention> = BTreeMap::new();
    for m in mentions {
        by_key.entry(m.key()).or_insert(m);
    }
    by_key.into_values().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextField {
    Document,
    Summary,
    Generated,
}

impl TextField {
    pub fn as_str(self) -> &'static str {
        match self {
            TextField::Document => "document",
            TextField::Summary => "summary",
            TextField::Generated => "generated",
        }
    }
}

impl fmt::Display for TextField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TextField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "document" => Ok(TextField::Document),
            "summary" => Ok(TextField::Summary),
            "generated" => Ok(TextField::Generated),
            other => Err(Error::InvalidArgument(format!("unknown field {other:?}"))),
        }
    }
}

pub trait EntityExtractor {
    /// Entity set of `text`, which is field `field` of sample `sample_id`.
    fn extract(&self, sample_id: &str, field: TextField, text: &str) -> Result<Vec<EntityMention>>;

    fn stop_words(&self) -> &StopWords;
}

/// Rule-based stand-in for a statistical tagger.
///
/// Finds (a) maximal runs of capitalized words separated only by whitespace,
/// dropping a lone sentence-initial word unless the same word also appears
/// capitalized mid-sentence somewhere in the text, and (b) numeric
/// expressions: number, ordinal, year, money and percent token runs.
#[derive(Debug, Clone, Default)]
pub struct HeuristicExtractor {
    pub stop: StopWords,
    pub splitter: SentenceSplitter,
}

const SCALE_WORDS: &[&str] =
    &["million", "billion", "trillion", "thousand", "hundred", "percent", "per", "cent", "bn", "m"];
const NUMERIC_SUFFIXES: &[&str] = &["st", "nd", "rd", "th", "s", "m", "bn", "k", "km", "kg", "pm", "am"];

fn is_numeric_token(tok: &str) -> bool {
    let digits_end = tok.find(|c: char| !c.is_numeric()).unwrap_or(tok.len());
    if digits_end == 0 {
        return false;
    }
    let suffix = &tok[digits_end..];
    suffix.is_empty() || NUMERIC_SUFFIXES.iter().any(|s| suffix.eq_ignore_ascii_case(s))
}

fn is_capitalized(tok: &str) -> bool {
    tok.chars().next().is_some_and(char::is_uppercase)
}

struct Word<'t> {
    start: usize,
    end: usize,
    text: &'t str,
    initial: bool,
}

impl HeuristicExtractor {
    pub fn new(stop: StopWords, splitter: SentenceSplitter) -> Self {
        Self { stop, splitter }
    }

    pub fn extract_text(&self, text: &str) -> Vec<EntityMention> {
        let sentences: Vec<Vec<Word<'_>>> = self
            .splitter
            .sentence_spans(text)
            .into_iter()
            .map(|(s, e)| {
                word_spans(&text[s..e])
                    .enumerate()
                    .map(|(i, (ws, we))| Word {
                        start: s + ws,
                        end: s + we,
                        text: &text[s + ws..s + we],
                        initial: i == 0,
                    })
                    .collect()
            })
            .collect();
        let mid_capitalized: BTreeSet<&str> =
            sentences.iter().flatten().filter(|w| !w.initial && is_capitalized(w.text)).map(|w| w.text).collect();

        let mut out = Vec::new();
        for words in &sentences {
            let mut i = 0;
            while i < words.len() {
                let w = &words[i];
                if is_capitalized(w.text) {
                    let mut j = i;
                    while j + 1 < words.len()
                        && is_capitalized(words[j + 1].text)
                        && gap(text, &words[j], &words[j + 1]).chars().all(char::is_whitespace)
                    {
                        j += 1;
                    }
                    let lone_initial = i == j && w.initial && !mid_capitalized.contains(w.text);
                    if !lone_initial {
                        out.extend(EntityMention::new(&text[w.start..words[j].end], Some("name"), &self.stop));
                    }
                    i = j + 1;
                } else if is_numeric_token(w.text) {
                    let mut j = i;
                    while j + 1 < words.len() {
                        let g = gap(text, &words[j], &words[j + 1]);
                        let next = words[j + 1].text;
                        let joined =
                            !g.is_empty() && g.chars().all(|c| matches!(c, '.' | ',' | '-' | '/' | ':' | '\u{2013}'));
                        let scale = g.chars().all(char::is_whitespace)
                            && SCALE_WORDS.iter().any(|s| next.eq_ignore_ascii_case(s));
                        if (joined && is_numeric_token(next)) || scale {
                            j += 1;
                        } else {
                            break;
                        }
                    }
                    let mut start = w.start;
                    if let Some(c) = text[..start].chars().next_back() {
                        if matches!(c, '£' | '$' | '€' | '¥') {
                            start -= c.len_utf8();
                        }
                    }
                    let mut end = words[j].end;
                    if text[end..].starts_with('%') {
                        end += 1;
                    }
                    out.extend(EntityMention::new(&text[start..end], Some("number"), &self.stop));
                    i = j + 1;
                } else {
                    i += 1;
                }
            }
        }
        into_set(out)
    }
}

fn gap<'t>(text: &'t str, a: &Word<'_>, b: &Word<'_>) -> &'t str {
    &text[a.end..b.start]
}

impl EntityExtractor for HeuristicExtractor {
    fn extract(&self, _sample_id: &str, _field: TextField, text: &str) -> Result<Vec<EntityMention>> {
        Ok(self.extract_text(text))
    }

    fn stop_words(&self) -> &StopWords {
        &self.stop
    }
}

/// Annotations supplied ahead of time, keyed by `(sample id, field)`.
#[derive(Debug, Clone, Default)]
pub struct PrecomputedEntities {
    pub stop: StopWords,
    mentions: BTreeMap<(String, TextField), Vec<String>>,
}

impl PrecomputedEntities {
    pub fn new(stop: StopWords) -> Self {
        Self { stop, mentions: BTreeMap::new() }
    }

    pub fn insert(&mut self, id: impl Into<String>, field: TextField, mentions: Vec<String>) {
        self.mentions.entry((id.into(), field)).or_default().extend(mentions);
    }

    pub fn len(&self) -> usize {
        self.mentions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mentions.is_empty()
    }
}

impl EntityExtractor for PrecomputedEntities {
    fn extract(&self, sample_id: &str, field: TextField, _text: &str) -> Result<Vec<EntityMention>> {
        let raw = self
            .mentions
            .get(&(sample_id.to_string(), field))
            .ok_or_else(|| Error::MissingAnnotations { id: sample_id.to_string(), field: field.as_str() })?;
        Ok(into_set(raw.iter().filter_map(|m| EntityMention::new(m, None, &self.stop)).collect()))
    }

    fn stop_words(&self) -> &StopWords {
        &self.stop
    }
}

/// Which entity set the recall metric divides by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Denominator {
    /// All three metrics are shares of the generated summary's entities.
    #[default]
    Generated,
    /// Recall becomes the share of reference entities that the generated
    /// summary and the source both contain; the other two are unchanged.
    Reference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityMetricRecord {
    pub sample_id: String,
    pub e_rec: Option<f64>,
    pub e_prc: Option<f64>,
    pub e_rem: Option<f64>,
    pub n_gen: usize,
    /// Generated entities present in the reference and in the source.
    pub n_in_ref_and_src: usize,
    /// Generated entities present in the source.
    pub n_in_src: usize,
    /// Generated entities present in the reference but not in the source.
    pub n_in_ref_not_src: usize,
    /// Generated entities present in the reference.
    pub n_in_ref: usize,
    pub gen_entities: Vec<String>,
    pub ref_entities: Vec<String>,
    pub src_entities: Vec<String>,
    pub denominator: Denominator,
}

impl EntityMetricRecord {
    /// False when the generated summary has no entities (values absent).
    pub fn is_defined(&self) -> bool {
        self.e_prc.is_some()
    }

    /// Share of generated entities found in the reference, in percent.
    pub fn percent_in_reference(&self) -> Option<f64> {
        (self.n_gen > 0).then(|| pct(self.n_in_ref, self.n_gen))
    }
}

fn pct(part: usize, whole: usize) -> f64 {
    100.0 * part as f64 / whole as f64
}

/// Entity recall, precision and remembered-entity rate of one generated summary.
pub fn entity_metrics<E: EntityExtractor + ?Sized>(
    sample_id: &str,
    generated: &str,
    reference: &str,
    source: &str,
    extractor: &E,
    denominator: Denominator,
) -> Result<EntityMetricRecord> {
    let gen = extractor.extract(sample_id, TextField::Generated, generated)?;
    let ref_result = extractor.extract(sample_id, TextField::Summary, reference);
    let refs = match (denominator, ref_result) {
        (_, Ok(r)) => r,
        (Denominator::Reference, Err(e)) => return Err(e),
        (Denominator::Generated, Err(_)) => Vec::new(),
    };
    let srcs = extractor.extract(sample_id, TextField::Document, source).unwrap_or_default();

    let ref_tokens = token_set(reference);
    let src_tokens = token_set(source);
    let gen_tokens = token_set(generated);

    let mut n_in_ref_and_src = 0;
    let mut n_in_src = 0;
    let mut n_in_ref_not_src = 0;
    let mut n_in_ref = 0;
    for e in &gen {
        let in_ref = e.present_in(&ref_tokens);
        let in_src = e.present_in(&src_tokens);
        n_in_ref += usize::from(in_ref);
        n_in_src += usize::from(in_src);
        n_in_ref_and_src += usize::from(in_ref && in_src);
        n_in_ref_not_src += usize::from(in_ref && !in_src);
    }
    let n_gen = gen.len();
    let defined = n_gen > 0;
    let e_rec = match denominator {
        Denominator::Generated => defined.then(|| pct(n_in_ref_and_src, n_gen)),
        Denominator::Reference => {
            let hits = refs.iter().filter(|r| r.present_in(&gen_tokens) && r.present_in(&src_tokens)).count();
            (!refs.is_empty()).then(|| pct(hits, refs.len()))
        }
    };
    Ok(EntityMetricRecord {
        sample_id: sample_id.to_string(),
        e_rec,
        e_prc: defined.then(|| pct(n_in_src, n_gen)),
        e_rem: defined.then(|| pct(n_in_ref_not_src, n_gen)),
        n_gen,
        n_in_ref_and_src,
        n_in_src,
        n_in_ref_not_src,
        n_in_ref,
        gen_entities: gen.iter().map(EntityMention::key).collect(),
        ref_entities: refs.iter().map(EntityMention::key).collect(),
        src_entities: srcs.iter().map(EntityMention::key).collect(),
        denominator,
    })
}
