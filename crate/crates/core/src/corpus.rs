//! Samples, datasets, tokenization and sentence segmentation.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use hashbrown::HashSet;
use serde::{Deserialize, Serialize};

use crate::hash::Fingerprint;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "validation" | "valid" | "dev" => Ok(Split::Validation),
            "test" => Ok(Split::Test),
            other => Err(Error::InvalidArgument(format!("unknown split {other:?}"))),
        }
    }
}

/// One `(id, document, summary)` record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub id: String,
    pub document: String,
    pub summary: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, String>,
    /// Set when the record was accepted in lenient mode despite an empty summary.
    #[serde(default, skip_serializing_if = "core::ops::Not::not")]
    pub flagged: bool,
}

impl Sample {
    pub fn new(id: impl Into<String>, document: impl Into<String>, summary: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            document: document.into(),
            summary: summary.into(),
            meta: BTreeMap::new(),
            flagged: false,
        }
    }
}

/// An ordered, id-unique collection of samples. Order is file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub split: Split,
    samples: Vec<Sample>,
}

impl Dataset {
    /// Validates id uniqueness and non-emptiness. The error for a duplicate
    /// names the 1-based position of the second occurrence.
    pub fn new(name: impl Into<String>, split: Split, samples: Vec<Sample>) -> Result<Self> {
        {
            let mut seen = HashSet::with_capacity_and_hasher(samples.len(), rustc_hash::FxBuildHasher);
            for (pos, sample) in samples.iter().enumerate() {
                if sample.id.is_empty() {
                    return Err(Error::Validation(format!("record {}: empty id", pos + 1)));
                }
                if !seen.insert(sample.id.as_str()) {
                    return Err(Error::Validation(format!("record {}: duplicate id {:?}", pos + 1, sample.id)));
                }
            }
        }
        Ok(Self { name: name.into(), split, samples })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Sample> {
        self.samples.iter().find(|s| s.id == id)
    }

    /// Map from id to position.
    pub fn index(&self) -> BTreeMap<&str, usize> {
        self.samples.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect()
    }

    /// A new dataset holding the samples whose ids are listed, in list order.
    pub fn subset(&self, ids: &[String]) -> Result<Self> {
        let index = self.index();
        let mut samples = Vec::with_capacity(ids.len());
        for id in ids {
            let pos = index.get(id.as_str()).ok_or_else(|| Error::Validation(format!("unknown id {id:?}")))?;
            samples.push(self.samples[*pos].clone());
        }
        Dataset::new(self.name.clone(), self.split, samples)
    }
}

/// Tokens of a text plus the byte span each came from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSeq {
    pub tokens: Vec<String>,
    /// `(byte offset, byte length)` into the tokenized text.
    pub spans: Vec<(usize, usize)>,
}

impl TokenSeq {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Word tokenizer: maximal runs of Unicode letters and digits, where a single
/// apostrophe between two letters stays inside the token. Everything else
/// separates tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tokenizer {
    /// Keep the original case instead of lowercasing.
    pub case_sensitive: bool,
}

impl Tokenizer {
    pub const VERSION: &'static str = "lexdiv-word-v1";

    pub fn new(case_sensitive: bool) -> Self {
        Self { case_sensitive }
    }

    /// Fingerprint of the configuration; persisted tables carry it.
    pub fn fingerprint(&self) -> u64 {
        Fingerprint::new().str(Self::VERSION).u64(u64::from(self.case_sensitive)).finish()
    }

    pub fn tokenize(&self, text: &str) -> TokenSeq {
        let mut out = TokenSeq::default();
        for (start, end) in word_spans(text) {
            let raw = &text[start..end];
            let token = if self.case_sensitive { raw.to_owned() } else { fold(raw) };
            out.tokens.push(token);
            out.spans.push((start, end - start));
        }
        out
    }

    /// Tokens only, skipping span bookkeeping.
    pub fn words(&self, text: &str) -> Vec<String> {
        word_spans(text)
            .map(|(s, e)| if self.case_sensitive { text[s..e].to_owned() } else { fold(&text[s..e]) })
            .collect()
    }
}

/// Case-folded tokenization with the default configuration.
pub fn tokenize(text: &str) -> TokenSeq {
    Tokenizer::default().tokenize(text)
}

fn fold(s: &str) -> String {
    if s.is_ascii() {
        s.to_ascii_lowercase()
    } else {
        s.chars().flat_map(char::to_lowercase).collect()
    }
}

/// Byte spans of word tokens.
pub(crate) fn word_spans(text: &str) -> impl Iterator<Item = (usize, usize)> + '_ {
    let mut chars = text.char_indices().peekable();
    core::iter::from_fn(move || {
        // skip separators
        let (start, first) = loop {
            let (i, c) = chars.next()?;
            if c.is_alphanumeric() {
                break (i, c);
            }
        };
        let mut end = start + first.len_utf8();
        let mut prev = first;
        loop {
            match chars.peek().copied() {
                Some((i, c)) if c.is_alphanumeric() => {
                    chars.next();
                    end = i + c.len_utf8();
                    prev = c;
                }
                Some((i, c)) if is_apostrophe(c) && prev.is_alphabetic() => {
                    // need a letter right after the apostrophe
                    let next = text[i + c.len_utf8()..].chars().next();
                    match next {
                        Some(n) if n.is_alphabetic() => {
                            chars.next();
                            prev = c;
                        }
                        _ => break,
                    }
                }
                _ => break,
            }
        }
        Some((start, end))
    })
}

/// Abbreviations that never end a sentence when followed by `.`.
pub const DEFAULT_ABBREVIATIONS: &[&str] = &[
    "Mr", "Mrs", "Ms", "Dr", "Prof", "St", "Sr", "Jr", "U.S", "U.K", "Gen", "Gov", "Sen", "Rep", "Lt", "Col", "Sgt",
    "Capt", "Rev", "Mt", "No", "vs", "etc", "e.g", "i.e", "Inc", "Ltd", "Co", "Corp", "Jan", "Feb", "Mar", "Apr",
    "Aug", "Sept", "Sep", "Oct", "Nov", "Dec",
];

/// Rule-based sentence segmenter.
///
/// A boundary follows a run of `.`, `!` or `?` (plus any closing quotes or
/// brackets) when the next non-space character is an uppercase letter or a
/// digit, possibly behind opening quotes. A `.` directly after a listed
/// abbreviation is not a boundary.
#[derive(Debug, Clone)]
pub struct SentenceSplitter {
    abbreviations: Vec<String>,
}

impl Default for SentenceSplitter {
    fn default() -> Self {
        Self::with_abbreviations(DEFAULT_ABBREVIATIONS.iter().map(|s| (*s).to_string()))
    }
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '\u{201c}' | '\u{2018}')
}

impl SentenceSplitter {
    pub fn with_abbreviations(abbreviations: impl IntoIterator<Item = String>) -> Self {
        let mut abbreviations: Vec<String> = abbreviations
            .into_iter()
            .map(|a| a.trim().trim_end_matches('.').to_string())
            .filter(|a| !a.is_empty())
            .collect();
        abbreviations.sort();
        abbreviations.dedup();
        Self { abbreviations }
    }

    pub fn abbreviations(&self) -> &[String] {
        &self.abbreviations
    }

    fn is_abbreviation(&self, text: &str, dot: usize) -> bool {
        let before = &text[..dot];
        let word_start =
            before.char_indices().rev().find(|(_, c)| c.is_whitespace()).map_or(0, |(i, c)| i + c.len_utf8());
        let word = before[word_start..].trim_start_matches(is_opener);
        !word.is_empty() && self.abbreviations.binary_search_by(|a| a.as_str().cmp(word)).is_ok()
    }

    /// Byte ranges of the sentences, trimmed of surrounding whitespace.
    pub fn sentence_spans(&self, text: &str) -> Vec<(usize, usize)> {
        let mut spans = Vec::new();
        let mut start = 0;
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut k = 0;
        while k < chars.len() {
            let (i, c) = chars[k];
            if !is_terminator(c) {
                k += 1;
                continue;
            }
            let abbrev_dot = c == '.' && self.is_abbreviation(text, i);
            let mut j = k;
            while j + 1 < chars.len() && is_terminator(chars[j + 1].1) {
                j += 1;
            }
            while j + 1 < chars.len() && is_closer(chars[j + 1].1) {
                j += 1;
            }
            let end = chars[j].0 + chars[j].1.len_utf8();
            let mut w = j + 1;
            let mut saw_space = false;
            while w < chars.len() && chars[w].1.is_whitespace() {
                saw_space = true;
                w += 1;
            }
            while w < chars.len() && is_opener(chars[w].1) {
                w += 1;
            }
            let next_ok = w < chars.len() && (chars[w].1.is_uppercase() || chars[w].1.is_numeric());
            // a lone abbreviation dot never splits; "etc. etc!" style runs still can
            if saw_space && next_ok && !(abbrev_dot && j == k) {
                push_trimmed(text, start, end, &mut spans);
                start = end;
            }
            k = j + 1;
        }
        push_trimmed(text, start, text.len(), &mut spans);
        spans
    }

    pub fn split<'t>(&self, text: &'t str) -> Vec<&'t str> {
        self.sentence_spans(text).into_iter().map(|(s, e)| &text[s..e]).collect()
    }
}

fn push_trimmed(text: &str, start: usize, end: usize, spans: &mut Vec<(usize, usize)>) {
    let piece = &text[start..end];
    let lead = piece.len() - piece.trim_start().len();
    let trimmed = piece.trim();
    if !trimmed.is_empty() {
        spans.push((start + lead, start + lead + trimmed.len()));
    }
}

/// Sentence split with the default abbreviation list.
pub fn split_sentences(text: &str) -> Vec<&str> {
    SentenceSplitter::default().split(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn toks(text: &str) -> Vec<String> {
        tokenize(text).tokens
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(toks("The cat sat."), vec!["the", "cat", "sat"]);
        assert_eq!(toks("Don't stop, Jan-6!"), vec!["don't", "stop", "jan", "6"]);
        assert!(toks("").is_empty());
    }

    #[test]
    fn apostrophe_rules() {
        assert_eq!(toks("'tis rock'n'roll''"), vec!["tis", "rock'n'roll"]);
        assert_eq!(toks("players' 90's a''b"), vec!["players", "90", "s", "a", "b"]);
        assert_eq!(toks("it\u{2019}s"), vec!["it\u{2019}s"]);
    }

    #[test]
    fn case_sensitive_keeps_case() {
        let t = Tokenizer::new(true).tokenize("Belfast GIANTS");
        assert_eq!(t.tokens, vec!["Belfast", "GIANTS"]);
        assert_ne!(Tokenizer::new(true).fingerprint(), Tokenizer::new(false).fingerprint());
    }

    #[test]
    fn unicode_letters_and_digits() {
        assert_eq!(toks("Ärger über Zürich, 東京 ٣"), vec!["ärger", "über", "zürich", "東京", "٣"]);
    }

    #[test]
    fn sentence_examples() {
        assert_eq!(split_sentences("A b. C d."), vec!["A b.", "C d."]);
        assert_eq!(split_sentences("Dr. Smith left. He ran."), vec!["Dr. Smith left.", "He ran."]);
        assert_eq!(split_sentences("no terminator here"), vec!["no terminator here"]);
    }

    #[test]
    fn sentence_edge_cases() {
        assert!(split_sentences("   ").is_empty());
        assert_eq!(split_sentences("Wait!? \"Yes.\" 3 went."), vec!["Wait!?", "\"Yes.\"", "3 went."]);
        assert_eq!(split_sentences("in the U.S. Army today"), vec!["in the U.S. Army today"]);
        assert_eq!(split_sentences("it was 3.5 m. then"), vec!["it was 3.5 m. then"]);
    }

    #[test]
    fn custom_abbreviations() {
        let s = SentenceSplitter::with_abbreviations(vec!["Fig.".to_string()]);
        assert_eq!(s.split("See Fig. Two. Done."), vec!["See Fig. Two.", "Done."]);
        assert_eq!(s.split("Dr. Who."), vec!["Dr.", "Who."]);
    }

    #[test]
    fn dataset_rejects_duplicates() {
        let samples = vec![
            Sample::new("a", "d", "s"),
            Sample::new("x", "d", "s"),
            Sample::new("b", "d", "s"),
            Sample::new("c", "d", "s"),
            Sample::new("x", "d", "s"),
        ];
        let err = Dataset::new("t", Split::Train, samples).unwrap_err();
        assert_eq!(err, Error::Validation("record 5: duplicate id \"x\"".into()));
    }

    #[test]
    fn subset_keeps_list_order() {
        let ds = Dataset::new(
            "t",
            Split::Train,
            vec![Sample::new("a", "", "1"), Sample::new("b", "", "2"), Sample::new("c", "", "3")],
        )
        .unwrap();
        let sub = ds.subset(&["c".into(), "a".into()]).unwrap();
        assert_eq!(sub.samples().iter().map(|s| s.id.as_str()).collect::<Vec<_>>(), ["c", "a"]);
        assert!(ds.subset(&["zz".into()]).is_err());
    }

    fn squash(s: &str) -> String {
        s.split_whitespace().collect::<Vec<_>>().join(" ")
    }

    proptest! {
        #[test]
        fn token_spans_round_trip(text in "[ a-zA-Z0-9'.,!?\\-ÄéØ\u{2019}]{0,60}") {
            let seq = tokenize(&text);
            prop_assert_eq!(seq.tokens.len(), seq.spans.len());
            for (tok, &(off, len)) in seq.tokens.iter().zip(&seq.spans) {
                let raw = &text[off..off + len];
                prop_assert_eq!(&fold(raw), tok);
                prop_assert!(!tok.is_empty());
                prop_assert!(!tok.chars().any(char::is_whitespace));
            }
            prop_assert_eq!(tokenize(&text), seq);
        }

        #[test]
        fn sentences_reassemble_input(text in "[ a-zA-Z0-9.!?\"]{0,80}") {
            let joined = split_sentences(&text).join(" ");
            prop_assert_eq!(squash(&joined), squash(&text));
        }
    }
}
