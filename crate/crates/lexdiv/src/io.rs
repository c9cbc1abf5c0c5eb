//! JSON-lines reading and writing.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use lexdiv_core::{Dataset, Provenance, Sample, Split, SummarizerOutput};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: malformed JSON: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{path}:{line}: {message}")]
    Validation { path: PathBuf, line: usize, message: String },
    #[error(transparent)]
    Core(#[from] lexdiv_core::Error),
}

pub type Result<T, E = IoError> = std::result::Result<T, E>;

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

/// Non-blank lines with their 1-based line numbers.
fn lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|source| IoError::Io { path: path.to_path_buf(), source })?;
        if !line.trim().is_empty() {
            out.push((i + 1, line));
        }
    }
    Ok(out)
}

/// Parse a corpus file. Every line must be an object with string fields
/// `id`, `document` and `summary`; other fields go into `meta` (non-string
/// values as their JSON text). In lenient mode a missing or empty summary is
/// accepted and the sample is flagged.
pub fn load_jsonl(path: &Path, split: Split, lenient: bool) -> Result<Dataset> {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut samples = Vec::new();
    let mut first_seen: HashMap<String, usize> = HashMap::new();
    for (line_no, line) in lines(path)? {
        let invalid = |message: String| IoError::Validation { path: path.to_path_buf(), line: line_no, message };
        let value: Value = serde_json::from_str(&line).map_err(|e| IoError::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message: e.to_string(),
        })?;
        let Value::Object(mut obj) = value else {
            return Err(invalid("expected a JSON object".into()));
        };
        let mut field = |name: &str, required: bool| -> Result<Option<String>> {
            match obj.remove(name) {
                Some(Value::String(s)) => Ok(Some(s)),
                Some(_) => Err(invalid(format!("field {name} must be a string"))),
                None if required => Err(invalid(format!("missing field {name}"))),
                None => Ok(None),
            }
        };
        let id = field("id", true)?.unwrap_or_default();
        let document = field("document", true)?.unwrap_or_default();
        let summary = field("summary", !lenient)?.unwrap_or_default();
        if id.is_empty() {
            return Err(invalid("empty id".into()));
        }
        if summary.is_empty() && !lenient {
            return Err(invalid("empty summary".into()));
        }
        if let Some(prev) = first_seen.insert(id.clone(), line_no) {
            return Err(invalid(format!("duplicate id {id:?} (first seen on line {prev})")));
        }
        let meta: BTreeMap<String, String> = obj
            .into_iter()
            .map(|(k, v)| {
                let s = match v {
                    Value::String(s) => s,
                    other => other.to_string(),
                };
                (k, s)
            })
            .collect();
        let flagged = summary.is_empty();
        samples.push(Sample { id, document, summary, meta, flagged });
    }
    Ok(Dataset::new(name, split, samples)?)
}

/// Deserialize every non-blank line.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    lines(path)?
        .into_iter()
        .map(|(line_no, line)| {
            serde_json::from_str(&line).map_err(|e| IoError::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_reader(open(path)?).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|source| IoError::Io { path: parent.to_path_buf(), source })?;
    }
    File::create(path).map(BufWriter::new).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

/// One compact JSON record per line.
pub fn write_jsonl_to<T: Serialize, W: Write>(out: &mut W, items: &[T]) -> std::io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut *out, item)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut w = create(path)?;
    write_jsonl_to(&mut w, items).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_pretty(value))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes())
        .and_then(|()| w.flush())
        .map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

/// One id per line.
pub fn write_ids(path: &Path, ids: &[String]) -> Result<()> {
    let mut text = String::with_capacity(ids.iter().map(|s| s.len() + 1).sum());
    for id in ids {
        text.push_str(id);
        text.push('\n');
    }
    write_text(path, &text)
}

pub fn read_ids(path: &Path) -> Result<Vec<String>> {
    Ok(lines(path)?.into_iter().map(|(_, l)| l.trim().to_string()).collect())
}

/// A generated summary, either written by this tool or by an external system
/// (`{"id": .., "summary": ..}` is enough).
#[derive(Debug, Clone, Deserialize)]
struct GeneratedRecord {
    #[serde(alias = "id", alias = "case_id")]
    sample_id: String,
    summary: String,
    #[serde(default)]
    provenance: Option<Provenance>,
}

pub fn read_outputs(path: &Path) -> Result<Vec<SummarizerOutput>> {
    Ok(read_jsonl::<GeneratedRecord>(path)?
        .into_iter()
        .map(|r| SummarizerOutput {
            sample_id: r.sample_id,
            summary: r.summary,
            provenance: r.provenance.unwrap_or(Provenance::External),
        })
        .collect())
}
