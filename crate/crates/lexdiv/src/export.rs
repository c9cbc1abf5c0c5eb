//! Report files.

use std::path::Path;
use std::str::FromStr;

use lexdiv_core::EvaluationReport;

use crate::io::{to_pretty, write_text, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (csv or json)")),
        }
    }
}

impl Format {
    /// From the file extension; JSON unless it ends in `.csv`.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

pub fn render(report: &EvaluationReport, format: Format) -> String {
    match format {
        Format::Csv => report.to_csv(),
        Format::Json => to_pretty(report),
    }
}

pub fn export(report: &EvaluationReport, format: Format, path: &Path) -> Result<()> {
    write_text(path, &render(report, format))
}
