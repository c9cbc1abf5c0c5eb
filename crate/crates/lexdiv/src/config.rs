//! Versioned TOML configuration.
//!
//! ```toml
//! version = 1
//!
//! [overlap]
//! n = 4
//! case-sensitive = true
//!
//! [select]
//! seeds = [1, 2, 3]
//! ```
//!
//! Each table is named after a subcommand and each key after one of its
//! long flags. Values are expanded into arguments placed before the ones
//! given on the command line, so the command line wins.

use std::path::Path;

use toml::{Table, Value};

pub const CONFIG_VERSION: i64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: toml::de::Error },
    #[error("config must declare version = {CONFIG_VERSION}, found {0}")]
    Version(String),
    #[error("config key {0:?} must be a table named after a subcommand")]
    NotATable(String),
    #[error("config key {section}.{key}: unsupported value type")]
    Value { section: String, key: String },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    sections: Table,
}

impl Config {
    pub fn parse(text: &str, path: &str) -> Result<Self, ConfigError> {
        let mut table: Table = text.parse().map_err(|source| ConfigError::Parse { path: path.to_string(), source })?;
        match table.remove("version") {
            Some(Value::Integer(CONFIG_VERSION)) => {}
            Some(other) => return Err(ConfigError::Version(other.to_string())),
            None => return Err(ConfigError::Version("nothing".into())),
        }
        if let Some((k, _)) = table.iter().find(|(_, v)| !v.is_table()) {
            return Err(ConfigError::NotATable(k.clone()));
        }
        Ok(Self { sections: table })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: shown.clone(), source })?;
        Self::parse(&text, &shown)
    }

    /// Arguments for `subcommand`, in key order.
    pub fn args_for(&self, subcommand: &str) -> Result<Vec<String>, ConfigError> {
        let Some(Value::Table(section)) = self.sections.get(subcommand) else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for (key, value) in section {
            let flag = format!("--{key}");
            let scalar = |v: &Value| match v {
                Value::String(s) => Some(s.clone()),
                Value::Integer(i) => Some(i.to_string()),
                Value::Float(f) => Some(f.to_string()),
                _ => None,
            };
            match value {
                Value::Boolean(true) => out.push(flag),
                Value::Boolean(false) => {}
                Value::Array(items) => {
                    let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
                    let parts =
                        parts.ok_or_else(|| ConfigError::Value { section: subcommand.into(), key: key.clone() })?;
                    out.push(flag);
                    out.push(parts.join(","));
                }
                v => {
                    let s =
                        scalar(v).ok_or_else(|| ConfigError::Value { section: subcommand.into(), key: key.clone() })?;
                    out.push(flag);
                    out.push(s);
                }
            }
        }
        Ok(out)
    }
}

/// Splice config arguments into `argv` right after the subcommand name.
/// `--config <path>` (or `--config=<path>`) may appear anywhere.
pub fn expand_args(argv: Vec<String>) -> Result<Vec<String>, ConfigError> {
    let mut config_path = None;
    let mut sub_at = None;
    let mut i = 1;
    while i < argv.len() {
        let a = &argv[i];
        if a == "--config" {
            config_path = argv.get(i + 1).cloned();
            i += 2;
            continue;
        }
        if let Some(p) = a.strip_prefix("--config=") {
            config_path = Some(p.to_string());
        } else if sub_at.is_none() && !a.starts_with('-') {
            sub_at = Some(i);
        }
        i += 1;
    }
    let (Some(path), Some(at)) = (config_path, sub_at) else {
        return Ok(argv);
    };
    let extra = Config::load(Path::new(&path))?.args_for(&argv[at])?;
    let mut out = argv;
    out.splice(at + 1..at + 1, extra);
    Ok(out)
}
