//! Schema files: a flat `key = value` text format.
//!
//! ```text
//! # comment lines start with '#'
//! name      = elec2
//! file      = elec2.csv          # relative to the schema file
//! features  = date, day, period, nswprice, nswdemand
//! label     = class
//! positive  = UP
//! negative  = DOWN               # optional, only used when writing CSV
//! ordinal   = day                # optional, ordinal-categorical columns
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnKind {
    Numeric,
    /// Encoded by order of first appearance: 0, 1, 2, ...
    Ordinal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamSchema {
    pub name: String,
    /// Data file, already resolved against the schema's directory.
    pub file: Option<PathBuf>,
    pub features: Vec<String>,
    pub kinds: Vec<ColumnKind>,
    pub label: String,
    pub positive: String,
    pub negative: Option<String>,
}

fn split_list(v: &str) -> Vec<String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

impl StreamSchema {
    /// A schema with every feature numeric.
    pub fn numeric(name: &str, features: &[&str], label: &str, positive: &str) -> Result<Self> {
        let schema = Self {
            name: name.to_string(),
            file: None,
            features: features.iter().map(|s| s.to_string()).collect(),
            kinds: vec![ColumnKind::Numeric; features.len()],
            label: label.to_string(),
            positive: positive.to_string(),
            negative: None,
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut name = None;
        let mut file = None;
        let mut features = None;
        let mut label = None;
        let mut positive = None;
        let mut negative = None;
        let mut ordinal = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split_once('#').map_or(raw, |(l, _)| l).trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "schema line {}: expected `key = value`",
                    lineno + 1
                ))
            })?;
            let value = value.trim();
            match key.trim() {
                "name" => name = Some(value.to_string()),
                "file" => file = Some(base_dir.join(value)),
                "features" => features = Some(split_list(value)),
                "label" => label = Some(value.to_string()),
                "positive" => positive = Some(value.to_string()),
                "negative" => negative = Some(value.to_string()),
                "ordinal" => ordinal = split_list(value),
                other => {
                    return Err(Error::Config(format!(
                        "schema line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }

        let missing = |k: &str| Error::Config(format!("schema is missing `{k}`"));
        let features = features.ok_or_else(|| missing("features"))?;
        if let Some(bad) = ordinal.iter().find(|o| !features.contains(o)) {
            return Err(Error::Config(format!(
                "ordinal column `{bad}` is not a feature"
            )));
        }
        let kinds = features
            .iter()
            .map(|f| {
                if ordinal.contains(f) {
                    ColumnKind::Ordinal
                } else {
                    ColumnKind::Numeric
                }
            })
            .collect();
        let schema = Self {
            name: name.ok_or_else(|| missing("name"))?,
            file,
            features,
            kinds,
            label: label.ok_or_else(|| missing("label"))?,
            positive: positive.ok_or_else(|| missing("positive"))?,
            negative,
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<()> {
        if self.features.is_empty() {
            return Err(Error::Config("schema declares no feature columns".into()));
        }
        if self.features.contains(&self.label) {
            return Err(Error::Config(format!(
                "label column `{}` is also listed as a feature",
                self.label
            )));
        }
        if self.positive.is_empty() {
            return Err(Error::Config("positive-label token is empty".into()));
        }
        if self.kinds.len() != self.features.len() {
            return Err(Error::Internal(
                "schema kinds/features length mismatch".into(),
            ));
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.features.len()
    }

    /// Token written for the negative class.
    pub fn negative_token(&self) -> String {
        self.negative
            .clone()
            .unwrap_or_else(|| format!("not_{}", self.positive))
    }
}
