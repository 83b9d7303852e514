//! Results files: a commented header block, then one CSV row per run.
//!
//! ```text
//! # gentleboost 0.1.0
//! # datasets = ["synthetic:xor-quadrant:n=5000,balance=0.5,noise=0,seed=7"]
//! # ...
//! dataset,model,algorithm,stages,alpha,weight_rule,base,seed,instances,correct,accuracy,roc_auc,wall_time_s
//! ...
//! ```

use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use gentleboost::RunRecord;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const TOOL_VERSION: &str = concat!("gentleboost ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Accuracy,
    RocAuc,
    #[serde(rename = "wall_time_s")]
    WallTime,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Accuracy => "accuracy",
            Self::RocAuc => "roc_auc",
            Self::WallTime => "wall_time_s",
        }
    }

    pub fn of(self, r: &RunRecord) -> Option<f64> {
        match self {
            Self::Accuracy => Some(r.accuracy),
            Self::RocAuc => r.roc_auc,
            Self::WallTime => Some(r.wall_time_s),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accuracy" | "acc" => Ok(Self::Accuracy),
            "roc_auc" | "auc" | "roc-auc" => Ok(Self::RocAuc),
            "wall_time_s" | "time" => Ok(Self::WallTime),
            other => Err(CliError::Config(format!(
                "unknown metric `{other}` (expected accuracy, roc_auc or wall_time_s)"
            ))),
        }
    }
}

/// Writes the header block (tool version plus `config`, one `# ` line
/// each) followed by the CSV table.
pub fn write_results<W: Write>(mut out: W, config: &str, records: &[RunRecord]) -> Result<()> {
    writeln!(out, "# {TOOL_VERSION}")?;
    for line in config.lines() {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(COLUMNS)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const COLUMNS: [&str; 13] = [
    "dataset",
    "model",
    "algorithm",
    "stages",
    "alpha",
    "weight_rule",
    "base",
    "seed",
    "instances",
    "correct",
    "accuracy",
    "roc_auc",
    "wall_time_s",
];

pub fn write_results_file(path: &Path, config: &str, records: &[RunRecord]) -> Result<()> {
    write_results(io::BufWriter::new(File::create(path)?), config, records)
}

pub fn read_results(path: &Path) -> Result<Vec<RunRecord>> {
    let malformed = |reason: String| CliError::Results {
        path: path.to_path_buf(),
        reason,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)?;
    let header = reader.headers()?.clone();
    if header.iter().ne(COLUMNS) {
        return Err(malformed(format!(
            "unexpected columns {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    reader
        .deserialize()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| malformed(format!("row {}: {e}", i + 1))))
        .collect()
}
