//! Bench configuration: defaults, TOML config file and command-line flags.
//!
//! Every flag has a config-file key of the same name (with `_` for `-`).
//! Precedence is flag, then config file, then built-in default.

use std::fs;
use std::path::{Path, PathBuf};

use gentleboost::{BaseKind, ModelSpec, StepSizeParam, WeightRule, DEFAULT_STAGES};
use serde::{Deserialize, Serialize};

use crate::dataset::DatasetSource;
use crate::error::{CliError, Result};
use crate::results::Metric;

/// Partially specified settings, as read from a config file or from flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub datasets: Option<Vec<String>>,
    pub models: Option<Vec<String>>,
    pub seeds: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
    pub metrics: Option<Vec<Metric>>,
    pub workers: Option<usize>,
    pub impute_missing: Option<bool>,
    pub stages: Option<usize>,
    pub alpha: Option<f64>,
    pub weight_rule: Option<WeightRule>,
    pub base: Option<BaseKind>,
}

impl Settings {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|source| CliError::ConfigFile {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        Settings {
            datasets: self.datasets.or(lower.datasets),
            models: self.models.or(lower.models),
            seeds: self.seeds.or(lower.seeds),
            out: self.out.or(lower.out),
            metrics: self.metrics.or(lower.metrics),
            workers: self.workers.or(lower.workers),
            impute_missing: self.impute_missing.or(lower.impute_missing),
            stages: self.stages.or(lower.stages),
            alpha: self.alpha.or(lower.alpha),
            weight_rule: self.weight_rule.or(lower.weight_rule),
            base: self.base.or(lower.base),
        }
    }
}

/// Fully resolved bench configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchConfig {
    pub datasets: Vec<String>,
    pub models: Vec<String>,
    pub seeds: Vec<u64>,
    pub out: Option<PathBuf>,
    pub metrics: Vec<Metric>,
    pub workers: usize,
    pub impute_missing: bool,
    pub stages: usize,
    pub alpha: f64,
    pub weight_rule: WeightRule,
    pub base: BaseKind,
}

/// A bench configuration whose datasets and models have all been checked.
#[derive(Debug, Clone)]
pub struct Plan {
    pub config: BenchConfig,
    pub datasets: Vec<DatasetSource>,
    pub models: Vec<ModelSpec>,
}

impl BenchConfig {
    /// Merges flags over an optional config file over defaults.
    pub fn resolve(flags: Settings, config_file: Option<&Path>) -> Result<Self> {
        let file = match config_file {
            Some(p) => Settings::from_toml_file(p)?,
            None => Settings::default(),
        };
        let s = flags.over(file);
        Ok(Self {
            datasets: s.datasets.unwrap_or_default(),
            models: s
                .models
                .unwrap_or_else(|| vec!["gentleboost".into(), "htree".into()]),
            seeds: s.seeds.unwrap_or_else(|| vec![0]),
            out: s.out,
            metrics: s
                .metrics
                .unwrap_or_else(|| vec![Metric::Accuracy, Metric::RocAuc]),
            workers: s.workers.unwrap_or_else(default_workers),
            impute_missing: s.impute_missing.unwrap_or(false),
            stages: s.stages.unwrap_or(DEFAULT_STAGES),
            alpha: s.alpha.unwrap_or(StepSizeParam::DEFAULT),
            weight_rule: s.weight_rule.unwrap_or_default(),
            base: s.base.unwrap_or_default(),
        })
    }

    fn model_defaults(&self) -> Result<ModelSpec> {
        // the algorithm is always overwritten by the parsed model id
        Ok(ModelSpec::new(gentleboost::Algorithm::GentleBoost)
            .with_stages(self.stages)
            .with_alpha(StepSizeParam::new(self.alpha)?)
            .with_rule(self.weight_rule)
            .with_base(self.base))
    }

    /// Checks every dataset reference and model spec. Nothing runs unless
    /// this succeeds.
    pub fn plan(self) -> Result<Plan> {
        if self.datasets.is_empty() {
            return Err(CliError::Config("no datasets given".into()));
        }
        if self.models.is_empty() {
            return Err(CliError::Config("no models given".into()));
        }
        if self.seeds.is_empty() {
            return Err(CliError::Config("no seeds given".into()));
        }
        if self.workers == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        let defaults = self.model_defaults()?;
        let models = self
            .models
            .iter()
            .map(|m| {
                ModelSpec::parse_with_defaults(m, &defaults)
                    .map_err(|e| CliError::Config(format!("model `{m}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let datasets = self
            .datasets
            .iter()
            .map(|d| DatasetSource::resolve(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Plan {
            config: self,
            datasets,
            models,
        })
    }

    /// The effective configuration as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("bench config is always representable as TOML")
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
