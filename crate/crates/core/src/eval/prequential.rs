use std::time::Instant as Clock;

use serde::{Deserialize, Serialize};

use super::metrics::roc_auc;
use crate::error::{Error, Result};
use crate::loss::sign_of;
use crate::model::{ModelSpec, OnlineClassifier};
use crate::types::{BinaryLabel, Instance};

/// Raw outcome of a test-then-train pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Prequential {
    /// `(score before learning, true label)` per instance, in stream order.
    pub scores: Vec<(f64, BinaryLabel)>,
    pub correct: usize,
    pub wall_time_s: f64,
}

impl Prequential {
    pub fn instances(&self) -> usize {
        self.scores.len()
    }

    pub fn accuracy(&self) -> f64 {
        self.correct as f64 / self.scores.len() as f64
    }

    /// `None` when the stream held a single class.
    pub fn roc_auc(&self) -> Option<f64> {
        roc_auc(&self.scores).ok()
    }
}

/// Predict every instance first, then learn it. Empty streams are an error.
pub fn prequential_run<C, I>(stream: I, model: &mut C) -> Result<Prequential>
where
    C: OnlineClassifier + ?Sized,
    I: IntoIterator<Item = Result<(Instance, BinaryLabel)>>,
{
    let start = Clock::now();
    let mut scores = Vec::new();
    let mut correct = 0;
    for item in stream {
        let (x, y) = item?;
        let s = model.score(x.features());
        if sign_of(s)? == y {
            correct += 1;
        }
        scores.push((s, y));
        model.learn_one(x.features(), y)?;
    }
    if scores.is_empty() {
        return Err(Error::Usage("prequential run over an empty stream".into()));
    }
    Ok(Prequential {
        scores,
        correct,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// One evaluated (dataset, model, seed) combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset: String,
    pub model: String,
    pub algorithm: String,
    pub stages: usize,
    pub alpha: f64,
    pub weight_rule: String,
    pub base: String,
    pub seed: u64,
    pub instances: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub roc_auc: Option<f64>,
    pub wall_time_s: f64,
}

impl RunRecord {
    pub fn new(dataset: &str, spec: &ModelSpec, run: &Prequential) -> Self {
        Self {
            dataset: dataset.to_string(),
            model: spec.id(),
            algorithm: spec.algorithm.to_string(),
            stages: spec.stages,
            alpha: spec.alpha.alpha(),
            weight_rule: spec.weight_rule.to_string(),
            base: spec.base.to_string(),
            seed: spec.seed,
            instances: run.instances(),
            correct: run.correct,
            accuracy: run.accuracy(),
            roc_auc: run.roc_auc(),
            wall_time_s: run.wall_time_s,
        }
    }

    /// The merge key used when combining result files.
    pub fn key(&self) -> (String, String, u64) {
        (self.dataset.clone(), self.model.clone(), self.seed)
    }

    /// True when both records agree on everything except timing.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        RunRecord {
            wall_time_s: 0.0,
            ..self.clone()
        } == RunRecord {
            wall_time_s: 0.0,
            ..other.clone()
        }
    }
}
