//! Weak learners: incremental, weight-aware, scoring into [-1, 1].

mod adapter;
mod hoeffding;
mod stump;

pub use adapter::classifier_margin_adapter;
pub use hoeffding::{hoeffding_bound, HoeffdingConfig, HoeffdingTree};
pub use stump::{RegressionStump, StumpSplit, Thresholds, DEFAULT_BINS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::BinaryLabel;

/// Behaviour every boosting stage relies on.
///
/// `score` must be a deterministic function of the learn history and stay in
/// [-1, 1]. `learn` with weight 0 must leave the learner untouched.
pub trait WeakLearner {
    fn learn(&mut self, x: &[f64], y: BinaryLabel, weight: f64) -> Result<()>;

    fn score(&self, x: &[f64]) -> f64;

    /// Return to the pristine state, keeping configuration.
    fn reset(&mut self);

    /// Learn a whole weighted sample. Learners that can defer bookkeeping
    /// until the end of the batch override this.
    fn learn_batch(&mut self, batch: &[(&[f64], BinaryLabel, f64)]) -> Result<()> {
        for &(x, y, w) in batch {
            self.learn(x, y, w)?;
        }
        Ok(())
    }
}

pub(crate) fn check_weight(weight: f64) -> Result<()> {
    if weight.is_finite() && weight >= 0.0 {
        Ok(())
    } else {
        Err(Error::Data(format!(
            "learner weight must be finite and non-negative, got {weight}"
        )))
    }
}

pub(crate) fn check_dim(expected: &mut Option<usize>, got: usize) -> Result<()> {
    match *expected {
        None => {
            *expected = Some(got);
            Ok(())
        }
        Some(d) if d == got => Ok(()),
        Some(d) => Err(Error::Data(format!(
            "feature dimension mismatch: learner expects {d}, instance has {got}"
        ))),
    }
}

/// The concrete base learners available to ensembles and the CLI.
///
/// The tree variant reports `2 * P(y = +1 | x) - 1` so it can serve as a
/// real-valued stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BaseLearner {
    Stump(RegressionStump),
    Tree(HoeffdingTree),
}

impl BaseLearner {
    pub fn binned_stump() -> Self {
        Self::Stump(RegressionStump::binned(DEFAULT_BINS))
    }

    pub fn exact_stump() -> Self {
        Self::Stump(RegressionStump::exact())
    }

    pub fn hoeffding_tree() -> Self {
        Self::Tree(HoeffdingTree::default())
    }
}

impl WeakLearner for BaseLearner {
    fn learn(&mut self, x: &[f64], y: BinaryLabel, weight: f64) -> Result<()> {
        match self {
            Self::Stump(s) => s.learn(x, y, weight),
            Self::Tree(t) => t.learn(x, y, weight),
        }
    }

    fn score(&self, x: &[f64]) -> f64 {
        match self {
            Self::Stump(s) => s.score(x),
            Self::Tree(t) => t.score(x),
        }
    }

    fn reset(&mut self) {
        match self {
            Self::Stump(s) => s.reset(),
            Self::Tree(t) => t.reset(),
        }
    }

    fn learn_batch(&mut self, batch: &[(&[f64], BinaryLabel, f64)]) -> Result<()> {
        match self {
            Self::Stump(s) => s.learn_batch(batch),
            Self::Tree(t) => t.learn_batch(batch),
        }
    }
}
