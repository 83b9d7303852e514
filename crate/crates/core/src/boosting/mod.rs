//! Boosted and bagged ensembles over [`WeakLearner`] stages.
//!
//! * [`OnlineGentleBoost`] - one pass, per-instance weight driven by the
//!   bounded line-search step of [`step_size`].
//! * [`batch_fit`] - classic GentleBoost over a fixed dataset.
//! * [`OzaBagging`] / [`OzaBoost`] - Poisson-resampling online ensembles
//!   used as comparison baselines.

mod batch;
mod gentle;
mod oza;

pub use batch::{batch_fit, BatchFit, RoundStats};
pub use gentle::OnlineGentleBoost;
pub use oza::{oza_lambda_step, poisson, stage_rng, OzaBagging, OzaBoost, EPSILON_CLAMP};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::WeakLearner;
use crate::loss::{clamp_unit, sign_of};
use crate::types::{BinaryLabel, StepSizeParam};

/// Default number of stages.
pub const DEFAULT_STAGES: usize = 10;

/// How the per-stage weight multiplier is chosen from `-y f_m(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightRule {
    /// `1/(1+alpha)` when `-y f_m(x) > 0`, otherwise `1+alpha`.
    #[default]
    AsPrinted,
    /// Branches swapped: the multiplier exceeds 1 exactly when
    /// `exp(-y f_m(x)) > 1`, i.e. when the stage got the instance wrong.
    ExpConsistent,
}

impl WeightRule {
    pub fn multiplier(self, alpha: StepSizeParam, neg_margin: f64) -> f64 {
        match self {
            Self::AsPrinted => step_size(alpha, neg_margin),
            Self::ExpConsistent => 1.0 / step_size(alpha, neg_margin),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::AsPrinted => "as-printed",
            Self::ExpConsistent => "exp-consistent",
        }
    }
}

impl fmt::Display for WeightRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "as-printed" => Ok(Self::AsPrinted),
            "exp-consistent" => Ok(Self::ExpConsistent),
            other => Err(Error::Config(format!(
                "unknown weight rule `{other}` (expected as-printed or exp-consistent)"
            ))),
        }
    }
}

/// Line-search step: `1/(1+alpha)` if `neg_margin > 0`, else `1+alpha`.
///
/// A zero margin takes the second branch.
pub fn step_size(alpha: StepSizeParam, neg_margin: f64) -> f64 {
    let a = alpha.alpha();
    if neg_margin > 0.0 {
        1.0 / (1.0 + a)
    } else {
        1.0 + a
    }
}

/// Weighted mean of the labels in a region, clamped to [-1, 1].
///
/// This is the Newton step `E[e^{-yF} y | x] / E[e^{-yF} | x]` of the
/// exponential loss when the sample weights carry `e^{-yF}`.
pub fn pointwise_newton_step(sum_wy: f64, sum_w: f64) -> Result<f64> {
    if !(sum_w > 0.0) || !sum_wy.is_finite() {
        return Err(Error::Internal(format!(
            "newton step needs positive weight, got sum_w={sum_w}, sum_wy={sum_wy}"
        )));
    }
    Ok(clamp_unit(sum_wy / sum_w))
}

/// `F(x) = sum_m clamp(f_m(x))` over a fixed, non-empty list of stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble<L> {
    stages: Vec<L>,
}

impl<L: WeakLearner> Ensemble<L> {
    pub fn new(stages: Vec<L>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::Config("an ensemble needs at least one stage".into()));
        }
        Ok(Self { stages })
    }

    pub fn from_factory(stages: usize, factory: impl Fn() -> L) -> Result<Self> {
        Self::new((0..stages).map(|_| factory()).collect())
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn stages(&self) -> &[L] {
        &self.stages
    }

    pub(crate) fn stages_mut(&mut self) -> &mut [L] {
        &mut self.stages
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        self.partial_score(x, self.stages.len())
    }

    /// Score using only the first `upto` stages.
    pub fn partial_score(&self, x: &[f64], upto: usize) -> f64 {
        self.stages
            .iter()
            .take(upto)
            .map(|s| clamp_unit(s.score(x)))
            .sum()
    }

    pub fn predict(&self, x: &[f64]) -> BinaryLabel {
        sign_of(self.score(x)).unwrap_or(BinaryLabel::Positive)
    }

    pub fn reset(&mut self) {
        self.stages.iter_mut().for_each(WeakLearner::reset);
    }
}
