use serde::{Deserialize, Serialize};

use super::{Ensemble, WeightRule};
use crate::error::Result;
use crate::learners::WeakLearner;
use crate::loss::clamp_unit;
use crate::types::{BinaryLabel, StepSizeParam};

/// Bounds applied to the running per-instance weight.
pub const WEIGHT_FLOOR: f64 = 1e-9;
pub const WEIGHT_CEIL: f64 = 1e9;

/// Online GentleBoost.
///
/// For every instance the weight restarts at 1. Stage `m` learns the
/// instance with the current weight, is then evaluated on it, and the weight
/// is multiplied by the line-search step for `-y * clamp(f_m(x))`. The
/// single live weight is never renormalised, so after stage `m` it lies in
/// `[(1+alpha)^-m, (1+alpha)^m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineGentleBoost<L> {
    ensemble: Ensemble<L>,
    alpha: StepSizeParam,
    rule: WeightRule,
}

impl<L: WeakLearner> OnlineGentleBoost<L> {
    pub fn new(
        stages: usize,
        alpha: StepSizeParam,
        rule: WeightRule,
        factory: impl Fn() -> L,
    ) -> Result<Self> {
        Ok(Self {
            ensemble: Ensemble::from_factory(stages, factory)?,
            alpha,
            rule,
        })
    }

    pub fn ensemble(&self) -> &Ensemble<L> {
        &self.ensemble
    }

    pub fn alpha(&self) -> StepSizeParam {
        self.alpha
    }

    pub fn rule(&self) -> WeightRule {
        self.rule
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        self.ensemble.score(x)
    }

    pub fn predict(&self, x: &[f64]) -> BinaryLabel {
        self.ensemble.predict(x)
    }

    pub fn learn_one(&mut self, x: &[f64], y: BinaryLabel) -> Result<()> {
        self.learn_one_traced(x, y).map(drop)
    }

    /// Learns one instance and returns the weight before each stage plus the
    /// final weight (`M + 1` entries, the first always 1).
    pub fn learn_one_traced(&mut self, x: &[f64], y: BinaryLabel) -> Result<Vec<f64>> {
        let (alpha, rule) = (self.alpha, self.rule);
        let yv = y.as_f64();
        let mut w = 1.0;
        let mut trace = Vec::with_capacity(self.ensemble.len() + 1);
        trace.push(w);
        for stage in self.ensemble.stages_mut() {
            stage.learn(x, y, w)?;
            let s = clamp_unit(stage.score(x));
            w = (rule.multiplier(alpha, -yv * s) * w).clamp(WEIGHT_FLOOR, WEIGHT_CEIL);
            trace.push(w);
        }
        Ok(trace)
    }

    pub fn reset(&mut self) {
        self.ensemble.reset();
    }
}
