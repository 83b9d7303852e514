use serde::{Deserialize, Serialize};

use super::Ensemble;
use crate::error::{Error, Result};
use crate::learners::WeakLearner;
use crate::loss::{clamp_unit, exponential_loss};
use crate::types::{BinaryLabel, Instance, Margin};

/// Training diagnostics after one boosting round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundStats {
    pub round: usize,
    /// Mean `exp(-y F(x))` over the training set.
    pub exp_loss: f64,
    /// Fraction of training instances with `sign(F(x)) != y`.
    pub train_error: f64,
    /// Sum of the renormalised weights (1 up to rounding).
    pub weight_sum: f64,
    pub min_weight: f64,
}

#[derive(Debug, Clone)]
pub struct BatchFit<L> {
    pub ensemble: Ensemble<L>,
    pub history: Vec<RoundStats>,
    /// Sample weights after the last round.
    pub weights: Vec<f64>,
}

/// Batch GentleBoost.
///
/// Weights start at `1/N`. Each round fits a fresh stage by weighted least
/// squares on the whole dataset, adds it to `F`, multiplies every weight by
/// `exp(-y_i f_m(x_i))` and renormalises to sum 1.
pub fn batch_fit<L: WeakLearner>(
    data: &[(Instance, BinaryLabel)],
    rounds: usize,
    factory: impl Fn() -> L,
) -> Result<BatchFit<L>> {
    if rounds == 0 {
        return Err(Error::Config("batch_fit needs at least one round".into()));
    }
    let n = data.len();
    if n < 2 {
        return Err(Error::Config(format!("batch_fit needs N >= 2, got {n}")));
    }
    let positives = data
        .iter()
        .filter(|(_, y)| *y == BinaryLabel::Positive)
        .count();
    if positives == 0 || positives == n {
        return Err(Error::Config(
            "batch_fit needs both classes in the training data".into(),
        ));
    }

    let mut weights = vec![1.0 / n as f64; n];
    let mut scores = vec![0.0; n];
    let mut stages = Vec::with_capacity(rounds);
    let mut history = Vec::with_capacity(rounds);

    for round in 1..=rounds {
        let mut stage = factory();
        let batch: Vec<(&[f64], BinaryLabel, f64)> = data
            .iter()
            .zip(&weights)
            .map(|((x, y), &w)| (x.features(), *y, w))
            .collect();
        stage.learn_batch(&batch)?;

        for (i, (x, y)) in data.iter().enumerate() {
            let f = clamp_unit(stage.score(x.features()));
            scores[i] += f;
            weights[i] *= (-y.as_f64() * f).exp();
        }
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::Internal(format!(
                "weight sum degenerated to {sum} in round {round}"
            )));
        }
        weights.iter_mut().for_each(|w| *w /= sum);

        let margins = data
            .iter()
            .zip(&scores)
            .map(|((_, y), &s)| Margin::of(*y, s))
            .collect::<Result<Vec<_>>>()?;
        let errors = data
            .iter()
            .zip(&scores)
            .filter(|((_, y), &s)| crate::loss::sign_of(s).ok() != Some(*y))
            .count();
        history.push(RoundStats {
            round,
            exp_loss: exponential_loss(&margins)?,
            train_error: errors as f64 / n as f64,
            weight_sum: weights.iter().sum(),
            min_weight: weights.iter().copied().fold(f64::INFINITY, f64::min),
        });
        stages.push(stage);
    }

    Ok(BatchFit {
        ensemble: Ensemble::new(stages)?,
        history,
        weights,
    })
}
