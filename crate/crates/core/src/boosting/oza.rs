//! Oza-Russell online bagging and boosting.
//!
//! Every stage owns its own ChaCha8 stream derived from the ensemble seed
//! (stream id = stage index), so a stage's Poisson draws do not depend on
//! how many draws other stages consumed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Ensemble;
use crate::error::Result;
use crate::learners::WeakLearner;
use crate::loss::sign_of;
use crate::types::BinaryLabel;

/// Error rates are clamped to `[EPSILON_CLAMP, 1 - EPSILON_CLAMP]` before
/// computing vote weights.
pub const EPSILON_CLAMP: f64 = 1e-10;

// Rates above this are drawn as a sum of smaller Poisson variates so the
// inversion never starts from an underflowed exp(-lambda).
const INVERSION_CHUNK: f64 = 100.0;

/// Seeded per-stage generator.
pub fn stage_rng(seed: u64, stage: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stage as u64);
    rng
}

/// Poisson(`lambda`) by CDF inversion: one uniform per chunk of rate.
pub fn poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    if !(lambda > 0.0) {
        return 0;
    }
    let mut remaining = lambda;
    let mut k = 0;
    while remaining > 0.0 {
        let rate = remaining.min(INVERSION_CHUNK);
        remaining -= rate;
        let u: f64 = rng.random();
        let mut p = (-rate).exp();
        let mut cdf = p;
        let mut i = 0u64;
        while u > cdf {
            i += 1;
            p *= rate / i as f64;
            cdf += p;
            if p < f64::MIN_POSITIVE {
                break;
            }
        }
        k += i;
    }
    k
}

/// Online bagging: each stage learns every instance `k ~ Poisson(1)` times.
/// Prediction is a majority vote of stage labels, ties going to `+1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OzaBagging<L> {
    ensemble: Ensemble<L>,
    seed: u64,
    rngs: Vec<ChaCha8Rng>,
}

impl<L: WeakLearner> OzaBagging<L> {
    pub fn new(stages: usize, seed: u64, factory: impl Fn() -> L) -> Result<Self> {
        let ensemble = Ensemble::from_factory(stages, factory)?;
        let rngs = (0..stages).map(|m| stage_rng(seed, m)).collect();
        Ok(Self {
            ensemble,
            seed,
            rngs,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn ensemble(&self) -> &Ensemble<L> {
        &self.ensemble
    }

    /// Mean stage vote in [-1, 1]; its sign is the majority label.
    pub fn score(&self, x: &[f64]) -> f64 {
        let votes: f64 = self
            .ensemble
            .stages()
            .iter()
            .map(|s| sign_of(s.score(x)).map_or(0.0, BinaryLabel::as_f64))
            .sum();
        votes / self.ensemble.len() as f64
    }

    pub fn predict(&self, x: &[f64]) -> BinaryLabel {
        sign_of(self.score(x)).unwrap_or(BinaryLabel::Positive)
    }

    /// Learns one instance; returns the Poisson count drawn for each stage.
    pub fn learn_one(&mut self, x: &[f64], y: BinaryLabel) -> Result<Vec<u64>> {
        let mut counts = Vec::with_capacity(self.rngs.len());
        for (stage, rng) in self.ensemble.stages_mut().iter_mut().zip(&mut self.rngs) {
            let k = poisson(1.0, rng);
            for _ in 0..k {
                stage.learn(x, y, 1.0)?;
            }
            counts.push(k);
        }
        Ok(counts)
    }

    pub fn reset(&mut self) {
        self.ensemble.reset();
        self.rngs = (0..self.ensemble.len())
            .map(|m| stage_rng(self.seed, m))
            .collect();
    }
}

/// Books `lambda` as correct or wrong mass for one stage and returns the
/// rate passed to the next stage.
pub fn oza_lambda_step(correct_w: &mut f64, wrong_w: &mut f64, correct: bool, lambda: f64) -> f64 {
    if correct {
        *correct_w += lambda;
        lambda * (*correct_w + *wrong_w) / (2.0 * *correct_w)
    } else {
        *wrong_w += lambda;
        lambda * (*correct_w + *wrong_w) / (2.0 * *wrong_w)
    }
}

/// Online AdaBoost with Poisson resampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OzaBoost<L> {
    ensemble: Ensemble<L>,
    seed: u64,
    rngs: Vec<ChaCha8Rng>,
    correct_w: Vec<f64>,
    wrong_w: Vec<f64>,
}

impl<L: WeakLearner> OzaBoost<L> {
    pub fn new(stages: usize, seed: u64, factory: impl Fn() -> L) -> Result<Self> {
        let ensemble = Ensemble::from_factory(stages, factory)?;
        Ok(Self {
            rngs: (0..stages).map(|m| stage_rng(seed, m)).collect(),
            correct_w: vec![0.0; stages],
            wrong_w: vec![0.0; stages],
            ensemble,
            seed,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn ensemble(&self) -> &Ensemble<L> {
        &self.ensemble
    }

    /// `(lambda_correct, lambda_wrong)` of stage `m`.
    pub fn lambdas(&self, m: usize) -> (f64, f64) {
        (self.correct_w[m], self.wrong_w[m])
    }

    /// Clamped weighted error rate of stage `m`, `None` before it has seen data.
    pub fn epsilon(&self, m: usize) -> Option<f64> {
        let total = self.correct_w[m] + self.wrong_w[m];
        (total > 0.0).then(|| (self.wrong_w[m] / total).clamp(EPSILON_CLAMP, 1.0 - EPSILON_CLAMP))
    }

    /// `log((1 - eps) / eps)`, 0 for a stage that has seen nothing.
    pub fn vote_weight(&self, m: usize) -> f64 {
        self.epsilon(m).map_or(0.0, |e| ((1.0 - e) / e).ln())
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        self.ensemble
            .stages()
            .iter()
            .enumerate()
            .map(|(m, s)| {
                let vote = sign_of(s.score(x)).map_or(0.0, BinaryLabel::as_f64);
                self.vote_weight(m) * vote
            })
            .sum()
    }

    pub fn predict(&self, x: &[f64]) -> BinaryLabel {
        sign_of(self.score(x)).unwrap_or(BinaryLabel::Positive)
    }

    pub fn learn_one(&mut self, x: &[f64], y: BinaryLabel) -> Result<()> {
        self.learn_one_traced(x, y).map(drop)
    }

    /// Learns one instance and returns the rate each stage was sampled with.
    pub fn learn_one_traced(&mut self, x: &[f64], y: BinaryLabel) -> Result<Vec<f64>> {
        let mut lambda = 1.0;
        let mut trace = Vec::with_capacity(self.rngs.len());
        let stages = self.ensemble.stages_mut();
        for m in 0..stages.len() {
            trace.push(lambda);
            let k = poisson(lambda, &mut self.rngs[m]);
            for _ in 0..k {
                stages[m].learn(x, y, 1.0)?;
            }
            let correct = sign_of(stages[m].score(x)).ok() == Some(y);
            lambda = oza_lambda_step(
                &mut self.correct_w[m],
                &mut self.wrong_w[m],
                correct,
                lambda,
            );
        }
        Ok(trace)
    }

    pub fn reset(&mut self) {
        let stages = self.ensemble.len();
        self.ensemble.reset();
        self.rngs = (0..stages).map(|m| stage_rng(self.seed, m)).collect();
        self.correct_w = vec![0.0; stages];
        self.wrong_w = vec![0.0; stages];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boosting::mock::{Echo, Fixed};
    use crate::learners::RegressionStump;
    use BinaryLabel::{Negative as N, Positive as P};

    #[test]
    fn poisson_mean_near_one() {
        let mut rng = stage_rng(2024, 0);
        let n = 10_000;
        let total: u64 = (0..n).map(|_| poisson(1.0, &mut rng)).sum();
        let mean = total as f64 / n as f64;
        assert!((0.95..=1.05).contains(&mean), "mean {mean}");
    }

    #[test]
    fn poisson_large_rate_mean() {
        let mut rng = stage_rng(11, 3);
        let n = 2_000;
        let total: u64 = (0..n).map(|_| poisson(750.0, &mut rng)).sum();
        let mean = total as f64 / n as f64;
        // sd of the mean is sqrt(750 / 2000) ~ 0.61
        assert!((mean - 750.0).abs() < 3.0, "mean {mean}");
        assert_eq!(poisson(0.0, &mut rng), 0);
    }

    #[test]
    fn lambda_hand_trace() {
        let (mut sc, mut sw) = (0.0, 0.0);
        let next = oza_lambda_step(&mut sc, &mut sw, true, 1.0);
        assert_eq!((sc, sw, next), (1.0, 0.0, 0.5));
        let next = oza_lambda_step(&mut sc, &mut sw, false, 1.0);
        // sc=1, sw=1 -> 1 * 2 / 2
        assert_eq!((sc, sw, next), (1.0, 1.0, 1.0));
    }

    #[test]
    fn vote_weight_from_error_rate() {
        let mut b = OzaBoost::new(1, 0, || Fixed(1.0)).unwrap();
        b.correct_w[0] = 3.0;
        b.wrong_w[0] = 1.0;
        assert_eq!(b.epsilon(0), Some(0.25));
        assert!((b.vote_weight(0) - 3.0_f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn always_correct_stage_gets_clamped_large_vote() {
        let mut b = OzaBoost::new(2, 5, Echo::agree).unwrap();
        for i in 0..50 {
            let y = if i % 2 == 0 { P } else { N };
            b.learn_one(&[0.0], y).unwrap();
        }
        // first stage sees every instance with lambda 1 at least some of the
        // time; when it learns it echoes y back
        let (sc, sw) = b.lambdas(0);
        assert!(sc > 0.0);
        if sw == 0.0 {
            assert_eq!(b.epsilon(0), Some(EPSILON_CLAMP));
            assert!((b.vote_weight(0) - ((1.0 - EPSILON_CLAMP) / EPSILON_CLAMP).ln()).abs() < 1e-9);
        }
        assert!(b.vote_weight(0) > 0.0);
    }

    #[test]
    fn first_instance_trace() {
        let mut b = OzaBoost::new(3, 1, Echo::agree).unwrap();
        let trace = b.learn_one_traced(&[0.0], P).unwrap();
        assert_eq!(trace[0], 1.0);
        for m in 0..3 {
            let (sc, sw) = b.lambdas(m);
            assert_eq!(sc + sw, trace[m]);
        }
    }

    #[test]
    fn zero_draw_leaves_stage_untouched() {
        let mut bag = OzaBagging::new(8, 77, RegressionStump::default).unwrap();
        let probes: Vec<[f64; 1]> = (-5..=5).map(|i| [i as f64 * 0.5]).collect();
        for i in 0..40 {
            let before = bag.ensemble().clone();
            let x = [(i as f64 * 1.3).sin() * 3.0];
            let y = if x[0] > 0.0 { P } else { N };
            let counts = bag.learn_one(&x, y).unwrap();
            for (m, &k) in counts.iter().enumerate() {
                if k == 0 {
                    let (a, b) = (&before.stages()[m], &bag.ensemble().stages()[m]);
                    assert_eq!(a, b);
                    for p in &probes {
                        assert_eq!(a.score(p), b.score(p));
                    }
                }
            }
        }
    }

    #[test]
    fn bagging_is_deterministic_per_seed() {
        let run = |seed| {
            let mut bag = OzaBagging::new(5, seed, RegressionStump::default).unwrap();
            for i in 0..300 {
                let x = [(i as f64 * 0.71).cos(), (i as f64 * 0.13).sin()];
                let y = if x[0] + 0.3 * x[1] > 0.1 { P } else { N };
                bag.learn_one(&x, y).unwrap();
            }
            (0..50)
                .map(|i| bag.score(&[i as f64 / 25.0 - 1.0, 0.2]))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(42), run(42));
        let tie = OzaBagging::new(2, 0, || Fixed(0.0)).unwrap();
        assert_eq!(tie.predict(&[]), P);
    }
}
