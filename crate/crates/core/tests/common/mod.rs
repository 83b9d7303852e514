//! Test-side oracles, written without reference to the library internals.
#![allow(dead_code)]

use gentleboost::{BinaryLabel, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Result of an exhaustive weighted least-squares stump search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleStump {
    pub feature: usize,
    pub threshold: f64,
    pub left: f64,
    pub right: f64,
}

fn weighted_mean(points: &[(f64, f64, f64)], pick: impl Fn(f64) -> bool) -> (f64, f64) {
    let (mut sw, mut swy) = (0.0, 0.0);
    for &(v, y, w) in points {
        if pick(v) {
            sw += w;
            swy += w * y;
        }
    }
    (sw, if sw > 0.0 { swy / sw } else { 0.0 })
}

fn sse(points: &[(f64, f64, f64)], threshold: f64, left: f64, right: f64) -> f64 {
    points
        .iter()
        .map(|&(v, y, w)| {
            let c = if v <= threshold { left } else { right };
            w * (y - c) * (y - c)
        })
        .sum()
}

/// Tries every midpoint between consecutive distinct values of every
/// feature and recomputes each candidate's weighted squared error from
/// scratch. A split is kept only if it beats the constant fit by more than
/// `1e-12 * total_weight`; among near-equal candidates the first in
/// (feature, threshold) order wins.
pub fn brute_force_stump(data: &[(Vec<f64>, f64, f64)]) -> Option<OracleStump> {
    let total_w: f64 = data.iter().map(|d| d.2).sum();
    let tol = 1e-12 * total_w;
    let dim = data[0].0.len();
    let flat: Vec<(f64, f64, f64)> = data.iter().map(|(_, y, w)| (0.0, *y, *w)).collect();
    let (_, mean) = weighted_mean(&flat, |_| true);
    let constant_sse = sse(&flat, f64::INFINITY, mean, mean);

    let mut candidates = Vec::new();
    for j in 0..dim {
        let points: Vec<(f64, f64, f64)> = data
            .iter()
            .filter(|d| d.2 > 0.0)
            .map(|(x, y, w)| (x[j], *y, *w))
            .collect();
        let mut values: Vec<f64> = points.iter().map(|p| p.0).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for pair in values.windows(2) {
            let t = 0.5 * (pair[0] + pair[1]);
            let (_, left) = weighted_mean(&points, |v| v <= t);
            let (_, right) = weighted_mean(&points, |v| v > t);
            candidates.push((
                sse(&points, t, left, right),
                OracleStump {
                    feature: j,
                    threshold: t,
                    left,
                    right,
                },
            ));
        }
    }
    let best = candidates.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    if best >= constant_sse - tol {
        return None;
    }
    candidates
        .into_iter()
        .find(|c| c.0 <= best + tol)
        .map(|c| c.1)
}

/// Random labelled points. With `ties` the features are small integers so
/// many values repeat.
pub fn random_dataset(
    rng: &mut ChaCha8Rng,
    n: usize,
    dim: usize,
    ties: bool,
) -> Vec<(Instance, BinaryLabel)> {
    (0..n)
        .map(|i| {
            let x: Vec<f64> = (0..dim)
                .map(|_| {
                    if ties {
                        rng.random_range(0..5) as f64
                    } else {
                        rng.random_range(-3.0..3.0)
                    }
                })
                .collect();
            let y = if rng.random_bool(0.5) {
                BinaryLabel::Positive
            } else {
                BinaryLabel::Negative
            };
            (Instance::new(i as u64, x).unwrap(), y)
        })
        .collect()
}

/// Both classes present.
pub fn random_two_class(
    seed: u64,
    n: usize,
    dim: usize,
    ties: bool,
) -> Vec<(Instance, BinaryLabel)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let d = random_dataset(&mut rng, n, dim, ties);
        let pos = d
            .iter()
            .filter(|(_, y)| *y == BinaryLabel::Positive)
            .count();
        if pos > 0 && pos < n {
            return d;
        }
    }
}
