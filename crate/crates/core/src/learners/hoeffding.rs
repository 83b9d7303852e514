//! Hoeffding tree for two classes over numeric features.
//!
//! Leaves keep weighted class totals and, per feature and class, a weighted
//! Gaussian summary (mean, variance, min, max). Every `grace_period` units of
//! weight a leaf scores a fixed number of equally spaced thresholds per
//! feature by information gain, splitting the class mass with the Gaussian
//! CDFs, and splits when the Hoeffding bound says the winner is reliable.
//! Leaves predict with Laplace-smoothed class frequencies.

use serde::{Deserialize, Serialize};

use super::{check_dim, check_weight, classifier_margin_adapter, WeakLearner};
use crate::error::Result;
use crate::types::BinaryLabel;

/// `sqrt(R^2 ln(1/delta) / (2n))`.
pub fn hoeffding_bound(range: f64, delta: f64, n: f64) -> f64 {
    (range * range * (1.0 / delta).ln() / (2.0 * n)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingConfig {
    /// Split confidence.
    pub delta: f64,
    /// Weight a leaf must accumulate between split attempts.
    pub grace_period: f64,
    /// Tie threshold.
    pub tau: f64,
    pub max_depth: usize,
    /// Candidate thresholds tried per feature.
    pub split_points: usize,
}

impl Default for HoeffdingConfig {
    fn default() -> Self {
        Self {
            delta: 1e-7,
            grace_period: 200.0,
            tau: 0.05,
            max_depth: 20,
            split_points: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Gaussian {
    w: f64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Default for Gaussian {
    fn default() -> Self {
        Self {
            w: 0.0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }
}

impl Gaussian {
    // weighted Welford
    fn update(&mut self, x: f64, w: f64) {
        let total = self.w + w;
        let delta = x - self.mean;
        self.mean += delta * w / total;
        self.m2 += w * delta * (x - self.mean);
        self.w = total;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    fn std_dev(&self) -> f64 {
        if self.w > 0.0 {
            (self.m2.max(0.0) / self.w).sqrt()
        } else {
            0.0
        }
    }

    /// Weight estimated at or below `t`.
    fn weight_below(&self, t: f64) -> f64 {
        if self.w <= 0.0 || t < self.min {
            return 0.0;
        }
        if t >= self.max {
            return self.w;
        }
        let sd = self.std_dev();
        if sd <= 0.0 {
            return if t >= self.mean { self.w } else { 0.0 };
        }
        let cdf = 0.5 * (1.0 + libm::erf((t - self.mean) / (sd * std::f64::consts::SQRT_2)));
        self.w * cdf
    }
}

fn entropy(dist: [f64; 2]) -> f64 {
    let total = dist[0] + dist[1];
    if total <= 0.0 {
        return 0.0;
    }
    dist.iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / total;
            -p * p.log2()
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Leaf {
    /// [negative, positive]
    class_w: [f64; 2],
    stats: Vec<[Gaussian; 2]>,
    depth: usize,
    weight_at_last_attempt: f64,
}

impl Leaf {
    fn new(depth: usize, class_w: [f64; 2]) -> Self {
        Self {
            class_w,
            stats: Vec::new(),
            depth,
            weight_at_last_attempt: class_w[0] + class_w[1],
        }
    }

    fn total(&self) -> f64 {
        self.class_w[0] + self.class_w[1]
    }

    fn proba(&self) -> [f64; 2] {
        let denom = self.total() + 2.0;
        let pos = (self.class_w[1] + 1.0) / denom;
        [1.0 - pos, pos]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf(Leaf),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    merit: f64,
    left: [f64; 2],
    right: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingTree {
    config: HoeffdingConfig,
    dim: Option<usize>,
    nodes: Vec<Node>,
    splits: usize,
}

impl Default for HoeffdingTree {
    fn default() -> Self {
        Self::new(HoeffdingConfig::default())
    }
}

impl HoeffdingTree {
    pub fn new(config: HoeffdingConfig) -> Self {
        Self {
            config,
            dim: None,
            nodes: vec![Node::Leaf(Leaf::new(0, [0.0, 0.0]))],
            splits: 0,
        }
    }

    pub fn config(&self) -> &HoeffdingConfig {
        &self.config
    }

    pub fn n_splits(&self) -> usize {
        self.splits
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf(_)))
            .count()
    }

    pub fn depth(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Leaf(l) => Some(l.depth),
                Node::Split { .. } => None,
            })
            .max()
            .unwrap_or(0)
    }

    fn leaf_index(&self, x: &[f64]) -> usize {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf(_) => return i,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    // missing feature routes left
                    i = match x.get(*feature) {
                        Some(&v) if v > *threshold => *right,
                        _ => *left,
                    };
                }
            }
        }
    }

    fn leaf(&self, x: &[f64]) -> &Leaf {
        match &self.nodes[self.leaf_index(x)] {
            Node::Leaf(l) => l,
            Node::Split { .. } => unreachable!("leaf_index always stops at a leaf"),
        }
    }

    /// Laplace-smoothed `[P(y = -1 | x), P(y = +1 | x)]`.
    pub fn predict_proba(&self, x: &[f64]) -> [f64; 2] {
        self.leaf(x).proba()
    }

    /// Best threshold per feature, sorted by merit. Merits are computed over
    /// the weight observed since the leaf was created; class mass inherited
    /// from the parent only affects prediction.
    fn best_candidates(&self, leaf: &Leaf) -> Vec<Candidate> {
        let mut out = Vec::new();
        for (feature, per_class) in leaf.stats.iter().enumerate() {
            let seen = [per_class[0].w, per_class[1].w];
            let parent_entropy = entropy(seen);
            let total = seen[0] + seen[1];
            let lo = per_class
                .iter()
                .filter(|g| g.w > 0.0)
                .map(|g| g.min)
                .fold(f64::INFINITY, f64::min);
            let hi = per_class
                .iter()
                .filter(|g| g.w > 0.0)
                .map(|g| g.max)
                .fold(f64::NEG_INFINITY, f64::max);
            if !(lo < hi) {
                continue;
            }
            let n = self.config.split_points;
            let mut best: Option<Candidate> = None;
            for i in 1..=n {
                let threshold = lo + (hi - lo) * i as f64 / (n + 1) as f64;
                let mut left = [0.0; 2];
                let mut right = [0.0; 2];
                for c in 0..2 {
                    left[c] = per_class[c].weight_below(threshold);
                    right[c] = (per_class[c].w - left[c]).max(0.0);
                }
                let wl = left[0] + left[1];
                let wr = right[0] + right[1];
                if wl <= 0.0 || wr <= 0.0 {
                    continue;
                }
                let merit =
                    parent_entropy - (wl / total) * entropy(left) - (wr / total) * entropy(right);
                if best.is_none_or(|b| merit > b.merit) {
                    best = Some(Candidate {
                        feature,
                        threshold,
                        merit,
                        left,
                        right,
                    });
                }
            }
            out.extend(best);
        }
        // stable: ties keep lower feature index first
        out.sort_by(|a, b| b.merit.total_cmp(&a.merit));
        out
    }

    fn attempt_split(&mut self, idx: usize) {
        let Node::Leaf(leaf) = &self.nodes[idx] else {
            return;
        };
        let seen = leaf.stats.first().map_or([0.0; 2], |s| [s[0].w, s[1].w]);
        if leaf.depth >= self.config.max_depth || seen.iter().any(|&c| c <= 0.0) {
            return;
        }
        let candidates = self.best_candidates(leaf);
        let Some(best) = candidates.first().copied() else {
            return;
        };
        // the "don't split" option competes with merit 0
        let second = candidates.get(1).map_or(0.0, |c| c.merit.max(0.0));
        let eps = hoeffding_bound(1.0, self.config.delta, seen[0] + seen[1]);
        if best.merit <= 0.0 || !(best.merit - second > eps || eps < self.config.tau) {
            return;
        }
        let depth = leaf.depth + 1;
        let left = self.nodes.len();
        self.nodes.push(Node::Leaf(Leaf::new(depth, best.left)));
        self.nodes.push(Node::Leaf(Leaf::new(depth, best.right)));
        self.nodes[idx] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right: left + 1,
        };
        self.splits += 1;
    }
}

impl WeakLearner for HoeffdingTree {
    fn learn(&mut self, x: &[f64], y: BinaryLabel, weight: f64) -> Result<()> {
        check_weight(weight)?;
        if weight == 0.0 {
            return check_dim(&mut self.dim.clone(), x.len());
        }
        check_dim(&mut self.dim, x.len())?;
        let idx = self.leaf_index(x);
        let grace = self.config.grace_period;
        let Node::Leaf(leaf) = &mut self.nodes[idx] else {
            unreachable!("leaf_index always stops at a leaf");
        };
        let class = usize::from(y == BinaryLabel::Positive);
        leaf.class_w[class] += weight;
        if leaf.stats.len() < x.len() {
            leaf.stats.resize(x.len(), [Gaussian::default(); 2]);
        }
        for (s, &v) in leaf.stats.iter_mut().zip(x) {
            s[class].update(v, weight);
        }
        if leaf.total() - leaf.weight_at_last_attempt >= grace {
            leaf.weight_at_last_attempt = leaf.total();
            self.attempt_split(idx);
        }
        Ok(())
    }

    fn score(&self, x: &[f64]) -> f64 {
        let p = self.predict_proba(x)[1];
        classifier_margin_adapter(p.clamp(0.0, 1.0)).unwrap_or(0.0)
    }

    fn reset(&mut self) {
        *self = Self::new(self.config);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bound_example() {
        let eps = hoeffding_bound(1.0, 1e-7, 1000.0);
        let oracle = ((10_000_000.0_f64).ln() / 2000.0).sqrt();
        assert_abs_diff_eq!(eps, oracle, epsilon = 1e-15);
        // 0.0897722 to seven places
        assert_abs_diff_eq!(eps, 0.0897722, epsilon = 1e-7);
    }

    #[test]
    fn single_class_never_splits() {
        let mut t = HoeffdingTree::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let x = [rng.random::<f64>(), rng.random::<f64>()];
            t.learn(&x, BinaryLabel::Positive, 1.0).unwrap();
        }
        assert_eq!(t.n_splits(), 0);
        let p = t.predict_proba(&[0.5, 0.5]);
        assert!(p[1] > p[0]);
        assert_abs_diff_eq!(p[1], 2001.0 / 2002.0, epsilon = 1e-12);
        assert!(t.score(&[0.1, 0.9]) > 0.99);
    }

    fn threshold_stream(seed: u64, n: usize) -> Vec<([f64; 2], BinaryLabel)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let x = [rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>()];
                let y = if x[0] > 0.2 {
                    BinaryLabel::Positive
                } else {
                    BinaryLabel::Negative
                };
                (x, y)
            })
            .collect()
    }

    #[test]
    fn learns_a_threshold_concept() {
        let mut t = HoeffdingTree::default();
        for (x, y) in threshold_stream(3, 3000) {
            t.learn(&x, y, 1.0).unwrap();
        }
        assert!(t.n_splits() >= 1);
        let correct = threshold_stream(4, 1000)
            .iter()
            .filter(|(x, y)| (t.score(x) >= 0.0) == (*y == BinaryLabel::Positive))
            .count();
        assert!(correct > 900, "held-out correct {correct}/1000");
    }

    #[test]
    fn replay_is_bit_identical() {
        let mut a = HoeffdingTree::default();
        let mut b = HoeffdingTree::default();
        for (x, y) in threshold_stream(9, 2500) {
            a.learn(&x, y, 1.0).unwrap();
        }
        for (x, y) in threshold_stream(9, 2500) {
            b.learn(&x, y, 1.0).unwrap();
        }
        assert_eq!(a, b);
    }

    #[test]
    fn proba_sums_to_one_and_depth_bounded() {
        let config = HoeffdingConfig {
            max_depth: 2,
            grace_period: 50.0,
            ..HoeffdingConfig::default()
        };
        let mut t = HoeffdingTree::new(config);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut splits_seen = 0;
        for _ in 0..5000 {
            let x = [
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            ];
            let y = if x[0] * x[1] > 0.0 {
                BinaryLabel::Positive
            } else {
                BinaryLabel::Negative
            };
            t.learn(&x, y, rng.random::<f64>() + 0.1).unwrap();
            assert!(t.n_splits() >= splits_seen);
            splits_seen = t.n_splits();
            let p = t.predict_proba(&x);
            assert!((p[0] + p[1] - 1.0).abs() <= 1e-12);
        }
        assert!(t.depth() <= 2);
    }

    #[test]
    fn zero_weight_noop_and_reset() {
        let mut t = HoeffdingTree::default();
        for (x, y) in threshold_stream(2, 500) {
            t.learn(&x, y, 1.0).unwrap();
        }
        let before = t.clone();
        t.learn(&[0.3, 0.3], BinaryLabel::Negative, 0.0).unwrap();
        assert_eq!(t, before);
        t.reset();
        assert_eq!(t, HoeffdingTree::default());
        assert_eq!(t.score(&[0.0, 0.0]), 0.0);
    }
}
