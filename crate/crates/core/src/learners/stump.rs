//! Regression stump fitted by weighted least squares.
//!
//! Each region's least-squares constant is the weighted mean of the labels
//! that fall in it, which is exactly the pointwise Newton step of the
//! exponential loss. The split maximises `sum_regions (sum w*y)^2 / sum w`,
//! equivalent to minimising the weighted squared error since `y^2 = 1`.
//!
//! Two candidate-threshold strategies are supported. `Exact` keeps one
//! bucket per distinct feature value and searches every midpoint; memory
//! grows with the number of distinct values, so it is meant for batch
//! fitting and as a reference. `Binned` keeps a fixed number of equal-width
//! bins between the running min and max per feature and re-bins on range
//! expansion; each bin remembers the weighted mean of the values it holds so
//! re-binning moves mass to where it actually sits.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_dim, check_weight, WeakLearner};
use crate::boosting::pointwise_newton_step;
use crate::error::Result;
use crate::types::BinaryLabel;

pub const DEFAULT_BINS: usize = 64;

/// Relative slack, in units of total weight, a candidate split must beat the
/// incumbent by. Keeps the choice stable under weight rescaling and under
/// different summation orders.
pub(crate) const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Thresholds {
    Exact,
    Binned { bins: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
struct Sums {
    w: f64,
    wy: f64,
}

impl Sums {
    fn add(&mut self, w: f64, wy: f64) {
        self.w += w;
        self.wy += wy;
    }

    fn gain(self) -> f64 {
        self.wy * self.wy / self.w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
struct Bin {
    w: f64,
    wy: f64,
    wx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Histogram {
    lo: f64,
    hi: f64,
    bins: Vec<Bin>,
    empty: bool,
}

impl Histogram {
    fn new(n: usize) -> Self {
        Self {
            lo: 0.0,
            hi: 0.0,
            bins: vec![Bin::default(); n.max(1)],
            empty: true,
        }
    }

    fn index(&self, x: f64) -> usize {
        let n = self.bins.len();
        if self.hi <= self.lo {
            return 0;
        }
        let pos = (x - self.lo) / (self.hi - self.lo) * n as f64;
        if pos <= 0.0 {
            0
        } else {
            (pos as usize).min(n - 1)
        }
    }

    fn insert(&mut self, x: f64, w: f64, y: f64) {
        if self.empty {
            self.lo = x;
            self.hi = x;
            self.empty = false;
        } else if x < self.lo || x > self.hi {
            self.rebin(self.lo.min(x), self.hi.max(x));
        }
        let i = self.index(x);
        let b = &mut self.bins[i];
        b.w += w;
        b.wy += w * y;
        b.wx += w * x;
    }

    fn rebin(&mut self, lo: f64, hi: f64) {
        let n = self.bins.len();
        let old = std::mem::replace(&mut self.bins, vec![Bin::default(); n]);
        self.lo = lo;
        self.hi = hi;
        for b in old.into_iter().filter(|b| b.w > 0.0) {
            let rep = (b.wx / b.w).clamp(lo, hi);
            let i = self.index(rep);
            let t = &mut self.bins[i];
            t.w += b.w;
            t.wy += b.wy;
            t.wx += b.wx;
        }
    }

    /// Non-empty bins as (representative value, sums), ordered by position.
    fn buckets(&self) -> Vec<(f64, Sums)> {
        let mut out: Vec<(f64, Sums)> = Vec::new();
        for b in self.bins.iter().filter(|b| b.w > 0.0) {
            let rep = b.wx / b.w;
            match out.last_mut() {
                // representatives of adjacent bins can only coincide through
                // rounding; merge them so every cut is a real threshold
                Some((prev, s)) if rep <= *prev => s.add(b.w, b.wy),
                _ => out.push((rep, Sums { w: b.w, wy: b.wy })),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Column {
    Exact(BTreeMap<Key, Sums>),
    Binned(Histogram),
}

impl Column {
    fn new(mode: Thresholds) -> Self {
        match mode {
            Thresholds::Exact => Self::Exact(BTreeMap::new()),
            Thresholds::Binned { bins } => Self::Binned(Histogram::new(bins)),
        }
    }

    fn insert(&mut self, x: f64, w: f64, y: f64) {
        match self {
            Self::Exact(map) => map.entry(Key(x)).or_default().add(w, w * y),
            Self::Binned(h) => h.insert(x, w, y),
        }
    }

    fn buckets(&self) -> Vec<(f64, Sums)> {
        match self {
            Self::Exact(map) => map.iter().map(|(k, s)| (k.0, *s)).collect(),
            Self::Binned(h) => h.buckets(),
        }
    }
}

/// The chosen split and its two leaf values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StumpSplit {
    pub feature: usize,
    /// Instances with `x[feature] <= threshold` go left.
    pub threshold: f64,
    pub left_value: f64,
    pub right_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionStump {
    mode: Thresholds,
    dim: Option<usize>,
    columns: Vec<Column>,
    total: Sums,
    split: Option<StumpSplit>,
}

impl Default for RegressionStump {
    fn default() -> Self {
        Self::binned(DEFAULT_BINS)
    }
}

impl RegressionStump {
    pub fn new(mode: Thresholds) -> Self {
        Self {
            mode,
            dim: None,
            columns: Vec::new(),
            total: Sums::default(),
            split: None,
        }
    }

    pub fn exact() -> Self {
        Self::new(Thresholds::Exact)
    }

    pub fn binned(bins: usize) -> Self {
        Self::new(Thresholds::Binned { bins })
    }

    pub fn mode(&self) -> Thresholds {
        self.mode
    }

    pub fn split(&self) -> Option<StumpSplit> {
        self.split
    }

    /// Total weight seen so far.
    pub fn total_weight(&self) -> f64 {
        self.total.w
    }

    /// Leaf value used when no split is available: the overall weighted mean.
    pub fn constant_value(&self) -> f64 {
        if self.total.w > 0.0 {
            pointwise_newton_step(self.total.wy, self.total.w).unwrap_or(0.0)
        } else {
            0.0
        }
    }

    fn accumulate(&mut self, x: &[f64], y: BinaryLabel, w: f64) -> Result<bool> {
        check_weight(w)?;
        if w == 0.0 {
            check_dim(&mut self.dim.clone(), x.len())?;
            return Ok(false);
        }
        check_dim(&mut self.dim, x.len())?;
        if self.columns.is_empty() {
            self.columns = (0..x.len()).map(|_| Column::new(self.mode)).collect();
        }
        let yv = y.as_f64();
        for (col, &v) in self.columns.iter_mut().zip(x) {
            col.insert(v, w, yv);
        }
        self.total.add(w, w * yv);
        Ok(true)
    }

    fn refit(&mut self) {
        self.split = best_split(&self.columns, self.total);
    }
}

fn best_split(columns: &[Column], total: Sums) -> Option<StumpSplit> {
    if total.w <= 0.0 {
        return None;
    }
    let slack = TIE_EPS * total.w;
    let mut best_gain = total.gain();
    let mut best = None;
    for (feature, col) in columns.iter().enumerate() {
        let buckets = col.buckets();
        let mut left = Sums::default();
        for pair in buckets.windows(2) {
            let (value, sums) = pair[0];
            left.add(sums.w, sums.wy);
            let right = Sums {
                w: total.w - left.w,
                wy: total.wy - left.wy,
            };
            if left.w <= 0.0 || right.w <= 0.0 {
                continue;
            }
            let gain = left.gain() + right.gain();
            if gain > best_gain + slack {
                best_gain = gain;
                best = Some((feature, 0.5 * (value + pair[1].0), left, right));
            }
        }
    }
    best.map(|(feature, threshold, left, right)| StumpSplit {
        feature,
        threshold,
        left_value: pointwise_newton_step(left.wy, left.w).unwrap_or(0.0),
        right_value: pointwise_newton_step(right.wy, right.w).unwrap_or(0.0),
    })
}

impl WeakLearner for RegressionStump {
    fn learn(&mut self, x: &[f64], y: BinaryLabel, weight: f64) -> Result<()> {
        if self.accumulate(x, y, weight)? {
            self.refit();
        }
        Ok(())
    }

    fn learn_batch(&mut self, batch: &[(&[f64], BinaryLabel, f64)]) -> Result<()> {
        let mut changed = false;
        for &(x, y, w) in batch {
            changed |= self.accumulate(x, y, w)?;
        }
        if changed {
            self.refit();
        }
        Ok(())
    }

    fn score(&self, x: &[f64]) -> f64 {
        match self.split {
            Some(s) => match x.get(s.feature) {
                Some(&v) if v <= s.threshold => s.left_value,
                Some(_) => s.right_value,
                None => self.constant_value(),
            },
            None => self.constant_value(),
        }
    }

    fn reset(&mut self) {
        *self = Self::new(self.mode);
    }
}
