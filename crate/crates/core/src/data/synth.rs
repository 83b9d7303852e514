//! Seeded synthetic streams.
//!
//! * `gaussian-pair`: two unit-variance Gaussian blobs centred at
//!   `+-(2, 2)`, rejection-sampled so every point sits at least 0.25 on its
//!   own side of the line `x1 + x2 = 0`. Linearly separable when noise is 0.
//! * `xor-quadrant`: uniform points in `[-1, 1]^2`, positive in the first
//!   and third quadrants.
//! * `margin-noise`: uniform points in `[-1, 1]^2` labelled by
//!   `x1 + x2 > 0`, with flips concentrated near the boundary.
//!
//! Noise is a label-flip probability applied after the clean label is drawn.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::Labelled;
use crate::error::{Error, Result};
use crate::types::{BinaryLabel, Instance};

const GAUSSIAN_OFFSET: f64 = 2.0;
const GAUSSIAN_MARGIN: f64 = 0.25;
const BOUNDARY_SCALE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    GaussianPair,
    XorQuadrant,
    MarginNoise,
}

impl Generator {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::GaussianPair => "gaussian-pair",
            Self::XorQuadrant => "xor-quadrant",
            Self::MarginNoise => "margin-noise",
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian-pair" => Ok(Self::GaussianPair),
            "xor-quadrant" => Ok(Self::XorQuadrant),
            "margin-noise" => Ok(Self::MarginNoise),
            other => Err(Error::Config(format!(
                "unknown generator `{other}` (expected gaussian-pair, xor-quadrant or margin-noise)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub generator: Generator,
    pub n: usize,
    /// Probability of the positive class.
    pub balance: f64,
    /// Label-flip probability in [0, 0.5].
    pub noise: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(generator: Generator, n: usize, seed: u64) -> Self {
        Self {
            generator,
            n,
            balance: 0.5,
            noise: 0.0,
            seed,
        }
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_balance(mut self, balance: f64) -> Self {
        self.balance = balance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("synthetic stream needs n >= 1".into()));
        }
        if !(0.0..=0.5).contains(&self.noise) {
            return Err(Error::Config(format!(
                "noise must lie in [0, 0.5], got {}",
                self.noise
            )));
        }
        if !(0.0..=1.0).contains(&self.balance) {
            return Err(Error::Config(format!(
                "balance must lie in [0, 1], got {}",
                self.balance
            )));
        }
        Ok(())
    }

    /// Canonical dataset id.
    pub fn id(&self) -> String {
        format!(
            "{}:n={},balance={},noise={},seed={}",
            self.generator.as_str(),
            self.n,
            self.balance,
            self.noise,
            self.seed
        )
    }
}

impl fmt::Display for SyntheticSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for SyntheticSpec {
    type Err = Error;

    /// `generator[:n=..,balance=..,noise=..,seed=..]`; n defaults to 1000.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let mut spec = SyntheticSpec::new(name.trim().parse()?, 1000, 0);
        for kv in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                Error::Config(format!("generator parameter `{kv}` is not key=value"))
            })?;
            let bad = || Error::Config(format!("bad value for `{k}`: `{v}`"));
            match k.trim() {
                "n" => spec.n = v.trim().parse().map_err(|_| bad())?,
                "balance" => spec.balance = v.trim().parse().map_err(|_| bad())?,
                "noise" => spec.noise = v.trim().parse().map_err(|_| bad())?,
                "seed" => spec.seed = v.trim().parse().map_err(|_| bad())?,
                other => {
                    return Err(Error::Config(format!(
                        "unknown generator parameter `{other}`"
                    )))
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn uniform_square(rng: &mut ChaCha8Rng) -> [f64; 2] {
    [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]
}

/// Materialises the stream described by `spec`.
pub fn generate(spec: &SyntheticSpec) -> Result<Vec<Labelled>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let positive = rng.random_bool(spec.balance);
        let y = if positive { 1.0 } else { -1.0 };
        let (x, flip_p) = match spec.generator {
            Generator::GaussianPair => loop {
                let z0: f64 = rng.sample(StandardNormal);
                let z1: f64 = rng.sample(StandardNormal);
                let x = [y * GAUSSIAN_OFFSET + z0, y * GAUSSIAN_OFFSET + z1];
                if y * (x[0] + x[1]) / std::f64::consts::SQRT_2 >= GAUSSIAN_MARGIN {
                    break (x, spec.noise);
                }
            },
            Generator::XorQuadrant => {
                // pick one of the two quadrants of the drawn class
                let a: f64 = rng.random_range(0.0..1.0);
                let b: f64 = rng.random_range(0.0..1.0);
                let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                ([s * a, s * y * b], spec.noise)
            }
            Generator::MarginNoise => loop {
                let x = uniform_square(&mut rng);
                let margin = (x[0] + x[1]) / std::f64::consts::SQRT_2;
                if y * margin > 0.0 {
                    break (x, spec.noise * (-margin.abs() / BOUNDARY_SCALE).exp());
                }
            },
        };
        let flip = flip_p > 0.0 && rng.random_bool(flip_p);
        let label = match (positive, flip) {
            (true, false) | (false, true) => BinaryLabel::Positive,
            _ => BinaryLabel::Negative,
        };
        out.push((Instance::new(i as u64, x.to_vec())?, label));
    }
    Ok(out)
}
