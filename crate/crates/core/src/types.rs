//! Domain values shared by every module.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One feature vector from a stream, tagged with its arrival order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    seq: u64,
    features: Vec<f64>,
}

impl Instance {
    /// Builds an instance, rejecting NaN and infinite feature values.
    pub fn new(seq: u64, features: Vec<f64>) -> Result<Self> {
        if let Some(j) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "instance {seq}: feature {j} is not finite ({})",
                features[j]
            )));
        }
        Ok(Self { seq, features })
    }

    pub fn seq(&self) -> u64 {
        self.seq
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }

    pub fn into_features(self) -> Vec<f64> {
        self.features
    }
}

/// Two-class label in {-1, +1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BinaryLabel {
    Negative,
    Positive,
}

impl BinaryLabel {
    pub fn from_i8(value: i8) -> Result<Self> {
        match value {
            -1 => Ok(Self::Negative),
            1 => Ok(Self::Positive),
            other => Err(Error::Data(format!("label must be -1 or +1, got {other}"))),
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Self::Negative => -1,
            Self::Positive => 1,
        }
    }

    /// The label as the real `y` used in margins.
    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::Negative => Self::Positive,
            Self::Positive => Self::Negative,
        }
    }
}

impl fmt::Display for BinaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

/// `y * f(x)` for one stage or `y * F(x)` for a whole ensemble.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Margin(f64);

impl Margin {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Data(format!("margin is not finite ({value})")));
        }
        Ok(Self(value))
    }

    /// Margin of a real score against a label.
    pub fn of(label: BinaryLabel, score: f64) -> Result<Self> {
        Self::new(label.as_f64() * score)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Positive, finite per-sample weight.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SampleWeight(f64);

impl SampleWeight {
    pub const ONE: SampleWeight = SampleWeight(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Data(format!(
                "sample weight must be positive and finite, got {value}"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Line-search hyperparameter alpha, restricted to the open interval (0, e - 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct StepSizeParam(f64);

impl StepSizeParam {
    /// Exclusive upper bound e - 1.
    pub const UPPER: f64 = std::f64::consts::E - 1.0;
    pub const DEFAULT: f64 = 0.5;

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha < Self::UPPER {
            Ok(Self(alpha))
        } else {
            Err(Error::Config(format!(
                "alpha must lie in the open interval (0, e - 1 = {:.5}), got {alpha}",
                Self::UPPER
            )))
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }
}

impl Default for StepSizeParam {
    fn default() -> Self {
        Self(Self::DEFAULT)
    }
}

impl TryFrom<f64> for StepSizeParam {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<StepSizeParam> for f64 {
    fn from(p: StepSizeParam) -> f64 {
        p.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_rejects_non_finite() {
        assert!(Instance::new(0, vec![1.0, f64::NAN]).is_err());
        assert!(Instance::new(0, vec![f64::INFINITY]).is_err());
        assert_eq!(Instance::new(3, vec![1.0, 2.0]).unwrap().dim(), 2);
    }

    #[test]
    fn label_encoding_is_closed() {
        assert_eq!(BinaryLabel::from_i8(1).unwrap(), BinaryLabel::Positive);
        assert_eq!(BinaryLabel::from_i8(-1).unwrap(), BinaryLabel::Negative);
        assert!(BinaryLabel::from_i8(0).is_err());
        assert!(BinaryLabel::from_i8(2).is_err());
        assert_eq!(BinaryLabel::Positive.flipped(), BinaryLabel::Negative);
    }

    #[test]
    fn step_size_param_open_interval() {
        assert!(StepSizeParam::new(0.0).is_err());
        assert!(StepSizeParam::new(-0.1).is_err());
        assert!(StepSizeParam::new(StepSizeParam::UPPER).is_err());
        assert!(StepSizeParam::new(1.8).is_err());
        assert!(StepSizeParam::new(f64::NAN).is_err());
        assert!(StepSizeParam::new(1e-9).is_ok());
        assert!(StepSizeParam::new(1.718).is_ok());
        assert_eq!(StepSizeParam::default().alpha(), 0.5);
    }

    #[test]
    fn sample_weight_must_be_positive() {
        assert!(SampleWeight::new(0.0).is_err());
        assert!(SampleWeight::new(-1.0).is_err());
        assert!(SampleWeight::new(f64::INFINITY).is_err());
        assert_eq!(SampleWeight::new(0.25).unwrap().value(), 0.25);
    }
}
