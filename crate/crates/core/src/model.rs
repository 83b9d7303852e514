//! Named, configurable online models: what the evaluation harness and the
//! CLI build, run, and snapshot.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boosting::{OnlineGentleBoost, OzaBagging, OzaBoost, WeightRule, DEFAULT_STAGES};
use crate::error::{Error, Result};
use crate::learners::{BaseLearner, WeakLearner};
use crate::loss::{clamp_unit, sign_of};
use crate::types::{BinaryLabel, StepSizeParam};

/// Anything that can be scored then trained one instance at a time.
pub trait OnlineClassifier {
    fn score(&self, x: &[f64]) -> f64;

    fn learn_one(&mut self, x: &[f64], y: BinaryLabel) -> Result<()>;

    fn predict(&self, x: &[f64]) -> BinaryLabel {
        sign_of(self.score(x)).unwrap_or(BinaryLabel::Positive)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    /// Online GentleBoost.
    GentleBoost,
    /// Oza-Russell online bagging.
    Bagging,
    /// Oza-Russell online AdaBoost.
    AdaBoost,
    /// A single Hoeffding tree.
    HoeffdingTree,
    /// A single streaming regression stump.
    Stump,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Self::GentleBoost,
        Self::Bagging,
        Self::AdaBoost,
        Self::HoeffdingTree,
        Self::Stump,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::GentleBoost => "gentleboost",
            Self::Bagging => "bagging",
            Self::AdaBoost => "adaboost",
            Self::HoeffdingTree => "htree",
            Self::Stump => "stump",
        }
    }

    pub fn is_ensemble(self) -> bool {
        matches!(self, Self::GentleBoost | Self::Bagging | Self::AdaBoost)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown algorithm `{s}` (expected one of gentleboost, bagging, adaboost, htree, stump)"
                ))
            })
    }
}

/// Base learner used by the ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseKind {
    Stump,
    #[default]
    HTree,
}

impl BaseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Stump => "stump",
            Self::HTree => "htree",
        }
    }

    pub fn build(self) -> BaseLearner {
        match self {
            Self::Stump => BaseLearner::binned_stump(),
            Self::HTree => BaseLearner::hoeffding_tree(),
        }
    }
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stump" => Ok(Self::Stump),
            "htree" => Ok(Self::HTree),
            other => Err(Error::Config(format!(
                "unknown base learner `{other}` (expected stump or htree)"
            ))),
        }
    }
}

/// Full description of a model. Parses from and prints to
/// `algorithm[:key=value,...]` with keys `stages`, `alpha`, `rule`, `base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub algorithm: Algorithm,
    pub stages: usize,
    pub alpha: StepSizeParam,
    pub weight_rule: WeightRule,
    pub base: BaseKind,
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            stages: DEFAULT_STAGES,
            alpha: StepSizeParam::default(),
            weight_rule: WeightRule::default(),
            base: BaseKind::default(),
            seed: 0,
        }
    }

    pub fn with_stages(mut self, stages: usize) -> Self {
        self.stages = stages;
        self
    }

    pub fn with_alpha(mut self, alpha: StepSizeParam) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_rule(mut self, rule: WeightRule) -> Self {
        self.weight_rule = rule;
        self
    }

    pub fn with_base(mut self, base: BaseKind) -> Self {
        self.base = base;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Applies `key=value` overrides on top of `self`.
    pub fn parse_with_defaults(text: &str, defaults: &ModelSpec) -> Result<Self> {
        let (name, params) = match text.split_once(':') {
            Some((n, p)) => (n.trim(), p),
            None => (text.trim(), ""),
        };
        let mut spec = ModelSpec {
            algorithm: name.parse()?,
            ..*defaults
        };
        for kv in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("model parameter `{kv}` is not key=value")))?;
            let v = v.trim();
            match k.trim() {
                "stages" | "M" | "m" => {
                    spec.stages = v.parse().map_err(|_| {
                        Error::Config(format!("stages must be an integer, got `{v}`"))
                    })?
                }
                "alpha" => {
                    let a: f64 = v
                        .parse()
                        .map_err(|_| Error::Config(format!("alpha must be a number, got `{v}`")))?;
                    spec.alpha = StepSizeParam::new(a)?;
                }
                "rule" | "weight_rule" | "weight-rule" => spec.weight_rule = v.parse()?,
                "base" => spec.base = v.parse()?,
                "seed" => {
                    spec.seed = v
                        .parse()
                        .map_err(|_| Error::Config(format!("seed must be an integer, got `{v}`")))?
                }
                other => return Err(Error::Config(format!("unknown model parameter `{other}`"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithm.is_ensemble() && self.stages == 0 {
            return Err(Error::Config(format!(
                "{} needs at least one stage",
                self.algorithm
            )));
        }
        Ok(())
    }

    /// Stable identifier for result tables. Excludes the seed, and any
    /// parameter the algorithm ignores.
    pub fn id(&self) -> String {
        match self.algorithm {
            Algorithm::GentleBoost => format!(
                "gentleboost:stages={},alpha={},rule={},base={}",
                self.stages,
                self.alpha.alpha(),
                self.weight_rule,
                self.base
            ),
            Algorithm::Bagging | Algorithm::AdaBoost => format!(
                "{}:stages={},base={}",
                self.algorithm, self.stages, self.base
            ),
            Algorithm::HoeffdingTree | Algorithm::Stump => self.algorithm.to_string(),
        }
    }

    pub fn build(&self) -> Result<Model> {
        self.validate()?;
        let base = self.base;
        let state = match self.algorithm {
            Algorithm::GentleBoost => ModelState::GentleBoost(OnlineGentleBoost::new(
                self.stages,
                self.alpha,
                self.weight_rule,
                || base.build(),
            )?),
            Algorithm::Bagging => {
                ModelState::Bagging(OzaBagging::new(self.stages, self.seed, || base.build())?)
            }
            Algorithm::AdaBoost => {
                ModelState::AdaBoost(OzaBoost::new(self.stages, self.seed, || base.build())?)
            }
            Algorithm::HoeffdingTree => ModelState::Single(BaseKind::HTree.build()),
            Algorithm::Stump => ModelState::Single(BaseKind::Stump.build()),
        };
        Ok(Model { spec: *self, state })
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let name = s.split(':').next().unwrap_or("").trim();
        Self::parse_with_defaults(s, &ModelSpec::new(name.parse()?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModelState {
    GentleBoost(OnlineGentleBoost<BaseLearner>),
    Bagging(OzaBagging<BaseLearner>),
    AdaBoost(OzaBoost<BaseLearner>),
    Single(BaseLearner),
}

/// A model together with the spec it was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    spec: ModelSpec,
    state: ModelState,
}

impl Model {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn state(&self) -> &ModelState {
        &self.state
    }
}

impl OnlineClassifier for Model {
    fn score(&self, x: &[f64]) -> f64 {
        match &self.state {
            ModelState::GentleBoost(g) => g.score(x),
            ModelState::Bagging(b) => b.score(x),
            ModelState::AdaBoost(b) => b.score(x),
            ModelState::Single(l) => clamp_unit(l.score(x)),
        }
    }

    fn learn_one(&mut self, x: &[f64], y: BinaryLabel) -> Result<()> {
        match &mut self.state {
            ModelState::GentleBoost(g) => g.learn_one(x, y),
            ModelState::Bagging(b) => b.learn_one(x, y).map(drop),
            ModelState::AdaBoost(b) => b.learn_one(x, y),
            ModelState::Single(l) => l.learn(x, y, 1.0),
        }
    }
}
