//! Streaming binary classification with boosted ensembles.
//!
//! The centerpiece is [`OnlineGentleBoost`], which extends GentleBoost to a
//! single pass over a stream by replacing the per-round renormalised Newton
//! weights with a bounded multiplicative step (see [`boosting::step_size`]).
//! Batch GentleBoost, Oza-Russell online bagging and boosting, a prequential
//! evaluation loop and dataset ingestion are provided around it so the
//! algorithms can be compared on the same streams.
//!
//! Labels are always [`BinaryLabel`] values in {-1, +1}; every weak learner
//! emits a real score in [-1, 1].

pub mod boosting;
pub mod data;
pub mod error;
pub mod eval;
pub mod learners;
pub mod loss;
pub mod model;
pub mod types;

pub use boosting::{
    batch_fit, pointwise_newton_step, step_size, BatchFit, Ensemble, OnlineGentleBoost, OzaBagging,
    OzaBoost, WeightRule, DEFAULT_STAGES,
};
pub use error::{Error, Result};
pub use eval::{prequential_run, roc_auc, Prequential, RunRecord};
pub use learners::{BaseLearner, HoeffdingTree, RegressionStump, WeakLearner};
pub use loss::{exponential_loss, sign_of};
pub use model::{Algorithm, BaseKind, Model, ModelSpec, OnlineClassifier};
pub use types::{BinaryLabel, Instance, Margin, SampleWeight, StepSizeParam};
