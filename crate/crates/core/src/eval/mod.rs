//! Prequential (test-then-train) evaluation and its metrics.

mod metrics;
mod prequential;

pub use metrics::{accuracy, roc_auc};
pub use prequential::{prequential_run, Prequential, RunRecord};
