//! Training a model part-way through a stream and resuming it later.

use gentleboost::{prequential_run, Model, OnlineClassifier, Prequential};

use crate::dataset::DatasetSource;
use crate::error::{CliError, Result};
use crate::snapshot::Snapshot;
use gentleboost::data::LoadOptions;

/// Trains `model` on the first `upto` instances of `dataset` and wraps it in
/// a snapshot. Fails if the stream is shorter than `upto`.
pub fn snapshot_at(
    mut model: Model,
    dataset: &str,
    upto: u64,
    options: LoadOptions,
) -> Result<Snapshot> {
    let source = DatasetSource::resolve(dataset)?;
    let mut seen = 0;
    for item in source.open(options)?.take(upto as usize) {
        let (x, y) = item?;
        model.learn_one(x.features(), y)?;
        seen += 1;
    }
    if seen < upto {
        return Err(CliError::Config(format!(
            "dataset `{dataset}` has only {seen} instances, cannot snapshot at {upto}"
        )));
    }
    Ok(Snapshot::new(model, Some(dataset.to_string()), seen))
}

/// Continues test-then-train from where the snapshot stopped.
pub fn resume(
    snapshot: Snapshot,
    dataset: &str,
    options: LoadOptions,
) -> Result<(Model, Prequential)> {
    let source = DatasetSource::resolve(dataset)?;
    let mut model = snapshot.model;
    let rest = source
        .open(options)?
        .skip(snapshot.meta.instances_seen as usize);
    let run = prequential_run(rest, &mut model)?;
    Ok((model, run))
}
