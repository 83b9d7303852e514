//! Runs every (dataset, model, seed) combination over a bounded worker pool.

use gentleboost::data::LoadOptions;
use gentleboost::{prequential_run, ModelSpec, RunRecord};
use rayon::prelude::*;

use crate::config::Plan;
use crate::dataset::DatasetSource;
use crate::error::{CliError, Result};

/// A run that could not complete.
#[derive(Debug)]
pub struct RunFailure {
    pub dataset: String,
    pub model: String,
    pub seed: u64,
    pub error: CliError,
}

#[derive(Debug, Default)]
pub struct BenchOutcome {
    /// Successful runs, in (dataset, model, seed) plan order.
    pub records: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
}

impl BenchOutcome {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One prequential run from a fresh model and a fresh stream.
pub fn run_one(
    dataset: &DatasetSource,
    spec: &ModelSpec,
    options: LoadOptions,
) -> Result<RunRecord> {
    let mut model = spec.build()?;
    let run = prequential_run(dataset.open(options)?, &mut model)?;
    Ok(RunRecord::new(&dataset.id(), spec, &run))
}

pub fn run_bench(plan: &Plan) -> Result<BenchOutcome> {
    let options = LoadOptions {
        impute_missing: plan.config.impute_missing,
    };
    let jobs: Vec<(&DatasetSource, ModelSpec)> = plan
        .datasets
        .iter()
        .flat_map(|d| {
            plan.models
                .iter()
                .flat_map(move |m| plan.config.seeds.iter().map(move |&s| (d, m.with_seed(s))))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.config.workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<RunRecord>> = pool.install(|| {
        jobs.par_iter()
            .map(|(d, spec)| {
                log::debug!("running {} on {} (seed {})", spec, d.id(), spec.seed);
                run_one(d, spec, options)
            })
            .collect()
    });

    let mut outcome = BenchOutcome::default();
    for ((d, spec), result) in jobs.iter().zip(results) {
        match result {
            Ok(r) => outcome.records.push(r),
            Err(error) => outcome.failures.push(RunFailure {
                dataset: d.id(),
                model: spec.id(),
                seed: spec.seed,
                error,
            }),
        }
    }
    Ok(outcome)
}
