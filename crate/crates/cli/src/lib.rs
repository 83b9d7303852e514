//! Library behind the `gentleboost` command: benchmark runs, results files,
//! report tables and model snapshots.

pub mod bench;
pub mod config;
pub mod dataset;
pub mod error;
pub mod replay;
pub mod report;
pub mod results;
pub mod snapshot;

pub use bench::{run_bench, run_one, BenchOutcome, RunFailure};
pub use config::{BenchConfig, Plan, Settings};
pub use dataset::DatasetSource;
pub use error::{CliError, Result};
pub use report::{merge, Table};
pub use results::{read_results, write_results, write_results_file, Metric, TOOL_VERSION};
pub use snapshot::{Snapshot, SnapshotMeta, FORMAT_VERSION};
