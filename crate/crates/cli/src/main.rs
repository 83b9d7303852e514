use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gentleboost::data::LoadOptions;
use gentleboost::{BaseKind, ModelSpec, StepSizeParam, WeightRule};
use gentleboost_cli::replay::{resume, snapshot_at};
use gentleboost_cli::{
    merge, read_results, run_bench, write_results, BenchConfig, Metric, Result, Settings, Snapshot,
    Table,
};

#[derive(Parser)]
#[command(name = "gentleboost", version, about = "Online GentleBoost benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prequential runs over every dataset x model x seed.
    Bench(BenchArgs),
    /// Models-by-datasets tables from results files.
    Report(ReportArgs),
    /// Train on a stream prefix and save the model.
    Snapshot(SnapshotArgs),
    /// Load a snapshot and continue the stream from where it stopped.
    Restore(RestoreArgs),
}

#[derive(Args)]
struct ModelFlags {
    /// Default number of stages for ensembles.
    #[arg(long)]
    stages: Option<usize>,
    /// Default step-size parameter, in (0, e-1).
    #[arg(long)]
    alpha: Option<f64>,
    /// as-printed or exp-consistent.
    #[arg(long, value_parser = parse_str::<WeightRule>)]
    weight_rule: Option<WeightRule>,
    /// stump or htree.
    #[arg(long, value_parser = parse_str::<BaseKind>)]
    base: Option<BaseKind>,
    /// Replace unparseable numeric cells by 0.
    #[arg(long)]
    impute_missing: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML file with the same keys as the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Schema file path or `synthetic:<generator>[:k=v,...]`. Repeatable.
    #[arg(long)]
    dataset: Vec<String>,
    /// `algorithm[:k=v,...]`, e.g. `gentleboost:stages=10`. Repeatable.
    #[arg(long)]
    model: Vec<String>,
    /// Repeatable.
    #[arg(long)]
    seed: Vec<u64>,
    /// Results file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// accuracy, roc_auc or wall_time_s. Repeatable.
    #[arg(long, value_parser = parse_str::<Metric>)]
    metric: Vec<Metric>,
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    model_flags: ModelFlags,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long, value_parser = parse_str::<Metric>)]
    metric: Vec<Metric>,
    /// Also write the tables as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SnapshotArgs {
    #[arg(long)]
    dataset: String,
    #[arg(long, default_value = "gentleboost")]
    model: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of instances to learn before saving.
    #[arg(long)]
    at: u64,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    model_flags: ModelFlags,
}

#[derive(Args)]
struct RestoreArgs {
    snapshot: PathBuf,
    /// Dataset to continue on; defaults to the one recorded in the snapshot.
    #[arg(long)]
    dataset: Option<String>,
    /// Per-instance scores of the continued run as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    impute_missing: bool,
}

fn parse_str<T: std::str::FromStr>(s: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

fn non_empty<T>(v: Vec<T>) -> Option<Vec<T>> {
    (!v.is_empty()).then_some(v)
}

fn bench(args: BenchArgs) -> Result<ExitCode> {
    let f = args.model_flags;
    let flags = Settings {
        datasets: non_empty(args.dataset),
        models: non_empty(args.model),
        seeds: non_empty(args.seed),
        out: args.out,
        metrics: non_empty(args.metric),
        workers: args.workers,
        impute_missing: f.impute_missing.then_some(true),
        stages: f.stages,
        alpha: f.alpha,
        weight_rule: f.weight_rule,
        base: f.base,
    };
    let plan = BenchConfig::resolve(flags, args.config.as_deref())?.plan()?;
    let outcome = run_bench(&plan)?;
    let header = plan.config.to_toml();
    match &plan.config.out {
        Some(path) => {
            gentleboost_cli::write_results_file(path, &header, &outcome.records)?;
            for &m in &plan.config.metrics {
                println!("{}", Table::build(m, &outcome.records).render_text());
            }
        }
        None => write_results(io::stdout().lock(), &header, &outcome.records)?,
    }
    if outcome.is_success() {
        return Ok(ExitCode::SUCCESS);
    }
    eprintln!(
        "{} of {} runs failed:",
        outcome.failures.len(),
        outcome.failures.len() + outcome.records.len()
    );
    for f in &outcome.failures {
        eprintln!(
            "  {} / {} / seed {}: {}",
            f.dataset, f.model, f.seed, f.error
        );
    }
    Ok(ExitCode::FAILURE)
}

fn report(args: ReportArgs) -> Result<ExitCode> {
    let sets = args
        .files
        .iter()
        .map(|p| read_results(p))
        .collect::<Result<Vec<_>>>()?;
    let records = merge(sets)?;
    let metrics = non_empty(args.metric).unwrap_or_else(|| vec![Metric::Accuracy, Metric::RocAuc]);
    let tables: Vec<Table> = metrics.iter().map(|&m| Table::build(m, &records)).collect();
    let mut stdout = io::stdout().lock();
    for t in &tables {
        writeln!(stdout, "{}", t.render_text())?;
    }
    if let Some(path) = args.out {
        let mut w = csv::WriterBuilder::new().flexible(true).from_path(path)?;
        for t in &tables {
            t.write_csv(&mut w)?;
        }
        w.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn model_spec(text: &str, seed: u64, f: &ModelFlags) -> Result<ModelSpec> {
    let mut defaults = ModelSpec::new(gentleboost::Algorithm::GentleBoost);
    if let Some(s) = f.stages {
        defaults = defaults.with_stages(s);
    }
    if let Some(a) = f.alpha {
        defaults = defaults.with_alpha(StepSizeParam::new(a)?);
    }
    if let Some(r) = f.weight_rule {
        defaults = defaults.with_rule(r);
    }
    if let Some(b) = f.base {
        defaults = defaults.with_base(b);
    }
    Ok(ModelSpec::parse_with_defaults(
        text,
        &defaults.with_seed(seed),
    )?)
}

fn snapshot(args: SnapshotArgs) -> Result<ExitCode> {
    let spec = model_spec(&args.model, args.seed, &args.model_flags)?;
    let options = LoadOptions {
        impute_missing: args.model_flags.impute_missing,
    };
    let snap = snapshot_at(spec.build()?, &args.dataset, args.at, options)?;
    snap.write(&args.out)?;
    println!(
        "saved {} after {} instances to {}",
        spec,
        snap.meta.instances_seen,
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn restore(args: RestoreArgs) -> Result<ExitCode> {
    let snap = Snapshot::read(&args.snapshot)?;
    println!(
        "{}: model {} written by {}, {} instances seen",
        args.snapshot.display(),
        snap.model.spec(),
        snap.meta.tool,
        snap.meta.instances_seen
    );
    let Some(dataset) = args.dataset.or_else(|| snap.meta.dataset.clone()) else {
        return Ok(ExitCode::SUCCESS);
    };
    let options = LoadOptions {
        impute_missing: args.impute_missing,
    };
    let start = snap.meta.instances_seen;
    let (_, run) = resume(snap, &dataset, options)?;
    println!(
        "continued on {dataset} for {} instances: accuracy {:.6}",
        run.instances(),
        run.accuracy()
    );
    if let Some(path) = args.out {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["instance", "label", "score"])?;
        for (i, (score, y)) in run.scores.iter().enumerate() {
            w.write_record([
                (start + i as u64).to_string(),
                y.to_string(),
                score.to_string(),
            ])?;
        }
        w.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(a) => bench(a),
        Command::Report(a) => report(a),
        Command::Snapshot(a) => snapshot(a),
        Command::Restore(a) => restore(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
