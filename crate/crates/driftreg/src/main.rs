use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use driftreg::config::{ExperimentConfig, ExperimentMatrix};
use driftreg::dataset::{Manifest, SentinelPolicy};
use driftreg::runner::{default_data_dir, Runner};
use driftreg::{fetch, report, Error};
use driftreg_core::{AdwinBound, AdwinInput, DetectorMode, Z1Policy};

/// Streaming linear regression with RMSE-delta and ADWIN drift detection.
#[derive(Parser)]
#[command(name = "driftreg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment.
    Run(RunArgs),
    /// Run a matrix of experiments from a config file.
    Matrix(MatrixArgs),
    /// Download the datasets and print their digests.
    FetchData(FetchArgs),
}

#[derive(Args)]
struct Common {
    /// Directory with one sub-directory per dataset [default: $DRIFTREG_DATA or ./data]
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Dataset manifest replacing the built-in one.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Dataset name from the manifest, or `synthetic`.
    #[arg(long)]
    dataset: String,
    #[arg(long)]
    target: String,
    #[arg(long, default_value = "rmse", value_parser = parse::<DetectorMode>)]
    detector: DetectorMode,
    #[arg(long, default_value_t = 120)]
    working_points: usize,
    #[arg(long, default_value_t = 90)]
    fit_window: usize,
    #[arg(long, default_value_t = 30)]
    buffer: usize,
    /// RMSE-delta threshold, e.g. 0.1e-4.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    adwin_delta: Option<f64>,
    #[arg(long, default_value = "advance", value_parser = parse::<Z1Policy>)]
    z1_policy: Z1Policy,
    #[arg(long, default_value = "hoeffding", value_parser = parse::<AdwinBound>)]
    adwin_bound: AdwinBound,
    /// `prediction` or `feature:<index>`.
    #[arg(long, default_value = "prediction", value_parser = parse::<AdwinInput>)]
    adwin_input: AdwinInput,
    /// Keep ADWIN's window across model replacements.
    #[arg(long)]
    no_adwin_reset: bool,
    #[arg(long, value_parser = parse::<SentinelPolicy>)]
    sentinel_policy: Option<SentinelPolicy>,
    /// Seed for the synthetic dataset.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "run")]
    label: String,
    /// Write the per-point trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the result as a JSON line.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    common: Common,
    /// Matrix file; the built-in 24-experiment matrix when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Results as JSON lines.
    #[arg(long)]
    results: Option<PathBuf>,
    /// Directory receiving one trace CSV per experiment.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    /// Print the built-in matrix as TOML and exit.
    #[arg(long)]
    print_default: bool,
}

#[derive(Args)]
struct FetchArgs {
    #[arg(long)]
    dir: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Only these datasets.
    #[arg(long = "dataset")]
    datasets: Vec<String>,
}

fn parse<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(a),
        Command::Matrix(a) => matrix(a),
        Command::FetchData(a) => fetch_data(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = if matches!(e.root(), Error::Config(_)) { USAGE } else { 1 };
            ExitCode::from(code)
        }
    }
}

fn runner(common: &Common, fallback_dir: Option<&Path>) -> Result<Runner, Error> {
    let dir = common
        .data_dir
        .clone()
        .or_else(|| fallback_dir.map(Path::to_owned))
        .unwrap_or_else(default_data_dir);
    let mut r = Runner::new(dir);
    if let Some(path) = &common.manifest {
        r.manifest = Manifest::from_file(path)?;
    }
    Ok(r)
}

fn run(a: RunArgs) -> Result<u8, Error> {
    let runner = runner(&a.common, None)?;
    let cfg = ExperimentConfig {
        threshold: a.threshold,
        adwin_delta: a.adwin_delta,
        working_points: a.working_points,
        fit_window: a.fit_window,
        buffer: a.buffer,
        z1_policy: a.z1_policy,
        adwin_bound: a.adwin_bound,
        adwin_input: a.adwin_input,
        adwin_reset: !a.no_adwin_reset,
        sentinel_policy: a.sentinel_policy,
        seed: a.seed,
        trace: a.trace,
        out: a.out,
        ..ExperimentConfig::new(&a.label, &a.dataset, &a.target, a.detector)
    };
    cfg.engine_config()?;
    let r = runner.run_experiment(&cfg)?;
    println!(
        "{}: rmse {:.4}, model updates {}, predictions {}, {:.3} s, {:.0} rec/s",
        r.info.label,
        r.rmse,
        r.model_updates,
        r.prediction_count,
        r.total_execution_seconds,
        r.processing_rate
    );
    Ok(0)
}

fn matrix(a: MatrixArgs) -> Result<u8, Error> {
    let m = match &a.config {
        Some(path) => ExperimentMatrix::from_file(path).map_err(|e| match e {
            Error::FileNotFound(p) => Error::Config(format!("no such config file {}", p.display())),
            other => other,
        })?,
        None => ExperimentMatrix::reference(),
    };
    if a.print_default {
        print!("{}", ExperimentMatrix::reference().to_toml());
        return Ok(0);
    }
    if a.parallel == 0 {
        return Err(Error::Config("--parallel must be at least 1".into()));
    }
    let mut runner = runner(&a.common, m.data_dir.as_deref())?;
    runner.keep_trace = a.trace_dir.is_some();
    let results = runner.run_matrix(&m, a.parallel);
    print!("{}", report::render_table(&m, &results));
    let ok: Vec<_> = results.iter().filter_map(|r| r.as_ref().ok()).cloned().collect();
    if let Some(path) = &a.results {
        report::write_results(path, &ok)?;
    }
    if let Some(dir) = &a.trace_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.clone(),
            source: e,
        })?;
        for r in &ok {
            report::emit_plot_data(r, &dir.join(trace_file_name(&r.info.label)))?;
        }
    }
    Ok(if ok.len() == results.len() { 0 } else { 1 })
}

/// "Exp. 1 - (a)" → "exp_1_a.csv".
fn trace_file_name(label: &str) -> String {
    let mut s = String::new();
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            s.push(c.to_ascii_lowercase());
        } else if !s.ends_with('_') && !s.is_empty() {
            s.push('_');
        }
    }
    format!("{}.csv", s.trim_end_matches('_'))
}

fn fetch_data(a: FetchArgs) -> Result<u8, Error> {
    let manifest = match &a.manifest {
        Some(p) => Manifest::from_file(p)?,
        None => Manifest::builtin(),
    };
    for name in &a.datasets {
        manifest.dataset(name).map_err(|e| Error::Config(e.to_string()))?;
    }
    let mut failed = false;
    for entry in &manifest.datasets {
        if !a.datasets.is_empty() && !a.datasets.contains(&entry.name) {
            continue;
        }
        match fetch::fetch_dataset(entry, &a.dir) {
            Ok(files) => {
                for f in files {
                    let status = match f.verified {
                        Some(true) => "verified",
                        Some(false) => "MISMATCH",
                        None => "unpinned",
                    };
                    println!("{}  {}  {status}", f.sha256, f.path.display());
                }
            }
            Err(e) => {
                eprintln!("{}: {e}", entry.name);
                failed = true;
            }
        }
    }
    Ok(u8::from(failed))
}
