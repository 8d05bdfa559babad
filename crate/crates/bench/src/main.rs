//! `review-calib`: runs the estimator comparison and writes the RMSE table.
//!
//! Exit codes: 0 success, 2 configuration error, 3 generation failure,
//! 4 I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use review_calib::experiment::{render_results, run_experiment_with_workers};
use review_calib::{ComparisonSource, Error, ErrorKind, ExperimentConfig, NoiseCase, OutputFormat};

const SEED_ENV: &str = "REVIEW_CALIB_SEED";

#[derive(Debug, Parser)]
#[command(name = "review-calib", version, about = "Compare review-score calibration methods on a synthetic conference")]
struct Args {
    /// JSON experiment configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed (overridden by REVIEW_CALIB_SEED).
    #[arg(long)]
    seed: Option<u64>,

    /// Comma-separated noise cases, e.g. Base,NoBias,NoVariance,BigBias,BigVariance.
    #[arg(long, value_delimiter = ',')]
    cases: Option<Vec<String>>,

    /// Score simulations per case.
    #[arg(long)]
    reps: Option<usize>,

    /// Weight on the isotonic fit in the reviewer calibration.
    #[arg(long)]
    blend: Option<f64>,

    /// Comparison source for the reviewer calibration: scores or rankings.
    #[arg(long)]
    comparisons: Option<String>,

    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    /// csv, json or table.
    #[arg(long)]
    format: Option<String>,

    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

fn build_config(args: &Args) -> Result<ExperimentConfig, Error> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Ok(value) = std::env::var(SEED_ENV) {
        config.master_seed = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{SEED_ENV}={value:?} is not an unsigned 64-bit integer")))?;
    }
    if let Some(cases) = &args.cases {
        config.cases = cases.iter().map(|c| c.parse::<NoiseCase>()).collect::<Result<_, _>>()?;
    }
    if let Some(reps) = args.reps {
        config.repetitions = reps;
    }
    if let Some(blend) = args.blend {
        config.blend = blend;
    }
    if let Some(source) = &args.comparisons {
        config.comparisons = source.parse::<ComparisonSource>()?;
    }
    if let Some(out) = &args.out {
        config.output_path = Some(out.clone());
    }
    if let Some(format) = &args.format {
        config.output_format = format.parse::<OutputFormat>()?;
    }
    if args.workers == Some(0) {
        return Err(Error::Config("--workers must be at least 1".into()));
    }
    config.validate()?;
    Ok(config)
}

fn run(args: &Args) -> Result<(), Error> {
    let config = build_config(args)?;
    let table = run_experiment_with_workers(&config, args.workers)?;
    let text = render_results(&table, config.output_format);
    match &config.output_path {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Config | ErrorKind::Argument => 2,
        ErrorKind::Generation | ErrorKind::Numerical => 3,
        ErrorKind::Io => 4,
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("review-calib: {e}");
            ExitCode::from(exit_code(e.kind()))
        }
    }
}
