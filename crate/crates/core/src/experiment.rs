//! Monte-Carlo comparison of the four estimators.
//!
//! One conference is generated per run. For each (noise case, repetition)
//! cell a fresh set of reviews is simulated from the seed scope
//! `child(Cell, case · 2²⁰ + repetition)` of the master seed, so cells are
//! independent of each other, of the order cases are listed in, and of how
//! many repetitions are requested.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conference::{gen_conference, Conference, GenConfig};
use crate::error::{Error, Result};
use crate::estimators::{build_owner_partition, estimate_all, BlendWeights, ComparisonSource, Method, OwnerPartition};
use crate::seeds::{Purpose, SeedStream};
use crate::sgp::{generate_final_scores, NoiseCase};

const REPETITION_BITS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Table,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "table" | "text" | "text-table" => Ok(OutputFormat::Table),
            _ => Err(Error::Config(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub gen: GenConfig,
    pub cases: Vec<NoiseCase>,
    pub repetitions: usize,
    /// Weight on the isotonic fit in the reviewer calibration.
    pub blend: f64,
    /// Weight on the isotonic fit in the author calibration.
    pub author_blend: f64,
    /// Where the reviewer calibration reads its pairwise comparisons.
    pub comparisons: ComparisonSource,
    /// Drives every stream in the run, including conference generation;
    /// `gen.master_seed` is ignored here.
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            gen: GenConfig::default(),
            cases: NoiseCase::ALL.to_vec(),
            repetitions: 10,
            blend: 0.5,
            author_blend: 1.0,
            comparisons: ComparisonSource::Scores,
            master_seed: 0,
            output_path: None,
            output_format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.repetitions >= 1 << REPETITION_BITS {
            return Err(Error::Config(format!("at most {} repetitions", (1 << REPETITION_BITS) - 1)));
        }
        if self.cases.is_empty() {
            return Err(Error::Config("at least one noise case is required".into()));
        }
        for (name, b) in [("blend", self.blend), ("author_blend", self.author_blend)] {
            if !(0.0..=1.0).contains(&b) {
                return Err(Error::Config(format!("{name} {b} outside [0, 1]")));
            }
        }
        self.gen.validate()
    }

    pub fn weights(&self) -> BlendWeights {
        BlendWeights {
            reviewer: self.blend,
            author: self.author_blend,
        }
    }

    fn conference_config(&self) -> GenConfig {
        self.gen.clone().with_seed(self.master_seed)
    }
}

/// Outcome of one (case, repetition) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub case: NoiseCase,
    pub repetition: usize,
    /// In [`Method::ALL`] order.
    pub rmse: [f64; 4],
    pub top_tier_size: usize,
    pub n_tiers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub case: NoiseCase,
    pub method: Method,
    pub mean_rmse: f64,
    pub sd_rmse: f64,
}

/// Mean and standard deviation of the RMSE for every (case, method).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResultsTable {
    pub rows: Vec<ResultRow>,
}

impl ResultsTable {
    pub fn get(&self, case: NoiseCase, method: Method) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.case == case && r.method == method)
    }

    pub fn mean(&self, case: NoiseCase, method: Method) -> Option<f64> {
        self.get(case, method).map(|r| r.mean_rmse)
    }

    /// Cases in first-appearance order.
    pub fn cases(&self) -> Vec<NoiseCase> {
        let mut out: Vec<NoiseCase> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.case) {
                out.push(r.case);
            }
        }
        out
    }

    /// Method with the smallest mean RMSE for `case`.
    pub fn best_method(&self, case: NoiseCase) -> Option<Method> {
        self.rows
            .iter()
            .filter(|r| r.case == case)
            .min_by(|a, b| a.mean_rmse.total_cmp(&b.mean_rmse))
            .map(|r| r.method)
    }
}

/// Shared inputs of every cell.
pub struct Prepared {
    pub conference: Conference,
    pub owners: OwnerPartition,
}

pub fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    config.validate()?;
    let conference = gen_conference(&config.conference_config())?;
    let owners = build_owner_partition(&conference);
    Ok(Prepared { conference, owners })
}

pub fn cell_seeds(master_seed: u64, case: NoiseCase, repetition: usize) -> SeedStream {
    let index = (case.stream_index() << REPETITION_BITS) | repetition as u64;
    SeedStream::new(master_seed).child(Purpose::Cell, index)
}

pub fn run_cell(prepared: &Prepared, config: &ExperimentConfig, case: NoiseCase, repetition: usize) -> Result<CellResult> {
    let seeds = cell_seeds(config.master_seed, case, repetition);
    let conf = &prepared.conference;
    let sim = generate_final_scores(conf, case, &seeds)?;
    let orders = config.comparisons.orders(&sim);
    let est = estimate_all(&sim.final_scores, &orders, conf, &prepared.owners, config.weights())?;
    Ok(CellResult {
        case,
        repetition,
        rmse: est.rmse(&conf.true_scores)?,
        top_tier_size: est.tiers.top_tier_size(),
        n_tiers: est.tiers.len(),
    })
}

/// Every cell of the experiment, ordered by case (as listed) then
/// repetition. `workers = None` uses the global pool; `Some(k)` runs on a
/// dedicated pool of `k` threads.
pub fn run_cells(config: &ExperimentConfig, workers: Option<usize>) -> Result<(Prepared, Vec<CellResult>)> {
    let prepared = prepare(config)?;
    let jobs: Vec<(NoiseCase, usize)> = config
        .cases
        .iter()
        .flat_map(|&c| (0..config.repetitions).map(move |r| (c, r)))
        .collect();
    let cells = execute(&jobs, workers, |&(case, rep)| run_cell(&prepared, config, case, rep))?;
    Ok((prepared, cells))
}

#[cfg(feature = "parallel")]
fn execute<J: Sync, T: Send>(
    jobs: &[J],
    workers: Option<usize>,
    f: impl Fn(&J) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    use rayon::prelude::*;
    let run = || jobs.par_iter().map(&f).collect::<Result<Vec<T>>>();
    match workers {
        None => run(),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run),
    }
}

#[cfg(not(feature = "parallel"))]
fn execute<J, T>(jobs: &[J], _workers: Option<usize>, f: impl Fn(&J) -> Result<T>) -> Result<Vec<T>> {
    jobs.iter().map(f).collect()
}

/// Aggregates cells into means and sample standard deviations (0 for a
/// single repetition), in case order then [`Method::ALL`] order.
pub fn summarize(cases: &[NoiseCase], cells: &[CellResult]) -> ResultsTable {
    let mut rows = Vec::with_capacity(cases.len() * 4);
    for &case in cases {
        let mine: Vec<&CellResult> = cells.iter().filter(|c| c.case == case).collect();
        for (k, method) in Method::ALL.into_iter().enumerate() {
            let xs: Vec<f64> = mine.iter().map(|c| c.rmse[k]).collect();
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let sd = if xs.len() > 1 {
                (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            rows.push(ResultRow {
                case,
                method,
                mean_rmse: mean,
                sd_rmse: sd,
            });
        }
    }
    ResultsTable { rows }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultsTable> {
    run_experiment_with_workers(config, None)
}

pub fn run_experiment_with_workers(config: &ExperimentConfig, workers: Option<usize>) -> Result<ResultsTable> {
    let (_, cells) = run_cells(config, workers)?;
    Ok(summarize(&config.cases, &cells))
}

pub fn render_results(table: &ResultsTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => render_csv(table),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(table).expect("results serialize");
            s.push('\n');
            s
        }
        OutputFormat::Table => render_table(table),
    }
}

fn render_csv(table: &ResultsTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &table.rows {
        w.serialize(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Methods as rows, cases as columns, `mean (sd)` per cell; the smallest
/// mean in each column carries a `*`.
fn render_table(table: &ResultsTable) -> String {
    let cases = table.cases();
    let label_width = Method::ALL.iter().map(|m| m.label().len()).max().unwrap_or(0);
    let cell_width = 16;
    let mut out = String::new();
    let _ = write!(out, "{:<label_width$}", "RMSE");
    for c in &cases {
        let _ = write!(out, " | {:^cell_width$}", c.name());
    }
    out.push('\n');
    out.push_str(&"-".repeat(label_width + cases.len() * (cell_width + 3)));
    out.push('\n');
    for m in Method::ALL {
        let _ = write!(out, "{:<label_width$}", m.label());
        for &c in &cases {
            let cell = match table.get(c, m) {
                Some(r) => {
                    let mark = if table.best_method(c) == Some(m) { "*" } else { " " };
                    format!("{:.3}{mark} ({:.3})", r.mean_rmse, r.sd_rmse)
                }
                None => "-".to_string(),
            };
            let _ = write!(out, " | {cell:^cell_width$}");
        }
        out.push('\n');
    }
    out.push_str("* column minimum\n");
    out
}

pub fn emit_results(table: &ResultsTable, format: OutputFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_results(table, format)).map_err(|e| Error::io(path, e))
}

pub fn parse_results_json(text: &str) -> Result<ResultsTable> {
    serde_json::from_str(text).map_err(|e| Error::Argument(format!("results JSON: {e}")))
}
