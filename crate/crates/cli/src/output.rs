//! Per-run CSV traces and the sweep summary.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rqcd_core::{Algorithm, OptimizerTrace};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Trace CSV header, in column order.
pub const CSV_COLUMNS: [&str; 15] = [
    "run_id",
    "seed",
    "algorithm",
    "n_qubits",
    "delta",
    "d",
    "iter",
    "energy",
    "energy_error",
    "grad_norm",
    "step_size",
    "delta_k",
    "circuit_evals",
    "cumulative_gates",
    "wall_ms",
];

pub const SUMMARY_FILE: &str = "summary.json";

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// Subspace dimension column: empty for VQA.
fn d_field(trace: &OptimizerTrace) -> Option<usize> {
    trace.algorithm.is_riemannian().then_some(trace.d)
}

/// Stable identifier of a run, also its file stem.
pub fn run_id(trace: &OptimizerTrace) -> String {
    match d_field(trace) {
        Some(d) => format!(
            "{}_n{}_d{}_s{}",
            trace.algorithm, trace.n_qubits, d, trace.seed
        ),
        None => format!("{}_n{}_s{}", trace.algorithm, trace.n_qubits, trace.seed),
    }
}

/// Writes one row per iteration record. `wall_ms` is written as 0 unless
/// `record_wall_time` is set, so traces stay byte-reproducible by default.
pub fn write_trace(trace: &OptimizerTrace, record_wall_time: bool, path: &Path) -> CliResult<()> {
    let csv_err = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    let id = run_id(trace);
    let d = d_field(trace).map(|d| d.to_string()).unwrap_or_default();
    for r in &trace.records {
        let wall = if record_wall_time { r.wall_ms } else { 0 };
        w.write_record([
            id.clone(),
            trace.seed.to_string(),
            trace.algorithm.to_string(),
            trace.n_qubits.to_string(),
            fmt_float(trace.delta),
            d.clone(),
            r.iter.to_string(),
            fmt_float(r.energy),
            fmt_float(r.energy_error),
            fmt_float(r.grad_norm),
            fmt_opt(r.step_size),
            fmt_opt(r.delta_k),
            r.circuit_evals.to_string(),
            r.cumulative_gates.to_string(),
            wall.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct TraceRow {
    pub run_id: String,
    pub seed: u64,
    pub algorithm: String,
    pub n_qubits: usize,
    pub delta: f64,
    pub d: Option<usize>,
    pub iter: usize,
    pub energy: f64,
    pub energy_error: f64,
    pub grad_norm: f64,
    pub step_size: Option<f64>,
    pub delta_k: Option<f64>,
    pub circuit_evals: usize,
    pub cumulative_gates: usize,
    pub wall_ms: u64,
}

/// Reads a trace CSV, checking the header against [`CSV_COLUMNS`].
pub fn read_trace(path: &Path) -> CliResult<Vec<TraceRow>> {
    let csv_err = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?;
    if !header.iter().eq(CSV_COLUMNS) {
        return Err(CliError::Config(format!(
            "{}: unexpected header {:?}",
            path.display(),
            header
        )));
    }
    r.deserialize().collect::<Result<_, _>>().map_err(csv_err)
}

/// The per-run data the summary aggregates are computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSeries {
    pub algorithm: String,
    pub n_qubits: usize,
    pub d: Option<usize>,
    pub seed: u64,
    pub errors: Vec<f64>,
}

impl RunSeries {
    pub fn from_trace(trace: &OptimizerTrace) -> Self {
        Self {
            algorithm: trace.algorithm.to_string(),
            n_qubits: trace.n_qubits,
            d: d_field(trace),
            seed: trace.seed,
            errors: trace.errors(),
        }
    }

    /// `None` for a header-only file.
    pub fn from_rows(rows: &[TraceRow]) -> Option<Self> {
        let first = rows.first()?;
        Some(Self {
            algorithm: first.algorithm.clone(),
            n_qubits: first.n_qubits,
            d: first.d,
            seed: first.seed,
            errors: rows.iter().map(|r| r.energy_error).collect(),
        })
    }

    pub fn iterations(&self) -> usize {
        self.errors.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run_id: String,
    pub file: String,
    pub seed: u64,
    pub algorithm: String,
    pub n_qubits: usize,
    pub d: Option<usize>,
    pub iterations: usize,
    pub final_energy: f64,
    pub final_error: f64,
    pub status: String,
}

/// Seed-averaged statistics of one (algorithm, N, d) point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAggregate {
    pub algorithm: String,
    pub n_qubits: usize,
    pub d: Option<usize>,
    pub runs: usize,
    pub mean_iterations: f64,
    pub mean_final_error: f64,
    /// Mean energy error per iteration; runs that stopped early hold their
    /// final value.
    pub mean_error_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub tag: String,
    pub runs: Vec<RunSummary>,
    pub aggregates: Vec<GroupAggregate>,
}

/// Groups runs by (algorithm, N, d) and averages them in seed order.
pub fn aggregate(series: &[RunSeries]) -> Vec<GroupAggregate> {
    let mut groups: BTreeMap<(usize, String, Option<usize>), Vec<&RunSeries>> = BTreeMap::new();
    for s in series {
        groups
            .entry((s.n_qubits, s.algorithm.clone(), s.d))
            .or_default()
            .push(s);
    }
    groups
        .into_iter()
        .map(|((n_qubits, algorithm, d), mut members)| {
            members.sort_by_key(|s| s.seed);
            let count = members.len() as f64;
            let len = members.iter().map(|s| s.errors.len()).max().unwrap_or(0);
            let mean_error_trace = (0..len)
                .map(|k| {
                    members
                        .iter()
                        .filter_map(|s| s.errors.get(k).or(s.errors.last()))
                        .sum::<f64>()
                        / count
                })
                .collect();
            let mean_iterations =
                members.iter().map(|s| s.iterations() as f64).sum::<f64>() / count;
            let mean_final_error =
                members.iter().filter_map(|s| s.errors.last()).sum::<f64>() / count;
            GroupAggregate {
                algorithm,
                n_qubits,
                d,
                runs: members.len(),
                mean_iterations,
                mean_final_error,
                mean_error_trace,
            }
        })
        .collect()
}

/// Recomputes the aggregates of a sweep directory from its CSV files alone.
pub fn aggregate_dir(dir: &Path) -> CliResult<Vec<GroupAggregate>> {
    let mut series = Vec::new();
    for path in csv_files(dir)? {
        if let Some(s) = RunSeries::from_rows(&read_trace(&path)?) {
            series.push(s);
        }
    }
    Ok(aggregate(&series))
}

pub fn csv_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn write_summary(summary: &Summary, path: &Path) -> CliResult<()> {
    let text = serde_json::to_string_pretty(summary).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

pub fn read_summary(path: &Path) -> CliResult<Summary> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses the algorithm column back into the enum.
pub fn parse_algorithm(name: &str) -> CliResult<Algorithm> {
    name.parse()
        .map_err(|e: rqcd_core::Error| CliError::Config(e.to_string()))
}
