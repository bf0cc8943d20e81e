//! Sweep execution: run members in parallel, write one CSV per run, then the summary.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use rqcd_core::{build_xxz, ground_energy, Algorithm, OptimizerConfig, OptimizerTrace};

use crate::error::{CliError, CliResult};
use crate::output::{
    aggregate, run_id, write_summary, write_trace, RunSeries, RunSummary, Summary, SUMMARY_FILE,
};
use crate::spec::{ExperimentSpec, ExperimentTag};

/// Environment variable capping the number of worker threads.
pub const WORKERS_ENV: &str = "RQCD_WORKERS";

/// Subspace dimensions of the d-scan protocol.
pub const SCAN_D_VALUES: [usize; 8] = [1, 4, 8, 16, 32, 64, 128, 256];

/// Algorithms compared by the single-direction protocol.
pub const COMPARE_D1_ALGORITHMS: [Algorithm; 3] = [
    Algorithm::RrsnD1,
    Algorithm::RrsgpFixed,
    Algorithm::RrsgpExact,
];

/// Thread pool sized by [`WORKERS_ENV`], or rayon's default when unset.
pub fn worker_pool() -> CliResult<rayon::ThreadPool> {
    let threads = match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                return Err(CliError::Config(format!(
                    "{WORKERS_ENV} must be a positive integer, got '{v}'"
                )))
            }
        },
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("cannot build worker pool: {e}")))
}

pub fn ground_energy_of(n_qubits: usize, delta: f64) -> CliResult<f64> {
    let op = build_xxz(n_qubits, delta).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(ground_energy(&op)?)
}

/// Runs every member, writing `<run_id>.csv` into `out` as each finishes and
/// `summary.json` once all are done.
pub fn run_sweep(
    tag: ExperimentTag,
    members: &[OptimizerConfig],
    out: &Path,
    record_wall_time: bool,
) -> CliResult<Summary> {
    let pool = worker_pool()?;
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let traces: Vec<(RunSummary, RunSeries)> = pool.install(|| {
        members
            .par_iter()
            .map(|config| {
                let trace = rqcd_core::run(config)?;
                persist(&trace, out, record_wall_time)
            })
            .collect::<CliResult<_>>()
    })?;
    let (runs, series): (Vec<_>, Vec<_>) = traces.into_iter().unzip();
    let summary = Summary {
        tag: tag.name().to_string(),
        runs,
        aggregates: aggregate(&series),
    };
    write_summary(&summary, &out.join(SUMMARY_FILE))?;
    Ok(summary)
}

fn persist(
    trace: &OptimizerTrace,
    out: &Path,
    record_wall_time: bool,
) -> CliResult<(RunSummary, RunSeries)> {
    let id = run_id(trace);
    let file = format!("{id}.csv");
    write_trace(trace, record_wall_time, &out.join(&file))?;
    let last = trace.final_record();
    let summary = RunSummary {
        run_id: id,
        file,
        seed: trace.seed,
        algorithm: trace.algorithm.to_string(),
        n_qubits: trace.n_qubits,
        d: trace.algorithm.is_riemannian().then_some(trace.d),
        iterations: trace.iterations(),
        final_energy: last.energy,
        final_error: last.energy_error,
        status: trace.status.to_string(),
    };
    Ok((summary, RunSeries::from_trace(trace)))
}

/// Runs `spec` as resolved.
pub fn run_spec(spec: &ExperimentSpec) -> CliResult<Summary> {
    run_sweep(spec.tag, &spec.members()?, &spec.out, spec.record_wall_time)
}

/// Runs `spec` once per algorithm, into one output directory.
pub fn run_algorithms(spec: &ExperimentSpec, algorithms: &[Algorithm]) -> CliResult<Summary> {
    let mut members = Vec::new();
    for &a in algorithms {
        members.extend(spec.with_algorithm(a).members()?);
    }
    run_sweep(spec.tag, &members, &spec.out, spec.record_wall_time)
}
