//! Command-line interface.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rqcd_core::Algorithm;

use crate::error::{CliError, CliResult};
use crate::experiments::{
    ground_energy_of, run_algorithms, run_spec, COMPARE_D1_ALGORITHMS, SCAN_D_VALUES,
};
use crate::output::Summary;
use crate::spec::{ExperimentSpec, ExperimentTag, OneOrMany, Settings};

#[derive(Debug, Parser)]
#[command(
    name = "rqcd",
    version,
    about = "Riemannian ground-state circuit design experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one configuration, optionally over several seeds.
    Run(ExperimentArgs),
    /// Sweep the subspace dimension d over 1..256 with 20 seeds each.
    ScanD(ExperimentArgs),
    /// Compare single-direction variants at N = 2..5 until error < 1e-5.
    CompareD1(ExperimentArgs),
    /// Print the exact ground energy of the XXZ chain.
    GroundEnergy(GroundArgs),
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// JSON file with experiment settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub tag: Option<ExperimentTag>,
    /// rrsgp-fixed | rrsgp-exact | rrsn | rrsn-d1 | vqa
    #[arg(long)]
    pub algo: Option<String>,
    /// Qubit count; repeat or comma-separate for a sweep.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Subspace dimension; 4^N selects all non-identity Pauli words.
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// VQA iterations to run before the optimizer starts.
    #[arg(long, value_name = "ITERS")]
    pub warm_start_vqa: Option<usize>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Stop once the energy error drops below this value.
    #[arg(long)]
    pub target_error: Option<f64>,
    /// Disable the relative energy-change stopping rule.
    #[arg(long)]
    pub no_stall: bool,
    /// Write elapsed milliseconds instead of 0 in the wall_ms column.
    #[arg(long)]
    pub record_wall_time: bool,
}

#[derive(Debug, Args)]
pub struct GroundArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    pub delta: f64,
}

impl ExperimentArgs {
    fn flag_settings(&self) -> CliResult<Settings> {
        let algo = self
            .algo
            .as_deref()
            .map(str::parse::<Algorithm>)
            .transpose()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let mut s = Settings {
            tag: self.tag,
            algo,
            delta: self.delta,
            seed: self.seed,
            runs: self.runs,
            max_iters: self.max_iters,
            warm_start_vqa: self.warm_start_vqa,
            out: self.out.clone(),
            target_error: self.target_error,
            disable_stall: self.no_stall.then_some(true),
            record_wall_time: self.record_wall_time.then_some(true),
            ..Settings::default()
        };
        s.set_n(self.n.clone());
        s.set_d(self.d.clone());
        Ok(s)
    }

    /// Config file overlaid by flags.
    pub fn settings(&self) -> CliResult<Settings> {
        let file = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        Ok(file.overlay(&self.flag_settings()?))
    }
}

fn single_point(spec: &ExperimentSpec) -> CliResult<()> {
    if spec.n_values.len() != 1 || spec.d_values.len() != 1 {
        return Err(CliError::Config(
            "run takes a single n and d; use scan-d or compare-d1 for sweeps".into(),
        ));
    }
    Ok(())
}

fn report(summary: &Summary, spec: &ExperimentSpec) {
    for g in &summary.aggregates {
        let d = g.d.map_or_else(|| "-".to_string(), |d| d.to_string());
        println!(
            "{} n={} d={} runs={} mean_iters={} mean_final_error={:e}",
            g.algorithm, g.n_qubits, d, g.runs, g.mean_iterations, g.mean_final_error
        );
    }
    println!(
        "wrote {} runs to {}",
        summary.runs.len(),
        spec.out.display()
    );
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::GroundEnergy(args) => {
            println!("{:?}", ground_energy_of(args.n, args.delta)?);
        }
        Command::Run(args) => {
            let spec = ExperimentSpec::resolve(&args.settings()?, ExperimentTag::Custom)?;
            single_point(&spec)?;
            report(&run_spec(&spec)?, &spec);
        }
        Command::ScanD(args) => {
            let mut settings = args.settings()?;
            if settings.d.is_none() {
                settings.d = Some(OneOrMany::Many(SCAN_D_VALUES.to_vec()));
            }
            let spec = ExperimentSpec::resolve(&settings, ExperimentTag::Fig5)?;
            if !spec.base.algorithm.is_riemannian() {
                return Err(CliError::Config("scan-d needs a subspace algorithm".into()));
            }
            report(&run_spec(&spec)?, &spec);
        }
        Command::CompareD1(args) => {
            let settings = args.settings()?;
            let algorithms = match settings.algo {
                Some(a) => vec![a],
                None => COMPARE_D1_ALGORITHMS.to_vec(),
            };
            let spec = ExperimentSpec::resolve(&settings, ExperimentTag::Fig7)?;
            report(&run_algorithms(&spec, &algorithms)?, &spec);
        }
    }
    Ok(())
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
