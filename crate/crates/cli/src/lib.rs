//! Experiment runner: configuration, sweeps and trace persistence.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod output;
pub mod spec;

pub use cli::cli_main;
pub use error::{CliError, CliResult};
pub use experiments::{run_algorithms, run_spec, run_sweep, worker_pool};
pub use output::{read_trace, write_trace, Summary, TraceRow, CSV_COLUMNS};
pub use spec::{map_d, ExperimentSpec, ExperimentTag, Settings};
