//! Optimizers over the unitary group and the VQA baseline.

pub mod adam;
pub mod config;
pub mod driver;
pub mod riemannian;
pub mod trace;
pub mod vqa;

pub use adam::AdamState;
pub use config::{Algorithm, InitialState, LineSearchConfig, OptimizerConfig, WarmStart};
pub use driver::{run, run_observable};
pub use riemannian::{
    exact_line_search, rrsgp_step, rrsgp_step_on, rrsn_d1_step, rrsn_d1_step_on, rrsn_step,
    rrsn_step_on, StepOutcome,
};
pub use trace::{IterationRecord, NewtonDiagnostics, OptimizerTrace, Status};
pub use vqa::{vqa_run, HardwareEfficientAnsatz, VqaTrainer};
