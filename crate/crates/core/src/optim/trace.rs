//! Per-iteration records of an optimization run.

use std::fmt;

use crate::statevector::{GateRecord, StateVector};

use super::config::Algorithm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    GradConverged,
    EnergyStalled,
    TargetReached,
    MaxIters,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::GradConverged => "grad_converged",
            Status::EnergyStalled => "energy_stalled",
            Status::TargetReached => "target_reached",
            Status::MaxIters => "max_iters",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Newton-system diagnostics of one RRSN iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonDiagnostics {
    /// `g_k^T Ω_k`.
    pub descent: f64,
    /// Smallest eigenvalue of `L_k + δ_k I`.
    pub lambda_min_regularized: f64,
    pub halvings: usize,
    /// Energy before the step.
    pub f_before: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// 0 is the starting point.
    pub iter: usize,
    pub energy: f64,
    pub energy_error: f64,
    /// `||[ψ_k, O]||_F`.
    pub grad_norm: f64,
    pub step_size: Option<f64>,
    pub delta_k: Option<f64>,
    /// Shifted-circuit evaluations spent on gradient and Hessian estimation.
    pub circuit_evals: usize,
    /// Evaluations spent inside line searches and backtracking.
    pub search_evals: usize,
    pub cumulative_gates: usize,
    /// The sampled gradient vanished, so the step was a no-op.
    pub uninformative: bool,
    pub newton: Option<NewtonDiagnostics>,
    pub wall_ms: u64,
}

#[derive(Debug, Clone)]
pub struct OptimizerTrace {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub n_qubits: usize,
    pub delta: f64,
    /// Sampled subspace dimension per iteration (0 for VQA).
    pub d: usize,
    pub f_ground: f64,
    pub records: Vec<IterationRecord>,
    pub status: Status,
    /// Gates of the warm-start ansatz, if any, followed by the appended rotations.
    pub gates: GateRecord,
    pub initial_state: StateVector,
    pub final_state: StateVector,
}

impl OptimizerTrace {
    pub fn final_record(&self) -> &IterationRecord {
        self.records
            .last()
            .expect("a trace holds at least the starting record")
    }

    pub fn final_error(&self) -> f64 {
        self.final_record().energy_error
    }

    /// Iterations performed, excluding the starting record.
    pub fn iterations(&self) -> usize {
        self.records.len() - 1
    }

    pub fn energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.energy).collect()
    }

    pub fn errors(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.energy_error).collect()
    }
}
