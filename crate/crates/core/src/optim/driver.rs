//! The optimization loop: warm start, iteration, termination.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hamiltonian::{build_xxz, ground_energy, PauliSum};
use crate::statevector::{expectation, riemannian_grad_norm, GateRecord, StateVector};

use super::config::{Algorithm, InitialState, OptimizerConfig, WarmStart};
use super::riemannian::{rrsgp_step, rrsn_d1_step, rrsn_step, StepOutcome};
use super::trace::{IterationRecord, OptimizerTrace, Status};
use super::vqa::{vqa_run, VqaTrainer};

/// Runs `config` on the XXZ chain it describes.
pub fn run(config: &OptimizerConfig) -> Result<OptimizerTrace> {
    config.validate()?;
    let op = build_xxz(config.n_qubits, config.delta)?;
    let f_ground = ground_energy(&op)?;
    run_observable(&op, f_ground, config)
}

fn initial_state(config: &OptimizerConfig) -> Result<StateVector> {
    match config.initial {
        InitialState::Uniform => StateVector::uniform(config.n_qubits),
        InitialState::Basis(i) => StateVector::basis(config.n_qubits, i),
    }
}

struct Termination<'a> {
    config: &'a OptimizerConfig,
}

impl Termination<'_> {
    fn at_start(&self, rec: &IterationRecord) -> Option<Status> {
        if rec.grad_norm < self.config.grad_tol {
            return Some(Status::GradConverged);
        }
        match self.config.target_error {
            Some(t) if rec.energy_error < t => Some(Status::TargetReached),
            _ => None,
        }
    }

    fn after_step(&self, prev: f64, rec: &IterationRecord) -> Option<Status> {
        if let Some(s) = self.at_start(rec) {
            return Some(s);
        }
        // A vanished subspace gradient leaves the energy unchanged without
        // saying anything about convergence, so it never counts as a stall.
        if let (Some(tol), false) = (self.config.rel_energy_tol, rec.uninformative) {
            if (rec.energy - prev).abs() / rec.energy.abs() < tol {
                return Some(Status::EnergyStalled);
            }
        }
        None
    }
}

/// Runs `config` on an arbitrary observable with known ground energy.
///
/// Every random draw comes from one ChaCha8 stream seeded with
/// `config.seed`, so a rerun reproduces the trace bit for bit.
pub fn run_observable(
    op: &PauliSum,
    f_ground: f64,
    config: &OptimizerConfig,
) -> Result<OptimizerTrace> {
    config.validate()?;
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let initial = initial_state(config)?;
    let mut gates = GateRecord::new();
    let mut state = initial.clone();
    if let WarmStart::Vqa { iters } = config.warm_start {
        let (_, trainer) = vqa_run(op, &initial, config.vqa_layers, iters, config.vqa_lr)?;
        state = trainer.state()?;
        gates = trainer.gate_record();
    }

    let mut vqa = (config.algorithm == Algorithm::Vqa)
        .then(|| VqaTrainer::new(state.clone(), config.vqa_layers, config.vqa_lr));
    let fixed_gates = gates.len() + vqa.as_ref().map_or(0, |t| t.ansatz.gates(&t.params).len());

    let record = |iter: usize,
                  state: &StateVector,
                  out: Option<&StepOutcome>,
                  evals: usize,
                  appended: usize|
     -> Result<IterationRecord> {
        let energy = expectation(op, state)?;
        Ok(IterationRecord {
            iter,
            energy,
            energy_error: (energy - f_ground).abs(),
            grad_norm: riemannian_grad_norm(op, state)?,
            step_size: out.and_then(|o| o.step_size),
            delta_k: out.and_then(|o| o.delta_k),
            circuit_evals: evals,
            search_evals: out.map_or(0, |o| o.search_evals),
            cumulative_gates: appended,
            uninformative: out.is_some_and(|o| o.uninformative),
            newton: out.and_then(|o| o.newton),
            wall_ms: clock.elapsed().as_millis() as u64,
        })
    };

    let term = Termination { config };
    let mut appended = if vqa.is_some() { fixed_gates } else { 0 };
    let mut records = vec![record(0, &state, None, 0, appended)?];
    let mut status = term.at_start(&records[0]);

    let mut k = 0;
    while status.is_none() && k < config.max_iters {
        k += 1;
        let f = records[k - 1].energy;
        let rec = if let Some(trainer) = vqa.as_mut() {
            let evals = trainer.step(op)?;
            state = trainer.state()?;
            record(k, &state, None, evals, appended)?
        } else {
            let out = match config.algorithm {
                Algorithm::RrsgpFixed => rrsgp_step(&state, op, config, f, false, &mut rng)?,
                Algorithm::RrsgpExact => rrsgp_step(&state, op, config, f, true, &mut rng)?,
                Algorithm::Rrsn => rrsn_step(&state, op, config, f, &mut rng)?,
                Algorithm::RrsnD1 => rrsn_d1_step(&state, op, config, f, &mut rng)?,
                Algorithm::Vqa => unreachable!("handled above"),
            };
            appended += out.gates.len();
            gates.extend(out.gates.iter().cloned());
            state = out.state.clone();
            record(k, &state, Some(&out), out.circuit_evals, appended)?
        };
        status = term.after_step(f, &rec);
        records.push(rec);
    }

    if let Some(trainer) = &vqa {
        gates.extend(trainer.ansatz.gates(&trainer.params));
    }

    Ok(OptimizerTrace {
        algorithm: config.algorithm,
        seed: config.seed,
        n_qubits: config.n_qubits,
        delta: config.delta,
        d: config.effective_d(),
        f_ground,
        records,
        status: status.unwrap_or(Status::MaxIters),
        gates,
        initial_state: initial,
        final_state: state,
    })
}
