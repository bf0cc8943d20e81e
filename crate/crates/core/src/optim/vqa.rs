//! Hardware-efficient ansatz baseline trained with Adam.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::error::Result;
use crate::hamiltonian::PauliSum;
use crate::statevector::{expectation, Gate, GateRecord, StateVector};

use super::adam::AdamState;

/// Layered ansatz: per layer, RY on every qubit, RZ on every qubit, then a
/// CNOT chain `l -> l+1` without wrap-around.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HardwareEfficientAnsatz {
    pub n_qubits: usize,
    pub layers: usize,
}

impl HardwareEfficientAnsatz {
    pub fn new(n_qubits: usize, layers: usize) -> Self {
        Self { n_qubits, layers }
    }

    pub fn n_params(&self) -> usize {
        2 * self.n_qubits * self.layers
    }

    pub fn gates(&self, params: &[f64]) -> Vec<Gate> {
        assert_eq!(params.len(), self.n_params());
        let n = self.n_qubits;
        let mut out = Vec::with_capacity(self.layers * (3 * n));
        for layer in params.chunks(2 * n) {
            let (ry, rz) = layer.split_at(n);
            out.extend(
                ry.iter()
                    .enumerate()
                    .map(|(qubit, &angle)| Gate::Ry { qubit, angle }),
            );
            out.extend(
                rz.iter()
                    .enumerate()
                    .map(|(qubit, &angle)| Gate::Rz { qubit, angle }),
            );
            for q in 0..n.saturating_sub(1) {
                out.push(Gate::Cnot {
                    control: q,
                    target: q + 1,
                });
            }
        }
        out
    }

    pub fn prepare(&self, start: &StateVector, params: &[f64]) -> Result<StateVector> {
        let mut state = start.clone();
        for g in self.gates(params) {
            g.apply(&mut state)?;
        }
        Ok(state)
    }

    pub fn energy(&self, op: &PauliSum, start: &StateVector, params: &[f64]) -> Result<f64> {
        expectation(op, &self.prepare(start, params)?)
    }

    /// Parameter-shift gradient `½[E(θ + π/2) − E(θ − π/2)]` per parameter.
    pub fn gradient(&self, op: &PauliSum, start: &StateVector, params: &[f64]) -> Result<Vec<f64>> {
        (0..params.len())
            .into_par_iter()
            .map(|i| {
                let mut shifted = params.to_vec();
                shifted[i] = params[i] + FRAC_PI_2;
                let plus = self.energy(op, start, &shifted)?;
                shifted[i] = params[i] - FRAC_PI_2;
                let minus = self.energy(op, start, &shifted)?;
                Ok(0.5 * (plus - minus))
            })
            .collect()
    }
}

/// Adam training state of the ansatz.
#[derive(Debug, Clone)]
pub struct VqaTrainer {
    pub ansatz: HardwareEfficientAnsatz,
    pub start: StateVector,
    pub params: Vec<f64>,
    adam: AdamState,
}

impl VqaTrainer {
    /// Zero-initialized parameters.
    pub fn new(start: StateVector, layers: usize, lr: f64) -> Self {
        let ansatz = HardwareEfficientAnsatz::new(start.n_qubits(), layers);
        Self {
            params: vec![0.0; ansatz.n_params()],
            adam: AdamState::new(ansatz.n_params(), lr),
            ansatz,
            start,
        }
    }

    pub fn state(&self) -> Result<StateVector> {
        self.ansatz.prepare(&self.start, &self.params)
    }

    /// One Adam update; returns the circuit evaluations spent.
    pub fn step(&mut self, op: &PauliSum) -> Result<usize> {
        let grad = self.ansatz.gradient(op, &self.start, &self.params)?;
        self.adam.step(&mut self.params, &grad);
        Ok(2 * grad.len())
    }

    pub fn gate_record(&self) -> GateRecord {
        let mut rec = GateRecord::new();
        rec.extend(self.ansatz.gates(&self.params));
        rec
    }
}

/// Trains for exactly `iters` updates and returns the energy after each
/// update (index 0 is the untrained circuit) with the trainer.
pub fn vqa_run(
    op: &PauliSum,
    start: &StateVector,
    layers: usize,
    iters: usize,
    lr: f64,
) -> Result<(Vec<f64>, VqaTrainer)> {
    let mut trainer = VqaTrainer::new(start.clone(), layers, lr);
    let mut energies = Vec::with_capacity(iters + 1);
    energies.push(expectation(op, &trainer.state()?)?);
    for _ in 0..iters {
        trainer.step(op)?;
        energies.push(expectation(op, &trainer.state()?)?);
    }
    Ok((energies, trainer))
}
