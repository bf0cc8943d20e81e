//! Optimizer configuration.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::{word_count, MAX_INDEXED_QUBITS};
use crate::statevector::MAX_SIM_QUBITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Subspace gradient projection with a constant step.
    RrsgpFixed,
    /// Subspace gradient projection with an Adam line search on the step.
    RrsgpExact,
    /// Subspace Newton with regularization and Armijo backtracking.
    Rrsn,
    /// Subspace Newton specialized to one sampled direction.
    RrsnD1,
    /// Two-layer hardware-efficient ansatz trained with Adam.
    Vqa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::RrsgpFixed,
        Algorithm::RrsgpExact,
        Algorithm::Rrsn,
        Algorithm::RrsnD1,
        Algorithm::Vqa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::RrsgpFixed => "rrsgp-fixed",
            Algorithm::RrsgpExact => "rrsgp-exact",
            Algorithm::Rrsn => "rrsn",
            Algorithm::RrsnD1 => "rrsn-d1",
            Algorithm::Vqa => "vqa",
        }
    }

    /// Whether the algorithm samples Pauli subspaces.
    pub fn is_riemannian(self) -> bool {
        self != Algorithm::Vqa
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm '{s}'")))
    }
}

/// Settings of the scalar Adam search over the step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchConfig {
    pub max_inner: usize,
    pub lr: f64,
    pub t0: f64,
}

impl Default for LineSearchConfig {
    fn default() -> Self {
        Self {
            max_inner: 30,
            lr: 0.1,
            t0: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// `|+>^N`.
    Uniform,
    /// A computational basis state.
    Basis(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarmStart {
    None,
    /// Run this many VQA iterations first and start from the resulting state.
    Vqa {
        iters: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub n_qubits: usize,
    pub delta: f64,
    pub algorithm: Algorithm,
    /// Subspace dimension; ignored by VQA and forced to 1 for `RrsnD1`.
    pub d: usize,
    pub fixed_step: f64,
    pub line_search: LineSearchConfig,
    pub rho: f64,
    pub armijo_c: f64,
    pub armijo_beta: f64,
    pub armijo_enabled: bool,
    pub max_halvings: usize,
    pub max_iters: usize,
    pub grad_tol: f64,
    /// `None` disables the relative energy-change criterion.
    pub rel_energy_tol: Option<f64>,
    /// Stop once the energy error drops below this value.
    pub target_error: Option<f64>,
    pub seed: u64,
    pub initial: InitialState,
    pub warm_start: WarmStart,
    pub vqa_layers: usize,
    pub vqa_lr: f64,
}

impl OptimizerConfig {
    pub fn new(algorithm: Algorithm, n_qubits: usize, d: usize) -> Self {
        Self {
            n_qubits,
            delta: 0.5,
            algorithm,
            d,
            fixed_step: 0.1,
            line_search: LineSearchConfig::default(),
            rho: 0.1,
            armijo_c: 1e-4,
            armijo_beta: 0.5,
            armijo_enabled: true,
            max_halvings: 60,
            max_iters: 500,
            grad_tol: 1e-9,
            rel_energy_tol: Some(1e-10),
            target_error: None,
            seed: 0,
            initial: InitialState::Uniform,
            warm_start: WarmStart::None,
            vqa_layers: 2,
            vqa_lr: 0.01,
        }
    }

    /// Subspace dimension actually sampled each iteration.
    pub fn effective_d(&self) -> usize {
        match self.algorithm {
            Algorithm::RrsnD1 => 1,
            Algorithm::Vqa => 0,
            _ => self.d,
        }
    }

    /// `d` equal to the number of non-identity words selects the full basis.
    pub fn is_full_subspace(&self) -> bool {
        self.algorithm.is_riemannian() && self.effective_d() as u64 == word_count(self.n_qubits) - 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > MAX_SIM_QUBITS.min(MAX_INDEXED_QUBITS) {
            return Err(Error::Config(format!(
                "n_qubits must be in 1..={MAX_SIM_QUBITS}, got {}",
                self.n_qubits
            )));
        }
        if self.algorithm.is_riemannian() {
            let max = word_count(self.n_qubits) - 1;
            let d = self.effective_d();
            if d == 0 || d as u64 > max {
                return Err(Error::SubspaceDimension { d, max });
            }
        }
        let positive = [
            ("fixed_step", self.fixed_step),
            ("rho", self.rho),
            ("armijo_c", self.armijo_c),
            ("grad_tol", self.grad_tol),
            ("line_search.lr", self.line_search.lr),
            ("vqa_lr", self.vqa_lr),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(tol) = self.rel_energy_tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Error::Config(format!(
                    "rel_energy_tol must be positive, got {tol}"
                )));
            }
        }
        if let Some(t) = self.target_error {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Config(format!(
                    "target_error must be positive, got {t}"
                )));
            }
        }
        if !(self.armijo_beta > 0.0 && self.armijo_beta < 1.0) {
            return Err(Error::Config(format!(
                "armijo_beta must lie in (0, 1), got {}",
                self.armijo_beta
            )));
        }
        if !self.delta.is_finite() {
            return Err(Error::Config("delta must be finite".into()));
        }
        if self.vqa_layers == 0 {
            return Err(Error::Config("vqa_layers must be at least 1".into()));
        }
        if let InitialState::Basis(i) = self.initial {
            if i >= 1usize << self.n_qubits {
                return Err(Error::Config(format!("basis state {i} out of range")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_roundtrip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("newton".parse::<Algorithm>().is_err());
    }

    #[test]
    fn validation() {
        assert!(OptimizerConfig::new(Algorithm::Rrsn, 4, 255)
            .validate()
            .is_ok());
        assert!(OptimizerConfig::new(Algorithm::Rrsn, 4, 256)
            .validate()
            .is_err());
        assert!(OptimizerConfig::new(Algorithm::Rrsn, 4, 0)
            .validate()
            .is_err());
        assert!(OptimizerConfig::new(Algorithm::RrsnD1, 4, 0)
            .validate()
            .is_ok());
        assert!(OptimizerConfig::new(Algorithm::Vqa, 4, 0)
            .validate()
            .is_ok());
        let mut c = OptimizerConfig::new(Algorithm::RrsgpFixed, 2, 3);
        c.rho = 0.0;
        assert!(c.validate().is_err());
        assert!(OptimizerConfig::new(Algorithm::Rrsn, 4, 255).is_full_subspace());
    }
}
