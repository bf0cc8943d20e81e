//! Statevector simulation and Riemannian optimization over the unitary group
//! for ground-state circuit design.
//!
//! The optimizers grow a circuit of Pauli rotations `exp(i θ P)` one sampled
//! subspace at a time. Gradient and Hessian coefficients are estimated from
//! shifted expectation values only, so every step is implementable with the
//! same measurements a quantum device would make.

pub mod dense;
pub mod error;
pub mod estimators;
pub mod hamiltonian;
pub mod linalg;
pub mod optim;
pub mod pauli;
pub mod statevector;

pub use error::{Error, Result};
pub use estimators::{
    assemble_sample, estimate_gradient, GradientSample, ShiftCache, SubspaceSample,
};
pub use hamiltonian::{build_xxz, ground_energy, PauliSum};
pub use linalg::{jacobi_eig, min_eigenvalue, solve_spd, SymEigen, SymMatrix};
pub use optim::{
    run, run_observable, Algorithm, InitialState, IterationRecord, OptimizerConfig, OptimizerTrace,
    Status, WarmStart,
};
pub use pauli::{full_subspace, sample_subspace, Letter, PauliIndex, PauliWord};
pub use statevector::{expectation, riemannian_grad_norm, Gate, GateRecord, StateVector};
