//! Deterministic fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rqcd_core::{build_xxz, sample_subspace, PauliIndex, PauliSum, StateVector, SymMatrix};

/// XXZ chain at `Δ = 0.5` with a seeded random state.
pub fn xxz_fixture(n_qubits: usize, seed: u64) -> (PauliSum, StateVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let op = build_xxz(n_qubits, 0.5).expect("valid chain");
    let state = StateVector::random(n_qubits, &mut rng).expect("valid state");
    (op, state)
}

pub fn subspace_fixture(n_qubits: usize, d: usize, seed: u64) -> Vec<PauliIndex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_subspace(&mut rng, n_qubits, d).expect("valid subspace")
}

/// Symmetric `n x n` matrix with entries `1 / (1 + |i - j|)` plus a ramp on
/// the diagonal.
pub fn symmetric_fixture(n: usize) -> SymMatrix {
    let data = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            1.0 / (1.0 + i.abs_diff(j) as f64) + if i == j { i as f64 } else { 0.0 }
        })
        .collect();
    SymMatrix::from_row_major(n, data).expect("symmetric")
}
