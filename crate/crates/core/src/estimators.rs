//! Parameter-shift estimators for the gradient and Hessian coefficients in a
//! sampled Pauli subspace.
//!
//! Every quantity is obtained from expectation values of rotated copies of
//! the current state, exactly as on hardware. Expectations are exact here, so
//! the only error is floating-point rounding.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::PauliSum;
use crate::linalg::SymMatrix;
use crate::pauli::{PauliIndex, PauliWord};
use crate::statevector::{expectation, StateVector};

/// `g(x) = <O>` after `exp(i x P / 2)` acts on `state`.
pub fn eval_shifted(state: &StateVector, op: &PauliSum, word: &PauliWord, x: f64) -> Result<f64> {
    let rotated = state.apply_pauli_rotation(word, 0.5 * x)?;
    expectation(op, &rotated)
}

/// Two-parameter circuit `g(x, y)`: `exp(i x P_first / 2)` is applied first,
/// then `exp(i y P_second / 2)`.
pub fn eval_shifted2(
    state: &StateVector,
    op: &PauliSum,
    first: &PauliWord,
    x: f64,
    second: &PauliWord,
    y: f64,
) -> Result<f64> {
    let mut rotated = state.apply_pauli_rotation(first, 0.5 * x)?;
    rotated.apply_pauli_rotation_mut(second, 0.5 * y)?;
    expectation(op, &rotated)
}

/// The two shifted values `g(π/2)` and `g(-π/2)` of one Pauli direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedPair {
    pub plus: f64,
    pub minus: f64,
}

impl ShiftedPair {
    pub fn measure(state: &StateVector, op: &PauliSum, word: &PauliWord) -> Result<Self> {
        Ok(Self {
            plus: eval_shifted(state, op, word, FRAC_PI_2)?,
            minus: eval_shifted(state, op, word, -FRAC_PI_2)?,
        })
    }

    /// `g(-π/2) - g(π/2)`, the pairing `<iP, [ψ, O]>`.
    pub fn gradient(&self) -> f64 {
        self.minus - self.plus
    }

    /// `2 [g(π/2) + g(-π/2) - 2 f]`.
    pub fn curvature(&self, f: f64) -> f64 {
        2.0 * (self.plus + self.minus - 2.0 * f)
    }
}

/// Shifted values per sampled index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShiftCache {
    entries: BTreeMap<PauliIndex, ShiftedPair>,
}

impl ShiftCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, index: PauliIndex, pair: ShiftedPair) {
        self.entries.insert(index, pair);
    }

    pub fn get(&self, index: PauliIndex) -> Result<&ShiftedPair> {
        self.entries
            .get(&index)
            .ok_or(Error::MissingShiftCache(index.0))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Number of circuit evaluations per gradient component.
pub const GRAD_EVALS: usize = 2;

/// `g(-π/2) - g(π/2)`. Callers wanting the gradient-projection coefficient
/// divide by `2^N`.
pub fn grad_component(state: &StateVector, op: &PauliSum, word: &PauliWord) -> Result<f64> {
    Ok(ShiftedPair::measure(state, op, word)?.gradient())
}

/// Diagonal Hessian entry from cached shifted values; no new evaluations.
pub fn hess_diag(cache: &ShiftCache, index: PauliIndex, f: f64) -> Result<f64> {
    Ok(cache.get(index)?.curvature(f))
}

fn four_point(
    state: &StateVector,
    op: &PauliSum,
    first: &PauliWord,
    second: &PauliWord,
) -> Result<f64> {
    let h = FRAC_PI_2;
    let pp = eval_shifted2(state, op, first, h, second, h)?;
    let pm = eval_shifted2(state, op, first, h, second, -h)?;
    let mp = eval_shifted2(state, op, first, -h, second, h)?;
    let mm = eval_shifted2(state, op, first, -h, second, -h)?;
    Ok(pp - pm - mp + mm)
}

/// Off-diagonal Hessian entry `(L)_{rs}` and the number of circuit
/// evaluations used (4 for commuting words, 8 otherwise).
pub fn hess_offdiag(
    state: &StateVector,
    op: &PauliSum,
    pr: &PauliWord,
    ps: &PauliWord,
) -> Result<(f64, usize)> {
    // g^{rs}: the P^s rotation acts first
    let rs = four_point(state, op, ps, pr)?;
    if pr.commutes(ps)? {
        return Ok((rs, 4));
    }
    let sr = four_point(state, op, pr, ps)?;
    Ok((0.5 * (rs + sr), 8))
}

/// Gradient coefficients of a sampled subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSample {
    pub indices: Vec<PauliIndex>,
    pub words: Vec<PauliWord>,
    pub grad: Vec<f64>,
    pub f: f64,
    pub cache: ShiftCache,
    pub evals: usize,
}

/// Gradient coefficients and Hessian matrix of a sampled subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSample {
    pub indices: Vec<PauliIndex>,
    pub words: Vec<PauliWord>,
    pub grad: Vec<f64>,
    pub hess: SymMatrix,
    pub f: f64,
    pub cache: ShiftCache,
    /// Circuit evaluations beyond the one that produced `f`.
    pub evals: usize,
}

fn words_of(indices: &[PauliIndex], n_qubits: usize) -> Result<Vec<PauliWord>> {
    indices
        .iter()
        .map(|&i| {
            let w = PauliWord::from_index(i, n_qubits)?;
            if w.is_identity() {
                return Err(Error::Config("identity word in subspace".into()));
            }
            Ok(w)
        })
        .collect()
}

/// Estimates `g_k` on the sampled indices with two evaluations per index.
pub fn estimate_gradient(
    state: &StateVector,
    op: &PauliSum,
    indices: &[PauliIndex],
    f: f64,
) -> Result<GradientSample> {
    if state.n_qubits() != op.n_qubits() {
        return Err(Error::QubitMismatch {
            left: state.n_qubits(),
            right: op.n_qubits(),
        });
    }
    let words = words_of(indices, state.n_qubits())?;
    let pairs: Vec<ShiftedPair> = words
        .par_iter()
        .map(|w| ShiftedPair::measure(state, op, w))
        .collect::<Result<_>>()?;
    let mut cache = ShiftCache::new();
    for (&i, p) in indices.iter().zip(&pairs) {
        cache.insert(i, *p);
    }
    Ok(GradientSample {
        indices: indices.to_vec(),
        words,
        grad: pairs.iter().map(ShiftedPair::gradient).collect(),
        f,
        cache,
        evals: GRAD_EVALS * indices.len(),
    })
}

/// Fills `g_k` and every unique entry of `L_k`; diagonal entries come from
/// the gradient cache.
pub fn assemble_sample(
    state: &StateVector,
    op: &PauliSum,
    indices: &[PauliIndex],
    f: f64,
) -> Result<SubspaceSample> {
    let g = estimate_gradient(state, op, indices, f)?;
    let d = indices.len();
    let mut hess = SymMatrix::zeros(d);
    for (a, &i) in indices.iter().enumerate() {
        hess.set(a, a, hess_diag(&g.cache, i, f)?);
    }
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|a| ((a + 1)..d).map(move |b| (a, b)))
        .collect();
    let entries: Vec<(f64, usize)> = pairs
        .par_iter()
        .map(|&(a, b)| hess_offdiag(state, op, &g.words[a], &g.words[b]))
        .collect::<Result<_>>()?;
    let mut evals = g.evals;
    for (&(a, b), (value, n)) in pairs.iter().zip(entries) {
        hess.set(a, b, value);
        evals += n;
    }
    Ok(SubspaceSample {
        indices: g.indices,
        words: g.words,
        grad: g.grad,
        hess,
        f,
        cache: g.cache,
        evals,
    })
}
