//! Single iterations of the subspace gradient-projection and Newton methods.
//!
//! A step estimates coefficients on the sampled words `P^j` and appends the
//! rotations `exp(i c_j P^j t)` in ascending index order.

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimators::{assemble_sample, estimate_gradient, GradientSample, ShiftedPair};
use crate::hamiltonian::PauliSum;
use crate::linalg::{min_eigenvalue, solve_spd};
use crate::pauli::{full_subspace, sample_subspace, PauliIndex, PauliWord};
use crate::statevector::{expectation, Gate, StateVector};

use super::adam::AdamState;
use super::config::{LineSearchConfig, OptimizerConfig};
use super::trace::NewtonDiagnostics;

/// Sampled gradients with every magnitude below this are treated as zero.
pub const ZERO_GRADIENT_TOL: f64 = 1e-14;

/// Result of one optimizer iteration.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: StateVector,
    pub gates: Vec<Gate>,
    pub step_size: Option<f64>,
    pub delta_k: Option<f64>,
    pub circuit_evals: usize,
    pub search_evals: usize,
    pub uninformative: bool,
    pub newton: Option<NewtonDiagnostics>,
}

/// Draws the iteration's subspace; the full basis consumes no randomness.
pub fn draw_subspace<R: Rng + ?Sized>(
    config: &OptimizerConfig,
    rng: &mut R,
) -> Result<Vec<PauliIndex>> {
    if config.is_full_subspace() {
        return Ok(full_subspace(config.n_qubits));
    }
    sample_subspace(rng, config.n_qubits, config.effective_d())
}

fn is_zero_direction(values: &[f64]) -> bool {
    values.iter().all(|v| v.abs() < ZERO_GRADIENT_TOL)
}

/// Rotations `exp(i c_j t P^j)` in the given order.
pub fn direction_gates(words: &[PauliWord], coeffs: &[f64], t: f64) -> Vec<Gate> {
    words
        .iter()
        .zip(coeffs)
        .map(|(w, c)| Gate::PauliRotation {
            word: *w,
            angle: c * t,
        })
        .collect()
}

fn apply_direction(
    state: &StateVector,
    words: &[PauliWord],
    coeffs: &[f64],
    t: f64,
) -> Result<StateVector> {
    let mut out = state.clone();
    for (w, c) in words.iter().zip(coeffs) {
        out.apply_pauli_rotation_mut(w, c * t)?;
    }
    Ok(out)
}

/// Energy `φ(t)` along the retraction curve.
pub fn energy_along(
    state: &StateVector,
    op: &PauliSum,
    words: &[PauliWord],
    coeffs: &[f64],
    t: f64,
) -> Result<f64> {
    expectation(op, &apply_direction(state, words, coeffs, t)?)
}

/// `φ(t)` and `φ'(t)` by one forward pass and one adjoint backward pass.
pub fn energy_and_slope(
    state: &StateVector,
    op: &PauliSum,
    words: &[PauliWord],
    coeffs: &[f64],
    t: f64,
) -> Result<(f64, f64)> {
    let mut lambda = apply_direction(state, words, coeffs, t)?;
    let mut mu = StateVector::from_raw(state.n_qubits(), lambda.apply_sum(op)?);
    let phi = lambda.inner(&mu)?.re;
    let mut slope = 0.0;
    for (w, c) in words.iter().zip(coeffs).rev() {
        // d/dθ exp(iθP) = iP exp(iθP), so dφ/dθ = 2 Re <μ| iP |λ>
        let p_lambda = lambda.apply_pauli(w)?;
        let overlap = mu.inner(&p_lambda)?;
        slope += c * (-2.0 * overlap.im);
        lambda.apply_pauli_rotation_mut(w, -c * t)?;
        mu.apply_pauli_rotation_mut(w, -c * t)?;
    }
    Ok((phi, slope))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchResult {
    pub t: f64,
    pub phi: f64,
    /// Energy evaluations, each paired with one adjoint slope evaluation.
    pub evals: usize,
}

/// Minimizes `φ(t)` with Adam from `t0`, returning the best point visited.
pub fn exact_line_search(
    state: &StateVector,
    op: &PauliSum,
    words: &[PauliWord],
    coeffs: &[f64],
    cfg: &LineSearchConfig,
) -> Result<LineSearchResult> {
    if is_zero_direction(coeffs) {
        return Err(Error::ZeroDirection);
    }
    let mut adam = AdamState::new(1, cfg.lr);
    let mut t = [cfg.t0];
    let mut best = LineSearchResult {
        t: cfg.t0,
        phi: f64::INFINITY,
        evals: 0,
    };
    let mut evals = 0;
    for step in 0..=cfg.max_inner {
        let (phi, slope) = energy_and_slope(state, op, words, coeffs, t[0])?;
        evals += 1;
        if phi < best.phi {
            best.t = t[0];
            best.phi = phi;
        }
        if step < cfg.max_inner {
            adam.step(&mut t, &[slope]);
        }
    }
    best.evals = evals;
    Ok(best)
}

/// Gradient-projection step on explicit indices.
pub fn rrsgp_step_on(
    state: &StateVector,
    op: &PauliSum,
    indices: &[PauliIndex],
    config: &OptimizerConfig,
    f: f64,
    exact: bool,
) -> Result<StepOutcome> {
    let sample: GradientSample = estimate_gradient(state, op, indices, f)?;
    let scale = (1u64 << state.n_qubits()) as f64;
    let omega: Vec<f64> = sample.grad.iter().map(|g| g / scale).collect();
    let uninformative = is_zero_direction(&omega);
    let (t, search_evals) = if exact && !uninformative {
        let ls = exact_line_search(state, op, &sample.words, &omega, &config.line_search)?;
        (ls.t, ls.evals)
    } else if exact {
        (0.0, 0)
    } else {
        (config.fixed_step, 0)
    };
    let gates = direction_gates(&sample.words, &omega, t);
    let next = if uninformative {
        state.clone()
    } else {
        apply_direction(state, &sample.words, &omega, t)?
    };
    Ok(StepOutcome {
        state: next,
        gates,
        step_size: (!(exact && uninformative)).then_some(t),
        delta_k: None,
        circuit_evals: sample.evals,
        search_evals,
        uninformative,
        newton: None,
    })
}

/// Gradient-projection step on a freshly drawn subspace.
pub fn rrsgp_step<R: Rng + ?Sized>(
    state: &StateVector,
    op: &PauliSum,
    config: &OptimizerConfig,
    f: f64,
    exact: bool,
    rng: &mut R,
) -> Result<StepOutcome> {
    let indices = draw_subspace(config, rng)?;
    rrsgp_step_on(state, op, &indices, config, f, exact)
}

struct Backtrack {
    t: f64,
    halvings: usize,
    evals: usize,
    state: StateVector,
}

/// Armijo backtracking over `t ∈ {1, β, β², …}`; `t = 1` when disabled.
fn backtrack(
    state: &StateVector,
    op: &PauliSum,
    words: &[PauliWord],
    coeffs: &[f64],
    f: f64,
    descent: f64,
    config: &OptimizerConfig,
) -> Result<Backtrack> {
    let mut t = 1.0;
    let mut halvings = 0;
    let mut evals = 0;
    loop {
        let trial = apply_direction(state, words, coeffs, t)?;
        if !config.armijo_enabled {
            return Ok(Backtrack {
                t,
                halvings,
                evals,
                state: trial,
            });
        }
        let f_new = expectation(op, &trial)?;
        evals += 1;
        if f_new <= f - config.armijo_c * t * descent {
            return Ok(Backtrack {
                t,
                halvings,
                evals,
                state: trial,
            });
        }
        if halvings == config.max_halvings {
            return Err(Error::ArmijoExhausted(config.max_halvings));
        }
        t *= config.armijo_beta;
        halvings += 1;
    }
}

#[allow(clippy::too_many_arguments)]
fn newton_outcome(
    state: &StateVector,
    op: &PauliSum,
    words: &[PauliWord],
    grad: &[f64],
    omega: Vec<f64>,
    delta: f64,
    lambda_min_regularized: f64,
    f: f64,
    config: &OptimizerConfig,
    circuit_evals: usize,
) -> Result<StepOutcome> {
    if is_zero_direction(grad) {
        return Ok(StepOutcome {
            state: state.clone(),
            gates: direction_gates(words, &vec![0.0; words.len()], 0.0),
            step_size: None,
            delta_k: Some(delta),
            circuit_evals,
            search_evals: 0,
            uninformative: true,
            newton: Some(NewtonDiagnostics {
                descent: 0.0,
                lambda_min_regularized,
                halvings: 0,
                f_before: f,
            }),
        });
    }
    let descent: f64 = grad.iter().zip(&omega).map(|(g, w)| g * w).sum();
    let bt = backtrack(state, op, words, &omega, f, descent, config)?;
    Ok(StepOutcome {
        state: bt.state,
        gates: direction_gates(words, &omega, bt.t),
        step_size: Some(bt.t),
        delta_k: Some(delta),
        circuit_evals,
        search_evals: bt.evals,
        uninformative: false,
        newton: Some(NewtonDiagnostics {
            descent,
            lambda_min_regularized,
            halvings: bt.halvings,
            f_before: f,
        }),
    })
}

/// Regularized Newton step on explicit indices.
pub fn rrsn_step_on(
    state: &StateVector,
    op: &PauliSum,
    indices: &[PauliIndex],
    config: &OptimizerConfig,
    f: f64,
) -> Result<StepOutcome> {
    let sample = assemble_sample(state, op, indices, f)?;
    let lambda_min = min_eigenvalue(&sample.hess)?;
    let delta = (config.rho - lambda_min).max(0.0);
    let regularized = sample.hess.shifted(delta);
    let lambda_min_regularized = min_eigenvalue(&regularized)?;
    let omega = solve_spd(&regularized, &sample.grad)?;
    newton_outcome(
        state,
        op,
        &sample.words,
        &sample.grad,
        omega,
        delta,
        lambda_min_regularized,
        f,
        config,
        sample.evals,
    )
}

/// Regularized Newton step on a freshly drawn subspace.
pub fn rrsn_step<R: Rng + ?Sized>(
    state: &StateVector,
    op: &PauliSum,
    config: &OptimizerConfig,
    f: f64,
    rng: &mut R,
) -> Result<StepOutcome> {
    let indices = draw_subspace(config, rng)?;
    rrsn_step_on(state, op, &indices, config, f)
}

/// One-direction Newton step `ω = g / max{L, ρ}` on an explicit index.
pub fn rrsn_d1_step_on(
    state: &StateVector,
    op: &PauliSum,
    index: PauliIndex,
    config: &OptimizerConfig,
    f: f64,
) -> Result<StepOutcome> {
    let word = PauliWord::from_index(index, state.n_qubits())?;
    if word.is_identity() {
        return Err(Error::Config("identity word in subspace".into()));
    }
    let pair = ShiftedPair::measure(state, op, &word)?;
    let g = pair.gradient();
    let curvature = pair.curvature(f);
    let denom = curvature.max(config.rho);
    let delta = (config.rho - curvature).max(0.0);
    newton_outcome(
        state,
        op,
        &[word],
        &[g],
        vec![g / denom],
        delta,
        denom,
        f,
        config,
        2,
    )
}

pub fn rrsn_d1_step<R: Rng + ?Sized>(
    state: &StateVector,
    op: &PauliSum,
    config: &OptimizerConfig,
    f: f64,
    rng: &mut R,
) -> Result<StepOutcome> {
    let index = sample_subspace(rng, config.n_qubits, 1)?[0];
    rrsn_d1_step_on(state, op, index, config, f)
}
