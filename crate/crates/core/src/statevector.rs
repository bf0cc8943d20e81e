//! Dense statevector simulation.
//!
//! Basis index bit `l` is the computational value of qubit `l`. All gates are
//! unitary, so the norm is preserved up to rounding.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::PauliSum;
use crate::pauli::{Letter, PauliWord};

/// Largest register the simulator accepts (2^20 amplitudes).
pub const MAX_SIM_QUBITS: usize = 20;

/// Tolerance on the imaginary residue of a Hermitian expectation value.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `i^k` for `k` taken mod 4.
#[inline]
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[inline]
fn parity_sign(bits: u64) -> f64 {
    if bits.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    fn check_size(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 || n_qubits > MAX_SIM_QUBITS {
            return Err(Error::QubitCount {
                n_qubits,
                reason: "statevector supports 1 to 20 qubits",
            });
        }
        Ok(())
    }

    /// The computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        Self::check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// The uniform superposition `|+>^{⊗N}`.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        Self::check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            n_qubits,
            amps: vec![a; dim],
        })
    }

    /// Wraps raw amplitudes, normalizing them.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Config(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Ok(Self {
            n_qubits,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Wraps a vector without normalizing it; used for adjoint vectors such
    /// as `O|ψ>` that are propagated with the same gate kernels.
    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << n_qubits);
        Self { n_qubits, amps }
    }

    /// A random normalized state with amplitudes drawn from the unit square.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self> {
        Self::check_size(n_qubits)?;
        let amps = (0..1usize << n_qubits)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Self::from_amplitudes(n_qubits, amps)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_qubits(other.n_qubits)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_qubits(&self, n: usize) -> Result<()> {
        if self.n_qubits != n {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: n,
            });
        }
        Ok(())
    }

    fn check_qubit_index(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Returns `P|ψ>`.
    pub fn apply_pauli(&self, word: &PauliWord) -> Result<StateVector> {
        self.check_qubits(word.n_qubits())?;
        let x = word.x_mask() as usize;
        let z = word.z_mask();
        let base = i_pow(word.y_count());
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (i, a) in self.amps.iter().enumerate() {
            out[i ^ x] = base * parity_sign(i as u64 & z) * a;
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amps: out,
        })
    }

    /// `<ψ|P|ψ>` without materializing `P|ψ>`.
    pub fn pauli_expectation(&self, word: &PauliWord) -> Result<Complex64> {
        self.check_qubits(word.n_qubits())?;
        let x = word.x_mask() as usize;
        let z = word.z_mask();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, a) in self.amps.iter().enumerate() {
            acc += self.amps[i ^ x].conj() * a * parity_sign(i as u64 & z);
        }
        Ok(acc * i_pow(word.y_count()))
    }

    /// In place `|ψ> <- exp(iθP)|ψ> = cos θ |ψ> + i sin θ P|ψ>`.
    pub fn apply_pauli_rotation_mut(&mut self, word: &PauliWord, theta: f64) -> Result<()> {
        self.check_qubits(word.n_qubits())?;
        let (s, c) = theta.sin_cos();
        let x = word.x_mask() as usize;
        let z = word.z_mask();
        if x == 0 {
            // Diagonal word: each amplitude picks up exp(±iθ).
            let plus = Complex64::new(c, s);
            let minus = Complex64::new(c, -s);
            for (i, a) in self.amps.iter_mut().enumerate() {
                *a *= if (i as u64 & z).count_ones().is_multiple_of(2) {
                    plus
                } else {
                    minus
                };
            }
            return Ok(());
        }
        let is_base = I * s * i_pow(word.y_count());
        let pivot = 1usize << (63 - (x as u64).leading_zeros());
        for i in 0..self.dim() {
            if i & pivot != 0 {
                continue;
            }
            let j = i ^ x;
            let a = self.amps[i];
            let b = self.amps[j];
            self.amps[i] = c * a + is_base * parity_sign(j as u64 & z) * b;
            self.amps[j] = c * b + is_base * parity_sign(i as u64 & z) * a;
        }
        Ok(())
    }

    pub fn apply_pauli_rotation(&self, word: &PauliWord, theta: f64) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_pauli_rotation_mut(word, theta)?;
        Ok(out)
    }

    /// `RY(θ) = exp(-iθY/2)` on one qubit.
    pub fn apply_ry_mut(&mut self, qubit: usize, theta: f64) -> Result<()> {
        self.check_qubit_index(qubit)?;
        let word = PauliWord::single(self.n_qubits, qubit, Letter::Y)?;
        self.apply_pauli_rotation_mut(&word, -0.5 * theta)
    }

    /// `RZ(θ) = exp(-iθZ/2)` on one qubit.
    pub fn apply_rz_mut(&mut self, qubit: usize, theta: f64) -> Result<()> {
        self.check_qubit_index(qubit)?;
        let word = PauliWord::single(self.n_qubits, qubit, Letter::Z)?;
        self.apply_pauli_rotation_mut(&word, -0.5 * theta)
    }

    pub fn apply_cnot_mut(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit_index(control)?;
        self.check_qubit_index(target)?;
        if control == target {
            return Err(Error::Config("cnot control equals target".into()));
        }
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for i in 0..self.dim() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
        Ok(())
    }

    pub fn apply_ry(&self, qubit: usize, theta: f64) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_ry_mut(qubit, theta)?;
        Ok(out)
    }

    pub fn apply_rz(&self, qubit: usize, theta: f64) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_rz_mut(qubit, theta)?;
        Ok(out)
    }

    pub fn apply_cnot(&self, control: usize, target: usize) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_cnot_mut(control, target)?;
        Ok(out)
    }

    /// Returns `O|ψ>` for a Pauli sum.
    pub fn apply_sum(&self, op: &PauliSum) -> Result<Vec<Complex64>> {
        self.check_qubits(op.n_qubits())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (coeff, word) in op.terms() {
            let x = word.x_mask() as usize;
            let z = word.z_mask();
            let base = i_pow(word.y_count()) * *coeff;
            for (i, a) in self.amps.iter().enumerate() {
                out[i ^ x] += base * parity_sign(i as u64 & z) * a;
            }
        }
        Ok(out)
    }
}

/// `<ψ|O|ψ>` for a Hermitian Pauli sum.
pub fn expectation(op: &PauliSum, state: &StateVector) -> Result<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (coeff, word) in op.terms() {
        acc += *coeff * state.pauli_expectation(word)?;
    }
    if acc.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::ImaginaryExpectation(acc.im));
    }
    Ok(acc.re)
}

/// `‖[ψ, O]‖_F = sqrt(2 (<O²> - <O>²))` for a pure state.
///
/// The variance is taken as `‖(O - <O>)|ψ>‖²`, which is non-negative by
/// construction and keeps full relative precision near eigenstates.
pub fn riemannian_grad_norm(op: &PauliSum, state: &StateVector) -> Result<f64> {
    let o_psi = state.apply_sum(op)?;
    let mean: Complex64 = state
        .amplitudes()
        .iter()
        .zip(&o_psi)
        .map(|(a, b)| a.conj() * b)
        .sum();
    if mean.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::ImaginaryExpectation(mean.im));
    }
    let variance: f64 = state
        .amplitudes()
        .iter()
        .zip(&o_psi)
        .map(|(a, b)| (b - a * mean.re).norm_sqr())
        .sum();
    Ok((2.0 * variance).sqrt())
}

/// One entry of a gate record.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// `exp(i angle P)`.
    PauliRotation {
        word: PauliWord,
        angle: f64,
    },
    Ry {
        qubit: usize,
        angle: f64,
    },
    Rz {
        qubit: usize,
        angle: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        match *self {
            Gate::PauliRotation { ref word, angle } => state.apply_pauli_rotation_mut(word, angle),
            Gate::Ry { qubit, angle } => state.apply_ry_mut(qubit, angle),
            Gate::Rz { qubit, angle } => state.apply_rz_mut(qubit, angle),
            Gate::Cnot { control, target } => state.apply_cnot_mut(control, target),
        }
    }
}

/// Ordered gate list; the circuit built up by an optimizer.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GateRecord {
    gates: Vec<Gate>,
}

impl GateRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) {
        self.gates.extend(gates);
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn pauli_rotation_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::PauliRotation { .. }))
            .count()
    }

    /// Applies every gate in order to a copy of `initial`.
    pub fn replay(&self, initial: &StateVector) -> Result<StateVector> {
        let mut state = initial.clone();
        for gate in &self.gates {
            gate.apply(&mut state)?;
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_xxz;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    fn assert_state_eq(a: &StateVector, b: &StateVector, tol: f64) {
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() <= tol, "{x} vs {y}");
        }
    }

    #[test]
    fn pauli_action_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = StateVector::random(2, &mut rng).unwrap();
        assert_state_eq(&psi.apply_pauli(&w("II")).unwrap(), &psi, 1e-15);

        let flipped = StateVector::zero(2).unwrap().apply_pauli(&w("XI")).unwrap();
        assert_state_eq(&flipped, &StateVector::basis(2, 1).unwrap(), 1e-15);

        let one = StateVector::basis(2, 1).unwrap();
        let phased = one.apply_pauli(&w("ZI")).unwrap();
        assert_abs_diff_eq!(phased.amplitudes()[1].re, -1.0);

        // Y|0> = i|1>
        let y0 = StateVector::zero(1).unwrap().apply_pauli(&w("Y")).unwrap();
        assert_abs_diff_eq!(y0.amplitudes()[1].im, 1.0);
        assert!(psi.apply_pauli(&w("X")).is_err());
    }

    #[test]
    fn rotation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = StateVector::random(3, &mut rng).unwrap();
        assert_state_eq(
            &psi.apply_pauli_rotation(&w("XYZ"), 0.0).unwrap(),
            &psi,
            1e-15,
        );

        let z0 = StateVector::zero(1)
            .unwrap()
            .apply_pauli_rotation(&w("Z"), FRAC_PI_2)
            .unwrap();
        assert_abs_diff_eq!(z0.amplitudes()[0].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z0.amplitudes()[0].im, 1.0, epsilon = 1e-15);

        let z = PauliSum::single(1.0, w("Z"));
        let plus = StateVector::uniform(1).unwrap();
        for k in 0..40 {
            let x = -3.0 + 0.15 * k as f64;
            let rotated = plus.apply_pauli_rotation(&w("Y"), x / 2.0).unwrap();
            assert_abs_diff_eq!(expectation(&z, &rotated).unwrap(), x.sin(), epsilon = 1e-14);
        }
    }

    #[test]
    fn identity_rotation_is_global_phase() {
        let psi = StateVector::uniform(2).unwrap();
        let out = psi.apply_pauli_rotation(&w("II"), 0.7).unwrap();
        let phase = Complex64::from_polar(1.0, 0.7);
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - phase * b).norm() < 1e-15);
        }
    }

    #[test]
    fn rotation_is_one_parameter_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for j in 1..64u64 {
            let p = PauliWord::from_index(crate::pauli::PauliIndex(j), 3).unwrap();
            let psi = StateVector::random(3, &mut rng).unwrap();
            let (a, b) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let two = psi
                .apply_pauli_rotation(&p, a)
                .unwrap()
                .apply_pauli_rotation(&p, b)
                .unwrap();
            let one = psi.apply_pauli_rotation(&p, a + b).unwrap();
            assert_state_eq(&two, &one, 1e-12);
        }
    }

    #[test]
    fn vqa_gate_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = StateVector::random(2, &mut rng).unwrap();
        assert_state_eq(&psi.apply_ry(0, 0.0).unwrap(), &psi, 1e-15);
        assert_state_eq(&psi.apply_rz(1, 0.0).unwrap(), &psi, 1e-15);
        let twice = psi.apply_cnot(0, 1).unwrap().apply_cnot(0, 1).unwrap();
        assert_state_eq(&twice, &psi, 0.0);

        let flipped = StateVector::zero(1).unwrap().apply_ry(0, PI).unwrap();
        assert_abs_diff_eq!(flipped.amplitudes()[1].norm(), 1.0, epsilon = 1e-15);

        // qubit 0 set (|01> in qubit-0-last notation is basis index 1)
        let out = StateVector::basis(2, 1).unwrap().apply_cnot(0, 1).unwrap();
        assert_state_eq(&out, &StateVector::basis(2, 3).unwrap(), 0.0);

        assert!(matches!(
            psi.apply_ry(2, 0.1),
            Err(Error::QubitOutOfRange { qubit: 2, .. })
        ));
        assert!(psi.apply_cnot(1, 1).is_err());
    }

    #[test]
    fn ry_matches_standard_matrix() {
        // RY(θ)|0> = cos(θ/2)|0> + sin(θ/2)|1>
        let out = StateVector::zero(1).unwrap().apply_ry(0, 0.8).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[0].re, 0.4f64.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitudes()[1].re, 0.4f64.sin(), epsilon = 1e-15);
        // RZ(θ)|0> = e^{-iθ/2}|0>
        let out = StateVector::zero(1).unwrap().apply_rz(0, 0.8).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[0].im, -(0.4f64.sin()), epsilon = 1e-15);
    }

    #[test]
    fn expectation_examples() {
        let z = PauliSum::single(1.0, w("Z"));
        assert_abs_diff_eq!(
            expectation(&z, &StateVector::zero(1).unwrap()).unwrap(),
            1.0
        );

        let xxz = build_xxz(2, 0.5).unwrap();
        let e = expectation(&xxz, &StateVector::uniform(2).unwrap()).unwrap();
        assert_abs_diff_eq!(e, 2.0, epsilon = 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let op = build_xxz(3, 0.3).unwrap();
        let bound: f64 = op.terms().iter().map(|(c, _)| c.abs()).sum();
        for _ in 0..20 {
            let psi = StateVector::random(3, &mut rng).unwrap();
            let e = expectation(&op, &psi).unwrap();
            assert!(e.abs() <= bound);
        }
    }

    #[test]
    fn grad_norm_examples() {
        let z = PauliSum::single(1.0, w("Z"));
        assert_abs_diff_eq!(
            riemannian_grad_norm(&z, &StateVector::zero(1).unwrap()).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            riemannian_grad_norm(&z, &StateVector::uniform(1).unwrap()).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn long_gate_sequences_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 5;
        let mut psi = StateVector::random(n, &mut rng).unwrap();
        let mut record = GateRecord::new();
        let initial = psi.clone();
        for _ in 0..10_000 {
            let gate = match rng.random_range(0..4) {
                0 => Gate::PauliRotation {
                    word: PauliWord::from_index(
                        crate::pauli::PauliIndex(rng.random_range(0..1024)),
                        n,
                    )
                    .unwrap(),
                    angle: rng.random_range(-PI..PI),
                },
                1 => Gate::Ry {
                    qubit: rng.random_range(0..n),
                    angle: rng.random_range(-PI..PI),
                },
                2 => Gate::Rz {
                    qubit: rng.random_range(0..n),
                    angle: rng.random_range(-PI..PI),
                },
                _ => {
                    let control = rng.random_range(0..n);
                    Gate::Cnot {
                        control,
                        target: (control + 1 + rng.random_range(0..n - 1)) % n,
                    }
                }
            };
            gate.apply(&mut psi).unwrap();
            record.push(gate);
        }
        assert!((psi.norm() - 1.0).abs() < 1e-10);
        assert_state_eq(&record.replay(&initial).unwrap(), &psi, 1e-10);
    }
}
