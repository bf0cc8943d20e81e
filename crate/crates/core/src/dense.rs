//! Dense-matrix reference implementations of the geometric objects on the
//! unitary group: Riemannian gradient, Hessian operator, tangent projection,
//! exponential map and Trotter retraction.
//!
//! Everything here is built from explicit Kronecker products and matrix
//! arithmetic and shares no code with the statevector kernels, so it can act
//! as an independent check on the shift-rule estimators. It is exponential in
//! the qubit count and never used by the optimizers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{PauliSum, MAX_DENSE_QUBITS};
use crate::linalg::{jacobi_eig, SymMatrix, JACOBI_TOL};
use crate::pauli::{Letter, PauliWord};
use crate::statevector::StateVector;

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance for the class checks made on construction.
pub const CLASS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorClass {
    General,
    Hermitian,
    SkewHermitian,
    Unitary,
}

/// A `p x p` complex matrix tagged with a verified structural class.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: CMatrix,
    class: OperatorClass,
}

impl DenseOperator {
    pub fn new(matrix: CMatrix, class: OperatorClass) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let (deviation, expected) = match class {
            OperatorClass::General => (0.0, "general"),
            OperatorClass::Hermitian => (hermitian_deviation(&matrix), "hermitian"),
            OperatorClass::SkewHermitian => (skew_deviation(&matrix), "skew-hermitian"),
            OperatorClass::Unitary => (unitary_deviation(&matrix), "unitary"),
        };
        if deviation > CLASS_TOL {
            return Err(Error::MatrixClass {
                expected,
                deviation,
            });
        }
        Ok(Self { matrix, class })
    }

    pub fn hermitian(matrix: CMatrix) -> Result<Self> {
        Self::new(matrix, OperatorClass::Hermitian)
    }

    pub fn skew_hermitian(matrix: CMatrix) -> Result<Self> {
        Self::new(matrix, OperatorClass::SkewHermitian)
    }

    pub fn unitary(matrix: CMatrix) -> Result<Self> {
        Self::new(matrix, OperatorClass::Unitary)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
            class: OperatorClass::Unitary,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn class(&self) -> OperatorClass {
        self.class
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn skew_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m + m.adjoint()))
}

pub fn unitary_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    max_abs(&(m.adjoint() * m - CMatrix::identity(n, n)))
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `Skew(A) = (A - A†) / 2`.
pub fn skew(a: &CMatrix) -> CMatrix {
    (a - a.adjoint()) * c(0.5, 0.0)
}

/// Complex Frobenius inner product `Tr(A† B)`.
pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Real Frobenius inner product `Re Tr(A† B)`.
pub fn real_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    frobenius_inner(a, b).re
}

pub fn frobenius_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn letter_matrix(letter: Letter) -> CMatrix {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match letter {
        Letter::I => CMatrix::from_row_slice(2, 2, &[l, o, o, l]),
        Letter::X => CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        Letter::Y => CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        Letter::Z => CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    }
}

fn check_budget(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::QubitCount {
            n_qubits,
            reason: "dense operators are limited to 8 qubits",
        });
    }
    Ok(())
}

/// Dense matrix of a Pauli word, `σ_{N-1} ⊗ … ⊗ σ_0` so that qubit `l` is
/// bit `l` of the basis index.
pub fn pauli_matrix(word: &PauliWord) -> Result<CMatrix> {
    check_budget(word.n_qubits())?;
    let mut out = CMatrix::identity(1, 1);
    for q in (0..word.n_qubits()).rev() {
        out = out.kronecker(&letter_matrix(word.letter(q)));
    }
    Ok(out)
}

pub fn dense_of_word(word: &PauliWord) -> Result<DenseOperator> {
    DenseOperator::hermitian(pauli_matrix(word)?)
}

pub fn dense_of_sum(op: &PauliSum) -> Result<DenseOperator> {
    check_budget(op.n_qubits())?;
    let p = 1usize << op.n_qubits();
    let mut m = CMatrix::zeros(p, p);
    for (coeff, word) in op.terms() {
        m += pauli_matrix(word)? * c(*coeff, 0.0);
    }
    DenseOperator::hermitian(m)
}

/// Rank-one projector `|ψ><ψ|`.
pub fn dense_of_state(state: &StateVector) -> Result<DenseOperator> {
    check_budget(state.n_qubits())?;
    let v = nalgebra::DVector::from_column_slice(state.amplitudes());
    DenseOperator::hermitian(&v * v.adjoint())
}

/// Orthogonal projection onto `T_U`: `Skew(Z U†) U`.
pub fn skew_project(z: &CMatrix, u: &DenseOperator) -> Result<CMatrix> {
    require_class(u, OperatorClass::Unitary)?;
    Ok(skew(&(z * u.matrix().adjoint())) * u.matrix())
}

fn require_class(op: &DenseOperator, class: OperatorClass) -> Result<()> {
    let (deviation, expected) = match class {
        OperatorClass::Unitary => (unitary_deviation(op.matrix()), "unitary"),
        OperatorClass::Hermitian => (hermitian_deviation(op.matrix()), "hermitian"),
        OperatorClass::SkewHermitian => (skew_deviation(op.matrix()), "skew-hermitian"),
        OperatorClass::General => (0.0, "general"),
    };
    if deviation > CLASS_TOL {
        return Err(Error::MatrixClass {
            expected,
            deviation,
        });
    }
    Ok(())
}

/// Left skew-Hermitian representation of the Riemannian gradient, `[O, ψ]`.
pub fn riemannian_gradient_tilde(o: &CMatrix, psi: &CMatrix) -> CMatrix {
    commutator(o, psi)
}

/// `½([O,[Ω,ψ]] + [[O,Ω],ψ])`, the Hessian on the Lie algebra.
///
/// Accepts any complex `Ω`; the operator is `C`-linear and maps Hermitian and
/// skew-Hermitian inputs into their own class.
pub fn hessian_apply_tilde(o: &CMatrix, psi: &CMatrix, omega: &CMatrix) -> CMatrix {
    let first = commutator(o, &commutator(omega, psi));
    let second = commutator(&commutator(o, omega), psi);
    (first + second) * c(0.5, 0.0)
}

/// The same operator written as `[O,[Ω,ψ]] + ½[[O,ψ],Ω]`, the form obtained
/// before the Jacobi identity is applied.
pub fn hessian_apply_unsymmetrized(o: &CMatrix, psi: &CMatrix, omega: &CMatrix) -> CMatrix {
    commutator(o, &commutator(omega, psi)) + commutator(&commutator(o, psi), omega) * c(0.5, 0.0)
}

/// Projection of the ambient derivative of the gradient field,
/// `Skew([O,[Ω,ψ]] + [O,ψ]Ω)`.
pub fn hessian_apply_by_projection(o: &CMatrix, psi: &CMatrix, omega: &CMatrix) -> CMatrix {
    skew(&(commutator(o, &commutator(omega, psi)) + commutator(o, psi) * omega))
}

/// `⟨iP, [ψ, O]⟩`, the unnormalized Pauli component of the negative
/// Riemannian gradient.
pub fn grad_coefficient(o: &CMatrix, psi: &CMatrix, word: &PauliWord) -> Result<f64> {
    let ip = pauli_matrix(word)? * c(0.0, 1.0);
    Ok(real_inner(&ip, &commutator(psi, o)))
}

/// `⟨iP^r, L(iP^s)⟩` with `L` the Hessian operator of [`hessian_apply_tilde`].
pub fn hessian_entry(o: &CMatrix, psi: &CMatrix, pr: &PauliWord, ps: &PauliWord) -> Result<f64> {
    let ipr = pauli_matrix(pr)? * c(0.0, 1.0);
    let ips = pauli_matrix(ps)? * c(0.0, 1.0);
    Ok(real_inner(&ipr, &hessian_apply_tilde(o, psi, &ips)))
}

/// `Σ_j i ω_j P_j`.
pub fn skew_from_coefficients(terms: &[(f64, PauliWord)]) -> Result<CMatrix> {
    let first = terms
        .first()
        .ok_or_else(|| Error::Config("empty coefficient list".into()))?;
    let p = 1usize << first.1.n_qubits();
    let mut out = CMatrix::zeros(p, p);
    for (w, word) in terms {
        out += pauli_matrix(word)? * c(0.0, *w);
    }
    Ok(out)
}

/// Real-symmetric embedding `[[A, -B], [B, A]]` of `H = A + iB`.
fn embed(h: &CMatrix) -> Result<SymMatrix> {
    let p = h.nrows();
    let n = 2 * p;
    let mut data = vec![0.0; n * n];
    for r in 0..p {
        for col in 0..p {
            let z = h[(r, col)];
            data[r * n + col] = z.re;
            data[(r + p) * n + col + p] = z.re;
            data[r * n + col + p] = -z.im;
            data[(r + p) * n + col] = z.im;
        }
    }
    // Rounding in H can leave the embedding asymmetric at the 1e-16 level.
    for r in 0..n {
        for col in (r + 1)..n {
            let avg = 0.5 * (data[r * n + col] + data[col * n + r]);
            data[r * n + col] = avg;
            data[col * n + r] = avg;
        }
    }
    SymMatrix::from_row_major(n, data)
}

/// `exp(Ω) U` for skew-Hermitian `Ω`.
///
/// With `H = iΩ` Hermitian, `exp(Ω) = cos H - i sin H`. Both matrix functions
/// are evaluated on the real embedding of `H` through one Jacobi
/// diagonalization, then read back from its left block column.
pub fn exp_map(omega: &CMatrix, u: &DenseOperator) -> Result<DenseOperator> {
    let dev = skew_deviation(omega);
    if dev > CLASS_TOL {
        return Err(Error::MatrixClass {
            expected: "skew-hermitian",
            deviation: dev,
        });
    }
    require_class(u, OperatorClass::Unitary)?;
    let p = omega.nrows();
    let h = omega * c(0.0, 1.0);
    let eig = jacobi_eig(&embed(&h)?, JACOBI_TOL)?;
    let n = 2 * p;
    let mut cos_h = CMatrix::zeros(p, p);
    let mut sin_h = CMatrix::zeros(p, p);
    for (k, lambda) in eig.values.iter().enumerate() {
        let v = eig.vector(k);
        let (s, co) = lambda.sin_cos();
        for r in 0..p {
            for col in 0..p {
                // rows r (real part) and r + p (imag part) of column col
                let re = v[r] * v[col];
                let im = v[r + p] * v[col];
                cos_h[(r, col)] += c(co * re, co * im);
                sin_h[(r, col)] += c(s * re, s * im);
            }
        }
    }
    debug_assert_eq!(n, eig.values.len());
    let exp = cos_h - sin_h * c(0.0, 1.0);
    DenseOperator::unitary(exp * u.matrix())
}

/// `exp(iθP) = cos θ I + i sin θ P`.
pub fn pauli_exponential(word: &PauliWord, theta: f64) -> Result<CMatrix> {
    let pm = pauli_matrix(word)?;
    let p = pm.nrows();
    let (s, co) = theta.sin_cos();
    Ok(CMatrix::identity(p, p) * c(co, 0.0) + pm * c(0.0, s))
}

/// `(∏_j exp(i ω_j P_j t)) U`, the first listed factor acting first.
pub fn trotter_retraction(
    terms: &[(f64, PauliWord)],
    t: f64,
    u: &DenseOperator,
) -> Result<DenseOperator> {
    require_class(u, OperatorClass::Unitary)?;
    let mut acc = u.matrix().clone();
    for (w, word) in terms {
        acc = pauli_exponential(word, w * t)? * acc;
    }
    DenseOperator::unitary(acc)
}
