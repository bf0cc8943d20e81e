use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pauli index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: u64, n_qubits: usize },

    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("qubit {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("unsupported qubit count {n_qubits}: {reason}")]
    QubitCount {
        n_qubits: usize,
        reason: &'static str,
    },

    #[error("subspace dimension {d} out of range [1, {max}]")]
    SubspaceDimension { d: usize, max: u64 },

    #[error("expectation value has imaginary residue {0:e}")]
    ImaginaryExpectation(f64),

    #[error("negative variance {0:e}")]
    NegativeVariance(f64),

    #[error("matrix is not {expected} (deviation {deviation:e})")]
    MatrixClass {
        expected: &'static str,
        deviation: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("cholesky factorization failed at pivot {pivot} (value {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("missing shifted value for pauli index {0}")]
    MissingShiftCache(u64),

    #[error("line search direction is identically zero")]
    ZeroDirection,

    #[error("armijo backtracking exceeded {0} halvings")]
    ArmijoExhausted(usize),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
