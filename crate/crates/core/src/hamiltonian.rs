//! Real-weighted Pauli sums and the periodic Heisenberg XXZ chain.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eig, SymMatrix, JACOBI_TOL};
use crate::pauli::{Letter, PauliWord};

/// Dense diagonalization budget for [`ground_energy`].
pub const MAX_DENSE_QUBITS: usize = 8;

/// Hermitian observable `Σ_m c_m P_m` with distinct words.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliWord)>,
}

impl PauliSum {
    /// Merges repeated words (first occurrence fixes the order) and drops
    /// terms whose merged coefficient is zero. Identity terms are rejected.
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliWord)>) -> Result<Self> {
        Self::build(n_qubits, terms, false)
    }

    /// Like [`PauliSum::new`] but keeps identity terms.
    pub fn with_identity(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (f64, PauliWord)>,
    ) -> Result<Self> {
        Self::build(n_qubits, terms, true)
    }

    fn build(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (f64, PauliWord)>,
        allow_identity: bool,
    ) -> Result<Self> {
        let mut merged: Vec<(f64, PauliWord)> = Vec::new();
        for (coeff, word) in terms {
            if word.n_qubits() != n_qubits {
                return Err(Error::QubitMismatch {
                    left: n_qubits,
                    right: word.n_qubits(),
                });
            }
            if !coeff.is_finite() {
                return Err(Error::Config(format!("non-finite coefficient on {word}")));
            }
            if word.is_identity() && !allow_identity {
                return Err(Error::Config("identity term in observable".into()));
            }
            match merged.iter_mut().find(|(_, w)| *w == word) {
                Some(entry) => entry.0 += coeff,
                None => merged.push((coeff, word)),
            }
        }
        merged.retain(|(c, _)| *c != 0.0);
        Ok(Self {
            n_qubits,
            terms: merged,
        })
    }

    pub fn single(coeff: f64, word: PauliWord) -> Self {
        Self::with_identity(word.n_qubits(), [(coeff, word)]).expect("single term is valid")
    }

    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliWord)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// One `coefficient<TAB>word` line per term.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (c, w) in &self.terms {
            writeln!(out, "{c}\t{w}").unwrap();
        }
        out
    }

    /// Real and imaginary parts of the dense matrix, row-major `p x p`.
    pub fn dense_parts(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::QubitCount {
                n_qubits: self.n_qubits,
                reason: "dense matrices are limited to 8 qubits",
            });
        }
        let p = 1usize << self.n_qubits;
        let mut re = vec![0.0; p * p];
        let mut im = vec![0.0; p * p];
        for (coeff, word) in &self.terms {
            let x = word.x_mask() as usize;
            let z = word.z_mask();
            // P|col> = i^{ny} (-1)^{|col & z|} |col ^ x>
            let ny = word.y_count() % 4;
            for col in 0..p {
                let sign = if (col as u64 & z).count_ones().is_multiple_of(2) {
                    *coeff
                } else {
                    -*coeff
                };
                let row = col ^ x;
                match ny {
                    0 => re[row * p + col] += sign,
                    1 => im[row * p + col] += sign,
                    2 => re[row * p + col] -= sign,
                    _ => im[row * p + col] -= sign,
                }
            }
        }
        Ok((re, im))
    }
}

/// `Σ X_i X_{i+1} + Σ Y_i Y_{i+1} + Δ Σ Z_i Z_{i+1}` with periodic boundaries.
pub fn build_xxz(n_qubits: usize, delta: f64) -> Result<PauliSum> {
    if n_qubits < 2 {
        return Err(Error::QubitCount {
            n_qubits,
            reason: "the XXZ chain needs at least 2 qubits",
        });
    }
    let bond = |letter: Letter, i: usize| -> Result<PauliWord> {
        let j = (i + 1) % n_qubits;
        let a = PauliWord::single(n_qubits, i, letter)?;
        let b = PauliWord::single(n_qubits, j, letter)?;
        PauliWord::new(n_qubits, a.x_mask() | b.x_mask(), a.z_mask() | b.z_mask())
    };
    let mut terms = Vec::with_capacity(3 * n_qubits);
    for (letter, coeff) in [(Letter::X, 1.0), (Letter::Y, 1.0), (Letter::Z, delta)] {
        for i in 0..n_qubits {
            terms.push((coeff, bond(letter, i)?));
        }
    }
    PauliSum::new(n_qubits, terms)
}

/// Smallest eigenvalue of the dense matrix of `op`.
///
/// Complex Hermitian matrices `A + iB` are diagonalized through the real
/// symmetric embedding `[[A, -B], [B, A]]`, whose spectrum is that of the
/// original with every eigenvalue doubled in multiplicity.
pub fn ground_energy(op: &PauliSum) -> Result<f64> {
    let (re, im) = op.dense_parts()?;
    let p = 1usize << op.n_qubits();
    if op.is_empty() {
        return Ok(0.0);
    }
    let matrix = if im.iter().all(|v| *v == 0.0) {
        SymMatrix::from_row_major(p, re)?
    } else {
        real_embedding(p, &re, &im)?
    };
    rayleigh_refined_min(&matrix)
}

/// Jacobi estimate of the smallest eigenvalue, replaced by the Rayleigh
/// quotient of its eigenvector, which is accurate to second order.
fn rayleigh_refined_min(matrix: &SymMatrix) -> Result<f64> {
    let eig = jacobi_eig(matrix, JACOBI_TOL)?;
    let v = eig.vector(0);
    let mv = matrix.mul_vec(v);
    let num: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
    let den: f64 = v.iter().map(|a| a * a).sum();
    Ok(num / den)
}

pub(crate) fn real_embedding(p: usize, re: &[f64], im: &[f64]) -> Result<SymMatrix> {
    let n = 2 * p;
    let mut data = vec![0.0; n * n];
    for r in 0..p {
        for c in 0..p {
            let a = re[r * p + c];
            let b = im[r * p + c];
            data[r * n + c] = a;
            data[(r + p) * n + c + p] = a;
            data[r * n + c + p] = -b;
            data[(r + p) * n + c] = b;
        }
    }
    SymMatrix::from_row_major(n, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    #[test]
    fn xxz_two_qubits_merges_periodic_bonds() {
        let op = build_xxz(2, 0.5).unwrap();
        assert_eq!(
            op.terms(),
            &[(2.0, w("XX")), (2.0, w("YY")), (1.0, w("ZZ"))]
        );
    }

    #[test]
    fn xxz_term_counts() {
        let op = build_xxz(3, 0.0).unwrap();
        assert_eq!(op.len(), 6);
        assert!(op.terms().iter().all(|(_, w)| w.letter(0) != Letter::Z
            && w.letter(1) != Letter::Z
            && w.letter(2) != Letter::Z));

        let op = build_xxz(4, 0.5).unwrap();
        assert_eq!(op.len(), 12);
        let zz: Vec<f64> = op
            .terms()
            .iter()
            .filter(|(_, w)| w.to_string().contains('Z'))
            .map(|(c, _)| *c)
            .collect();
        assert_eq!(zz, vec![0.5; 4]);
        assert!(build_xxz(1, 0.5).is_err());
    }

    #[test]
    fn dump_format() {
        let op = build_xxz(2, 0.5).unwrap();
        assert_eq!(op.dump(), "2\tXX\n2\tYY\n1\tZZ\n");
    }

    #[test]
    fn ground_energy_examples() {
        assert_abs_diff_eq!(ground_energy(&PauliSum::single(1.0, w("Z"))).unwrap(), -1.0);
        assert_abs_diff_eq!(
            ground_energy(&build_xxz(2, 0.5).unwrap()).unwrap(),
            -5.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            ground_energy(&build_xxz(2, 0.0).unwrap()).unwrap(),
            -4.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn complex_observable_uses_embedding() {
        let op = PauliSum::new(2, [(1.0, w("YI")), (0.5, w("XY"))]).unwrap();
        let (_, im) = op.dense_parts().unwrap();
        assert!(im.iter().any(|v| *v != 0.0));
        // YI and XY anticommute, so (a YI + b XY)^2 = (a^2 + b^2) I.
        let expected = -(1.0f64 + 0.25).sqrt();
        assert_abs_diff_eq!(ground_energy(&op).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn ground_energy_ignores_term_order() {
        let op = build_xxz(3, 0.7).unwrap();
        let mut terms = op.terms().to_vec();
        terms.reverse();
        let reversed = PauliSum::new(3, terms).unwrap();
        assert_abs_diff_eq!(
            ground_energy(&op).unwrap(),
            ground_energy(&reversed).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn duplicate_and_identity_handling() {
        let op = PauliSum::new(1, [(1.0, w("X")), (-1.0, w("X")), (2.0, w("Z"))]).unwrap();
        assert_eq!(op.terms(), &[(2.0, w("Z"))]);
        assert!(PauliSum::new(1, [(1.0, w("I"))]).is_err());
        assert_eq!(
            PauliSum::with_identity(1, [(1.0, w("I"))]).unwrap().len(),
            1
        );
    }
}
