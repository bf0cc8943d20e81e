//! Small dense real-symmetric linear algebra: cyclic Jacobi eigensolver and
//! Cholesky solves. Sized for Newton systems up to a few hundred unknowns.

use crate::error::{Error, Result};

/// Symmetry tolerance enforced on construction.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Default relative off-diagonal threshold for [`jacobi_eig`].
pub const JACOBI_TOL: f64 = 1e-14;

const MAX_SWEEPS: usize = 100;

/// Row-major symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, *v);
        }
        m
    }

    /// Builds from row-major entries, rejecting asymmetric input.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((data[i * n + j] - data[j * n + i]).abs());
            }
        }
        if worst >= SYMMETRY_TOL {
            return Err(Error::MatrixClass {
                expected: "symmetric",
                deviation: worst,
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Writes `(i, j)` and its mirror `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `A + shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += shift;
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Eigenpairs sorted by ascending eigenvalue.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Column `k` (stored contiguously) is the eigenvector for `values[k]`.
    vectors: Vec<f64>,
    n: usize,
}

impl SymEigen {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }
}

/// Cyclic Jacobi eigensolver. Sweeps until the off-diagonal Frobenius mass is
/// below `tol * ‖A‖_F`.
pub fn jacobi_eig(matrix: &SymMatrix, tol: f64) -> Result<SymEigen> {
    let n = matrix.n;
    let mut a = matrix.data.clone();
    // v is row-major; column k accumulates the k-th eigenvector.
    let mut v = SymMatrix::identity(n).data;
    let scale = matrix.frobenius_norm();

    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= tol * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off_norm(&a) > tol * scale {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend((0..n).map(|row| v[row * n + k]));
    }
    Ok(SymEigen { values, vectors, n })
}

/// Smallest eigenvalue.
pub fn min_eigenvalue(matrix: &SymMatrix) -> Result<f64> {
    if matrix.order() == 1 {
        return Ok(matrix.get(0, 0));
    }
    Ok(jacobi_eig(matrix, JACOBI_TOL)?.values[0])
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`, row-major.
pub fn cholesky(matrix: &SymMatrix) -> Result<Vec<f64>> {
    let n = matrix.n;
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut diag = matrix.get(j, j);
        for k in 0..j {
            diag -= l[j * n + k] * l[j * n + k];
        }
        // Also rejects NaN pivots.
        if diag.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::NotPositiveDefinite {
                pivot: j,
                value: diag,
            });
        }
        let ljj = diag.sqrt();
        l[j * n + j] = ljj;
        for i in (j + 1)..n {
            let mut s = matrix.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / ljj;
        }
    }
    Ok(l)
}

/// Solves `A x = b` for symmetric positive definite `A` by Cholesky.
pub fn solve_spd(matrix: &SymMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = matrix.n;
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let l = cholesky(matrix)?;
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = rhs[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, rng: &mut impl Rng) -> SymMatrix {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, rng.random_range(-1.0..1.0));
            }
        }
        m
    }

    fn random_spd(n: usize, rng: &mut impl Rng) -> SymMatrix {
        // B Bᵀ + n I
        let b: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let s: f64 = (0..n).map(|k| b[i * n + k] * b[j * n + k]).sum();
                m.set(i, j, s + if i == j { n as f64 * 0.1 } else { 0.0 });
            }
        }
        m
    }

    fn norm(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn eig_examples() {
        let e = jacobi_eig(&SymMatrix::diagonal(&[2.0, 1.0]), JACOBI_TOL).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0]);

        let m = SymMatrix::from_rows(&[vec![-1.0, 4.0], vec![4.0, -1.0]]).unwrap();
        let e = jacobi_eig(&m, JACOBI_TOL).unwrap();
        assert_abs_diff_eq!(e.values[0], -5.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 3.0, epsilon = 1e-14);

        let e = jacobi_eig(&SymMatrix::identity(8), JACOBI_TOL).unwrap();
        assert!(e.values.iter().all(|v| *v == 1.0));
        for k in 0..8 {
            assert_abs_diff_eq!(norm(e.vector(k)), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let err = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.1, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::MatrixClass { .. }));
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert_eq!(min_eigenvalue(&SymMatrix::diagonal(&[0.05])).unwrap(), 0.05);
        let m = SymMatrix::from_rows(&[vec![-1.0, 4.0], vec![4.0, -1.0]]).unwrap();
        assert_abs_diff_eq!(min_eigenvalue(&m).unwrap(), -5.0, epsilon = 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let a = random_sym(7, &mut rng);
            let delta = rng.random_range(-2.0..2.0);
            let shifted = min_eigenvalue(&a.shifted(delta)).unwrap();
            assert_abs_diff_eq!(
                shifted,
                min_eigenvalue(&a).unwrap() + delta,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn eigen_decomposition_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [1usize, 2, 5, 16, 40] {
            let a = random_sym(n, &mut rng);
            let e = jacobi_eig(&a, JACOBI_TOL).unwrap();
            assert_abs_diff_eq!(e.values.iter().sum::<f64>(), a.trace(), epsilon = 1e-9);
            for k in 0..n {
                let av = a.mul_vec(e.vector(k));
                for (x, y) in av.iter().zip(e.vector(k)) {
                    assert!((x - e.values[k] * y).abs() < 1e-9);
                }
                for l in 0..n {
                    let dot: f64 = e
                        .vector(k)
                        .iter()
                        .zip(e.vector(l))
                        .map(|(a, b)| a * b)
                        .sum();
                    let expected = if k == l { 1.0 } else { 0.0 };
                    assert!((dot - expected).abs() < 1e-9);
                }
            }
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn solve_examples() {
        let b = [0.3, -1.0, 2.0];
        assert_eq!(solve_spd(&SymMatrix::identity(3), &b).unwrap(), b.to_vec());
        let x = solve_spd(&SymMatrix::diagonal(&[2.0, 4.0]), &[2.0, 4.0]).unwrap();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 1.0, epsilon = 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = random_spd(16, &mut rng);
        let planted: Vec<f64> = (0..16).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = solve_spd(&a, &a.mul_vec(&planted)).unwrap();
        for (u, v) in x.iter().zip(&planted) {
            assert!((u - v).abs() < 1e-8);
        }
    }

    #[test]
    fn solve_residual_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.random_range(1..=64);
            let a = random_spd(n, &mut rng);
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let x = solve_spd(&a, &b).unwrap();
            let r: Vec<f64> = a.mul_vec(&x).iter().zip(&b).map(|(u, v)| u - v).collect();
            assert!(norm(&r) <= 1e-10 * (a.frobenius_norm() * norm(&x) + norm(&b)));
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = SymMatrix::from_rows(&[vec![-1.0, 4.0], vec![4.0, -1.0]]).unwrap();
        assert!(matches!(
            solve_spd(&m, &[1.0, 1.0]),
            Err(Error::NotPositiveDefinite { pivot: 0, .. })
        ));
    }
}
