use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense square real matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> RealMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![T::one(); n])
    }

    pub fn from_diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds from row-major data; `data.len()` must be a perfect square.
    pub fn from_row_major(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == T::zero() {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    /// `(self + selfᵀ) / 2`.
    pub fn symmetrized(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.n, |i, j| half * (self[(i, j)] + self[(j, i)]))
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(T::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-T::one(), other)
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: T, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + alpha * b)
                .collect(),
        }
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius inner product `tr(selfᵀ other)`.
    pub fn dot(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a * b)
            .sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }
}

impl<T> Index<(usize, usize)> for RealMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for RealMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymmetricEigen<T> {
    /// Ascending eigenvalues.
    pub values: Vec<T>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: RealMatrix<T>,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver for real symmetric matrices.
///
/// The input is symmetrized first; callers are responsible for passing a
/// matrix that is symmetric to working precision.
pub fn symmetric_eigen<T: Real>(m: &RealMatrix<T>) -> SymmetricEigen<T> {
    let n = m.dim();
    let mut a = m.symmetrized();
    let mut v = RealMatrix::<T>::identity(n);
    let scale = a.frobenius_norm();
    if n <= 1 || scale == T::zero() {
        let values = (0..n).map(|i| a[(i, i)]).collect();
        return SymmetricEigen { values, vectors: v };
    }
    let eps = T::epsilon();
    let target = eps * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= eps * eps * scale {
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = {
                    let denom = theta.abs() + (theta * theta + T::one()).sqrt();
                    if theta < T::zero() {
                        -T::one() / denom
                    } else {
                        T::one() / denom
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                rotate(&mut a, p, q, c, s);
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .partial_cmp(&a[(j, j)])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = RealMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    SymmetricEigen { values, vectors }
}

// Applies the off-diagonal part of the Jacobi rotation in the (p, q) plane.
fn rotate<T: Real>(a: &mut RealMatrix<T>, p: usize, q: usize, c: T, s: T) {
    let n = a.dim();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp;
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq;
    }
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn min_eigenvalue<T: Real>(m: &RealMatrix<T>) -> T {
    symmetric_eigen(m)
        .values
        .first()
        .copied()
        .unwrap_or_else(T::zero)
}

/// Cholesky factor `L` with `m = L Lᵀ`.
///
/// Fails with [`Error::NotPositiveDefinite`] as soon as a pivot drops below
/// `tol`, which signals that `m` sits on (or outside) the boundary of the PSD
/// cone.
pub fn cholesky_psd<T: Real>(m: &RealMatrix<T>, tol: T) -> Result<RealMatrix<T>> {
    let n = m.dim();
    let mut l = RealMatrix::zeros(n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d = d - l[(j, k)] * l[(j, k)];
        }
        if !(d >= tol) || d <= T::zero() {
            return Err(Error::NotPositiveDefinite {
                index: j,
                pivot: d.to_f64_lossy(),
            });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut s = m[(i, j)];
            let (ri, rj) = (i * n, j * n);
            for k in 0..j {
                s = s - l.data[ri + k] * l.data[rj + k];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Solves `L Lᵀ x = b` given the Cholesky factor.
pub fn cholesky_solve<T: Real>(l: &RealMatrix<T>, b: &[T]) -> Vec<T> {
    let n = l.dim();
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s = s - l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s = s - l[(k, i)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

/// Inverse of a lower-triangular matrix.
pub fn lower_triangular_inverse<T: Real>(l: &RealMatrix<T>) -> RealMatrix<T> {
    let n = l.dim();
    let mut inv = RealMatrix::zeros(n);
    for j in 0..n {
        inv[(j, j)] = T::one() / l[(j, j)];
        for i in j + 1..n {
            let mut s = T::zero();
            for k in j..i {
                s = s + l[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -s / l[(i, i)];
        }
    }
    inv
}

/// Inverse of a symmetric positive definite matrix from its Cholesky factor.
pub fn cholesky_inverse<T: Real>(l: &RealMatrix<T>) -> RealMatrix<T> {
    let linv = lower_triangular_inverse(l);
    // (L Lᵀ)⁻¹ = L⁻ᵀ L⁻¹
    linv.transpose().matmul(&linv).symmetrized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(n: usize, seed: u64) -> RealMatrix<f64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        RealMatrix::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn cholesky_identity() {
        let l = cholesky_psd(&RealMatrix::<f64>::identity(3), 1e-12).unwrap();
        assert_eq!(l, RealMatrix::identity(3));
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = RealMatrix::from_diag(&[1.0, -1.0]);
        assert!(matches!(
            cholesky_psd(&m, 1e-12),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
    }

    #[test]
    fn cholesky_reconstructs_gram_plus_identity() {
        for seed in 0..5 {
            let a = random_matrix(6, seed);
            let m = a.transpose().matmul(&a).add(&RealMatrix::identity(6));
            let l = cholesky_psd(&m, 1e-12).unwrap();
            let r = l.matmul(&l.transpose()).sub(&m).frobenius_norm();
            assert!(r < 1e-9 * m.frobenius_norm(), "residual {r}");
            let inv = cholesky_inverse(&l);
            let e = inv
                .matmul(&m)
                .sub(&RealMatrix::identity(6))
                .frobenius_norm();
            assert!(e < 1e-10);
            let x = cholesky_solve(&l, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
            let back: Vec<f64> = (0..6)
                .map(|i| (0..6).map(|j| m[(i, j)] * x[j]).sum())
                .collect();
            for (i, b) in back.iter().enumerate() {
                assert!((b - (i + 1) as f64).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn jacobi_reconstructs() {
        for seed in 0..5 {
            let a = random_matrix(9, seed).symmetrized();
            let e = symmetric_eigen(&a);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let d = RealMatrix::from_diag(&e.values);
            let rec = e.vectors.matmul(&d).matmul(&e.vectors.transpose());
            assert!(rec.sub(&a).frobenius_norm() < 1e-12);
            let vtv = e.vectors.transpose().matmul(&e.vectors);
            assert!(vtv.sub(&RealMatrix::identity(9)).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn jacobi_diagonal_and_degenerate() {
        let e = symmetric_eigen(&RealMatrix::from_diag(&[2.0, -5.0, 3.0]));
        assert_eq!(e.values, vec![-5.0, 2.0, 3.0]);
        let e = symmetric_eigen(&RealMatrix::<f64>::identity(4));
        assert_eq!(e.values, vec![1.0; 4]);
    }

    #[test]
    fn works_in_single_precision() {
        let a = RealMatrix::<f32>::from_fn(4, |i, j| 1.0 / (1 + i + j) as f32);
        let e = symmetric_eigen(&a);
        let rec = e
            .vectors
            .matmul(&RealMatrix::from_diag(&e.values))
            .matmul(&e.vectors.transpose());
        assert!(rec.sub(&a).frobenius_norm() < 1e-5);
    }
}
