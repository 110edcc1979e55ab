use std::ops::{Index, IndexMut};

use num_complex::Complex;

use super::real::{symmetric_eigen, RealMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// General dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
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

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        let zero = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == zero {
                    continue;
                }
                for j in 0..n {
                    let b = other.data[k * n + j];
                    out.data[i * n + j] = out.data[i * n + j] + a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self[(i, i)]
        })
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            for k in 0..n {
                acc = acc + self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    /// Largest `|m[i][j] - conj(m[j][i])|` with its position.
    fn hermiticity_defect(&self) -> (usize, usize, T) {
        let mut worst = (0, 0, T::zero());
        for i in 0..self.n {
            for j in i..self.n {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst.2 {
                    worst = (i, j, d);
                }
            }
        }
        worst
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

/// Complex Hermitian matrix. Construction checks `m = m†` entrywise.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T> {
    inner: ComplexMatrix<T>,
}

impl<T: Real> HermitianMatrix<T> {
    /// Validates Hermiticity within the absolute tolerance of [`Real::TOL`].
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::InvalidInput(
                "matrix dimension must be positive".into(),
            ));
        }
        let (row, col, dev) = m.hermiticity_defect();
        if !(dev <= T::lit(T::TOL.hermiticity)) {
            return Err(Error::NonHermitianInput {
                row,
                col,
                deviation: dev.to_f64_lossy(),
            });
        }
        Ok(Self { inner: m })
    }

    /// Replaces `m` by `(m + m†)/2` after checking the defect is within a
    /// tolerance relative to the matrix scale. Used for products that are
    /// Hermitian in exact arithmetic.
    pub fn hermitize(m: ComplexMatrix<T>) -> Result<Self> {
        let (row, col, dev) = m.hermiticity_defect();
        let scale = T::one().max(m.frobenius_norm());
        if !(dev <= T::lit(T::TOL.reconstruction) * scale) {
            return Err(Error::NonHermitianInput {
                row,
                col,
                deviation: dev.to_f64_lossy(),
            });
        }
        let half = Complex::new(T::lit(0.5), T::zero());
        let sym = m.add(&m.adjoint()).scale(half);
        Ok(Self { inner: sym })
    }

    pub fn from_real(m: &RealMatrix<T>) -> Result<Self> {
        let c = ComplexMatrix::from_fn(m.dim(), |i, j| Complex::new(m[(i, j)], T::zero()));
        Self::new(c)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: ComplexMatrix::identity(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: ComplexMatrix::zeros(n),
        }
    }

    pub fn diag(d: &[T]) -> Self {
        let mut m = ComplexMatrix::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = Complex::new(v, T::zero());
        }
        Self { inner: m }
    }

    /// Projector `|v⟩⟨v|` onto the normalized vector.
    pub fn projector(v: &[Complex<T>]) -> Self {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        let u: Vec<Complex<T>> = v.iter().map(|z| z / norm).collect();
        let m = ComplexMatrix::from_fn(u.len(), |i, j| u[i] * u[j].conj());
        Self { inner: m }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.inner[(i, j)]
    }

    pub fn trace(&self) -> T {
        self.inner.trace().re
    }

    pub fn frobenius_norm(&self) -> T {
        self.inner.frobenius_norm()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.add(&other.inner),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.sub(&other.inner),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            inner: self.inner.scale(Complex::new(s, T::zero())),
        }
    }

    /// `self²`, Hermitian by construction.
    pub fn square(&self) -> Self {
        let p = self.inner.matmul(&self.inner);
        let half = Complex::new(T::lit(0.5), T::zero());
        Self {
            inner: p.add(&p.adjoint()).scale(half),
        }
    }

    /// Anticommutator `{self, other}`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        let ab = self.inner.matmul(&other.inner);
        let ba = other.inner.matmul(&self.inner);
        let s = ab.add(&ba);
        let half = Complex::new(T::lit(0.5), T::zero());
        Self {
            inner: s.add(&s.adjoint()).scale(half),
        }
    }

    /// True when every imaginary part vanishes exactly.
    pub fn is_real(&self) -> bool {
        self.inner.as_slice().iter().all(|z| z.im == T::zero())
    }

    /// Real part as a real symmetric matrix.
    pub fn real_part(&self) -> RealMatrix<T> {
        RealMatrix::from_fn(self.dim(), |i, j| self.inner[(i, j)].re)
    }

    /// The `2n × 2n` real symmetric embedding `[[Re, -Im], [Im, Re]]`.
    pub fn real_embedding(&self) -> RealMatrix<T> {
        let n = self.dim();
        RealMatrix::from_fn(2 * n, |i, j| {
            let z = self.inner[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        })
    }

    /// Inverse of [`Self::real_embedding`] for matrices with the embedding
    /// structure; entries are averaged over the redundant blocks.
    pub fn from_real_embedding(m: &RealMatrix<T>) -> Result<Self> {
        if !m.dim().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: m.dim() + 1,
                found: m.dim(),
            });
        }
        let n = m.dim() / 2;
        let half = T::lit(0.5);
        let c = ComplexMatrix::from_fn(n, |i, j| {
            let re = half * (m[(i, j)] + m[(i + n, j + n)]);
            let im = half * (m[(i + n, j)] - m[(i, j + n)]);
            Complex::new(re, im)
        });
        Self::hermitize(c)
    }

    /// `⟨v| self |v⟩` (real part).
    pub fn quadratic_form(&self, v: &[Complex<T>]) -> T {
        let n = self.dim();
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            let mut row = Complex::new(T::zero(), T::zero());
            for (j, vj) in v.iter().enumerate() {
                row = row + self.inner[(i, j)] * *vj;
            }
            acc = acc + v[i].conj() * row;
        }
        acc.re
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    /// Ascending real eigenvalues.
    pub values: Vec<T>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<Complex<T>>>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mut m = ComplexMatrix::zeros(n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = m[(i, j)] + v[i] * v[j].conj() * *lambda;
                }
            }
        }
        m
    }
}

/// Eigen-decomposition of a Hermitian matrix through Jacobi iteration on its
/// real symmetric embedding.
///
/// Every eigenvalue of `m` appears twice in the embedding; pairs are merged and
/// the complex eigenvectors are re-orthonormalized inside each degenerate
/// cluster.
pub fn eig_hermitian<T: Real>(m: &HermitianMatrix<T>) -> Result<HermitianEigen<T>> {
    let (row, col, dev) = m.matrix().hermiticity_defect();
    if !(dev <= T::lit(T::TOL.hermiticity).max(T::lit(T::TOL.hermiticity) * m.frobenius_norm())) {
        return Err(Error::NonHermitianInput {
            row,
            col,
            deviation: dev.to_f64_lossy(),
        });
    }
    let n = m.dim();
    let emb = symmetric_eigen(&m.real_embedding());
    let scale = T::one().max(m.frobenius_norm());
    let cluster_tol = T::lit(1e3) * T::epsilon() * scale * T::lit((2 * n) as f64);

    let as_complex = |k: usize| -> Vec<Complex<T>> {
        (0..n)
            .map(|i| Complex::new(emb.vectors[(i, k)], emb.vectors[(i + n, k)]))
            .collect()
    };

    let mut values = Vec::with_capacity(n);
    let mut vectors: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < 2 * n {
        let mut end = start + 1;
        while end < 2 * n && emb.values[end] - emb.values[end - 1] <= cluster_tol {
            end += 1;
        }
        // An odd cluster can only arise from a tolerance edge; absorb the next value.
        if (end - start) % 2 == 1 && end < 2 * n {
            end += 1;
        }
        let wanted = (end - start) / 2;
        let mut candidates: Vec<Vec<Complex<T>>> = (start..end).map(as_complex).collect();
        let mut kept: Vec<Vec<Complex<T>>> = Vec::with_capacity(wanted);
        for _ in 0..wanted {
            // Pivoted Gram-Schmidt: keep the candidate with the largest residual.
            let (best, _) = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (i, norm(c)))
                .fold(
                    (0, T::neg_infinity()),
                    |acc, x| if x.1 > acc.1 { x } else { acc },
                );
            let mut v = candidates.swap_remove(best);
            let nv = norm(&v);
            for z in v.iter_mut() {
                *z = *z / nv;
            }
            for c in candidates.iter_mut() {
                let proj = inner(&v, c);
                for (ci, vi) in c.iter_mut().zip(&v) {
                    *ci = *ci - *vi * proj;
                }
            }
            kept.push(v);
        }
        let pair_vals = &emb.values[start..end];
        for (k, v) in kept.into_iter().enumerate() {
            let half = T::lit(0.5);
            values.push(half * (pair_vals[2 * k] + pair_vals[2 * k + 1]));
            vectors.push(v);
        }
        start = end;
    }
    Ok(HermitianEigen { values, vectors })
}

fn norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

// ⟨a|b⟩
fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x.conj() * y
        })
}

/// Largest eigenvalue `Λ(m)`.
pub fn max_eigenvalue<T: Real>(m: &HermitianMatrix<T>) -> Result<T> {
    Ok(*eig_hermitian(m)?.values.last().expect("dim ≥ 1"))
}

/// Smallest eigenvalue.
pub fn min_eigenvalue_hermitian<T: Real>(m: &HermitianMatrix<T>) -> Result<T> {
    Ok(eig_hermitian(m)?.values[0])
}

/// Kronecker product with the first factor most significant.
pub fn kron<T: Real>(a: &HermitianMatrix<T>, b: &HermitianMatrix<T>) -> HermitianMatrix<T> {
    HermitianMatrix {
        inner: kron_general(a.matrix(), b.matrix()),
    }
}

pub(crate) fn kron_general<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
) -> ComplexMatrix<T> {
    let (da, db) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(da * db, |i, j| a[(i / db, j / db)] * b[(i % db, j % db)])
}

/// Index of entry `(i, j)` after transposing the second tensor factor.
#[inline]
pub fn partial_transpose_index(i: usize, j: usize, dim_b: usize) -> (usize, usize) {
    let (ia, ib) = (i / dim_b, i % dim_b);
    let (ja, jb) = (j / dim_b, j % dim_b);
    (ia * dim_b + jb, ja * dim_b + ib)
}

/// Transposes the second tensor factor of a bipartite operator.
pub fn partial_transpose<T: Real>(
    m: &HermitianMatrix<T>,
    dim_a: usize,
    dim_b: usize,
) -> Result<HermitianMatrix<T>> {
    if dim_a * dim_b != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            found: m.dim(),
        });
    }
    let src = m.matrix();
    let out = ComplexMatrix::from_fn(m.dim(), |i, j| {
        let (pi, pj) = partial_transpose_index(i, j, dim_b);
        src[(pi, pj)]
    });
    Ok(HermitianMatrix { inner: out })
}

/// Quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    inner: HermitianMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(m: HermitianMatrix<T>) -> Result<Self> {
        let tr = m.trace();
        if !((tr - T::one()).abs() <= T::lit(T::TOL.trace)) {
            return Err(Error::InvalidInput(format!(
                "density matrix trace {tr} differs from 1"
            )));
        }
        let min = min_eigenvalue_hermitian(&m)?;
        if !(min >= -T::lit(T::TOL.psd)) {
            return Err(Error::InvalidInput(format!(
                "density matrix has negative eigenvalue {min}"
            )));
        }
        Ok(Self { inner: m })
    }

    /// Pure state `|ψ⟩⟨ψ|`; the vector is normalized.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        if psi.is_empty() || norm(psi) == T::zero() {
            return Err(Error::InvalidInput("state vector must be nonzero".into()));
        }
        Ok(Self {
            inner: HermitianMatrix::projector(psi),
        })
    }

    /// Computational basis state `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut d = vec![T::zero(); dim];
        d[index] = T::one();
        Self {
            inner: HermitianMatrix::diag(&d),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            inner: HermitianMatrix::identity(dim).scale(T::one() / T::lit(dim as f64)),
        }
    }

    /// `ρ_a ⊗ ρ_b`.
    pub fn product(a: &Self, b: &Self) -> Self {
        Self {
            inner: kron(&a.inner, &b.inner),
        }
    }

    /// Convex combination `p·self + (1 − p)·other`.
    pub fn mix(&self, other: &Self, p: T) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            inner: self.inner.scale(p).add(&other.inner.scale(T::one() - p)),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix<T> {
        &self.inner
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.inner.matrix()
    }
}
