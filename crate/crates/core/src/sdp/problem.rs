use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{cholesky_psd, RealMatrix};
use crate::scalar::Real;

/// Symmetric block-diagonal matrix stored as a full list of nonzero entries
/// `(block, row, col, value)`; both `(i, j)` and `(j, i)` are present.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseBlockMatrix<T> {
    entries: Vec<(usize, usize, usize, T)>,
}

impl<T: Real> SparseBlockMatrix<T> {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    /// Adds `v` at `(i, j)` and `(j, i)` of `block` (once on the diagonal).
    pub fn add_sym(&mut self, block: usize, i: usize, j: usize, v: T) -> &mut Self {
        self.entries.push((block, i, j, v));
        if i != j {
            self.entries.push((block, j, i, v));
        }
        self
    }

    pub fn entries(&self) -> &[(usize, usize, usize, T)] {
        &self.entries
    }

    /// `⟨self, X⟩` for a block-diagonal `X` (blocks need not be symmetric).
    pub fn dot(&self, x: &[RealMatrix<T>]) -> T {
        self.entries
            .iter()
            .map(|&(b, i, j, v)| v * x[b][(i, j)])
            .sum()
    }

    /// `out += alpha · self`.
    pub fn add_to(&self, out: &mut [RealMatrix<T>], alpha: T) {
        for &(b, i, j, v) in &self.entries {
            out[b][(i, j)] = out[b][(i, j)] + alpha * v;
        }
    }

    pub fn frobenius_sq(&self, block_dims: &[usize]) -> T {
        let mut dense: Vec<RealMatrix<T>> =
            block_dims.iter().map(|&d| RealMatrix::zeros(d)).collect();
        self.add_to(&mut dense, T::one());
        dense.iter().map(|m| m.dot(m)).sum()
    }

    fn validate(&self, block_dims: &[usize]) -> Result<()> {
        for &(b, i, j, v) in &self.entries {
            let d = *block_dims
                .get(b)
                .ok_or_else(|| Error::InvalidInput(format!("block {b} does not exist")))?;
            if i >= d || j >= d {
                return Err(Error::InvalidInput(format!(
                    "entry ({i}, {j}) outside block {b} of size {d}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidInput("non-finite constraint entry".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T> {
    pub matrix: SparseBlockMatrix<T>,
    pub rhs: T,
}

/// Standard-form SDP (maximization).
#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem<T> {
    pub block_dims: Vec<usize>,
    /// Symmetric objective, one dense matrix per block.
    pub objective: Vec<RealMatrix<T>>,
    pub constraints: Vec<Constraint<T>>,
}

impl<T: Real> SdpProblem<T> {
    pub fn new(block_dims: Vec<usize>) -> Self {
        let objective = block_dims.iter().map(|&d| RealMatrix::zeros(d)).collect();
        Self {
            block_dims,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn add_constraint(&mut self, matrix: SparseBlockMatrix<T>, rhs: T) {
        self.constraints.push(Constraint { matrix, rhs });
    }

    pub fn n_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Total matrix order `Σ dims`.
    pub fn order(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn rhs(&self) -> Vec<T> {
        self.constraints.iter().map(|c| c.rhs).collect()
    }

    /// `A(X)`.
    pub fn apply(&self, x: &[RealMatrix<T>]) -> Vec<T> {
        self.constraints.iter().map(|c| c.matrix.dot(x)).collect()
    }

    /// `Aᵀ y` as dense blocks.
    pub fn adjoint(&self, y: &[T]) -> Vec<RealMatrix<T>> {
        let mut out = self.zero_blocks();
        for (c, &yk) in self.constraints.iter().zip(y) {
            c.matrix.add_to(&mut out, yk);
        }
        out
    }

    pub fn zero_blocks(&self) -> Vec<RealMatrix<T>> {
        self.block_dims
            .iter()
            .map(|&d| RealMatrix::zeros(d))
            .collect()
    }

    pub fn objective_norm(&self) -> T {
        self.objective.iter().map(|m| m.dot(m)).sum::<T>().sqrt()
    }

    /// Shape checks, objective symmetry and linear independence of the
    /// constraint matrices (Gram-matrix Cholesky).
    pub fn validate(&self) -> Result<()> {
        if self.block_dims.is_empty() || self.block_dims.contains(&0) {
            return Err(Error::InvalidInput(
                "block dimensions must be positive".into(),
            ));
        }
        if self.objective.len() != self.block_dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.block_dims.len(),
                found: self.objective.len(),
            });
        }
        for (c, &d) in self.objective.iter().zip(&self.block_dims) {
            if c.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: c.dim(),
                });
            }
            let tol = T::lit(1e-12) * T::one().max(c.max_abs());
            if !c.is_symmetric(tol) {
                return Err(Error::InvalidInput(
                    "objective block is not symmetric".into(),
                ));
            }
        }
        for c in &self.constraints {
            c.matrix.validate(&self.block_dims)?;
        }
        self.check_independence()
    }

    fn check_independence(&self) -> Result<()> {
        let m = self.constraints.len();
        if m == 0 {
            return Ok(());
        }
        let mut scratch = self.zero_blocks();
        let mut gram = RealMatrix::zeros(m);
        for k in 0..m {
            self.constraints[k].matrix.add_to(&mut scratch, T::one());
            for l in k..m {
                let g = self.constraints[l].matrix.dot(&scratch);
                gram[(k, l)] = g;
                gram[(l, k)] = g;
            }
            self.constraints[k].matrix.add_to(&mut scratch, -T::one());
        }
        let scale = (0..m).fold(T::zero(), |a, i| a.max(gram[(i, i)]));
        let tol = T::lit(1e-10) * T::one().max(scale);
        match cholesky_psd(&gram, tol) {
            Ok(_) => Ok(()),
            Err(Error::NotPositiveDefinite { index, .. }) => {
                Err(Error::DependentConstraints { index })
            }
            Err(e) => Err(e),
        }
    }
}

/// JSON mirror of [`SdpProblem`] for offline cross-validation.
///
/// Entries are upper-triangular (`i ≤ j`) with symmetric meaning.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpProblemJson {
    pub sense: String,
    pub block_dims: Vec<usize>,
    /// Per block: `[i, j, value]`.
    pub objective: Vec<Vec<(usize, usize, f64)>>,
    pub constraints: Vec<ConstraintJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub rhs: f64,
    /// `[block, i, j, value]`.
    pub entries: Vec<(usize, usize, usize, f64)>,
}

impl SdpProblemJson {
    pub fn from_problem<T: Real>(p: &SdpProblem<T>) -> Self {
        let objective = p
            .objective
            .iter()
            .map(|c| {
                let mut v = Vec::new();
                for i in 0..c.dim() {
                    for j in i..c.dim() {
                        if c[(i, j)] != T::zero() {
                            v.push((i, j, c[(i, j)].to_f64_lossy()));
                        }
                    }
                }
                v
            })
            .collect();
        let constraints = p
            .constraints
            .iter()
            .map(|c| ConstraintJson {
                rhs: c.rhs.to_f64_lossy(),
                entries: c
                    .matrix
                    .entries()
                    .iter()
                    .filter(|e| e.1 <= e.2)
                    .map(|&(b, i, j, v)| (b, i, j, v.to_f64_lossy()))
                    .collect(),
            })
            .collect();
        Self {
            sense: "maximize".into(),
            block_dims: p.block_dims.clone(),
            objective,
            constraints,
        }
    }

    pub fn to_problem<T: Real>(&self) -> Result<SdpProblem<T>> {
        if self.sense != "maximize" {
            return Err(Error::InvalidInput(format!(
                "unsupported sense {:?}",
                self.sense
            )));
        }
        if self.objective.len() != self.block_dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.block_dims.len(),
                found: self.objective.len(),
            });
        }
        let mut p = SdpProblem::new(self.block_dims.clone());
        for (b, entries) in self.objective.iter().enumerate() {
            let d = self.block_dims[b];
            for &(i, j, v) in entries {
                if i >= d || j >= d {
                    return Err(Error::InvalidInput(format!(
                        "objective entry ({i}, {j}) outside block {b}"
                    )));
                }
                p.objective[b][(i, j)] = T::lit(v);
                p.objective[b][(j, i)] = T::lit(v);
            }
        }
        for c in &self.constraints {
            let mut m = SparseBlockMatrix::new();
            for &(b, i, j, v) in &c.entries {
                m.add_sym(b, i.min(j), i.max(j), T::lit(v));
            }
            p.add_constraint(m, T::lit(c.rhs));
        }
        p.validate()?;
        Ok(p)
    }
}
