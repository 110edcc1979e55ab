//! Dense real-symmetric and complex-Hermitian linear algebra.

mod complex;
mod json;
mod real;

pub use complex::{
    eig_hermitian, kron, max_eigenvalue, min_eigenvalue_hermitian, partial_transpose,
    partial_transpose_index, ComplexMatrix, DensityMatrix, HermitianEigen, HermitianMatrix,
};
pub use json::MatrixJson;
pub use real::{
    cholesky_inverse, cholesky_psd, cholesky_solve, lower_triangular_inverse, min_eigenvalue,
    symmetric_eigen, RealMatrix, SymmetricEigen,
};
