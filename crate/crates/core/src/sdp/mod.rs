//! Dense primal-dual interior-point solver for block-diagonal semidefinite
//! programs in standard form:
//!
//! ```text
//! maximize   ⟨C, X⟩
//! subject to ⟨A_k, X⟩ = b_k,  k = 1..m
//!            X ⪰ 0          (block diagonal)
//! ```
//!
//! with dual `minimize bᵀy  s.t.  Σ_k y_k A_k − C = Z ⪰ 0`.

mod problem;
mod solver;
mod verify;

pub use problem::{Constraint, SdpProblem, SdpProblemJson, SparseBlockMatrix};
pub use solver::{solve, SdpOptions, SdpSolution, SolveStatus};
pub use verify::{verify_solution, Check, ResidualReport};
