use serde::Serialize;

use super::problem::SdpProblem;
use super::solver::SdpSolution;
use crate::numerics::{min_eigenvalue, RealMatrix};
use crate::scalar::Real;

/// One independently recomputed certificate condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Residuals of a claimed primal-dual pair, recomputed from the problem data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub checks: Vec<Check>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Recomputes `‖A(X) − b‖`, `‖Aᵀy − C − Z‖`, `λ_min(X)`, `λ_min(Z)` and the
/// duality gap without trusting any value stored by the solver.
pub fn verify_solution<T: Real>(p: &SdpProblem<T>, s: &SdpSolution<T>) -> ResidualReport {
    let f = |v: T| v.to_f64_lossy();
    let b = p.rhs();
    let b_norm = f(b.iter().map(|&v| v * v).sum::<T>().sqrt());
    let c_norm = f(p.objective_norm());

    let ax = p.apply(&s.x);
    let primal_res = f(b
        .iter()
        .zip(&ax)
        .map(|(&bk, &a)| (bk - a) * (bk - a))
        .sum::<T>()
        .sqrt());

    let aty = p.adjoint(&s.y);
    let dual_res = f(aty
        .iter()
        .zip(&p.objective)
        .zip(&s.z)
        .map(|((a, c), z)| {
            let r: RealMatrix<T> = a.sub(c).sub(z);
            r.dot(&r)
        })
        .sum::<T>()
        .sqrt());

    let min_eig = |blocks: &[RealMatrix<T>]| {
        blocks
            .iter()
            .map(|m| f(min_eigenvalue(&m.symmetrized())))
            .fold(f64::INFINITY, f64::min)
    };
    let pv = f(p
        .objective
        .iter()
        .zip(&s.x)
        .map(|(c, x)| c.dot(x))
        .sum::<T>());
    let dv = f(b.iter().zip(&s.y).map(|(&bk, &yk)| bk * yk).sum::<T>());
    let gap = (dv - pv).abs();

    let check = |name, value: f64, tolerance: f64| Check {
        name,
        value,
        tolerance,
        passed: value <= tolerance,
    };
    let lmin_x = min_eig(&s.x);
    let lmin_z = min_eig(&s.z);
    let tol = T::TOL;
    ResidualReport {
        checks: vec![
            check(
                "primal_residual",
                primal_res,
                tol.sdp_residual * b_norm.max(1.0),
            ),
            check(
                "dual_residual",
                dual_res,
                tol.sdp_residual * c_norm.max(1.0),
            ),
            check("primal_psd", -lmin_x, tol.sdp_residual),
            check("dual_psd", -lmin_z, tol.sdp_residual),
            check("duality_gap", gap, tol.sdp_gap * pv.abs().max(1.0)),
        ],
    }
}
