use serde::{Deserialize, Serialize};

use super::problem::SdpProblem;
use crate::error::{Error, Result};
use crate::numerics::{
    cholesky_inverse, cholesky_psd, cholesky_solve, lower_triangular_inverse, symmetric_eigen,
    RealMatrix,
};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpOptions {
    /// Relative duality gap target.
    pub gap_tol: f64,
    /// Relative primal/dual infeasibility target.
    pub feas_tol: f64,
    pub max_iter: usize,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
    pub verbose: bool,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-8,
            feas_tol: 1e-9,
            max_iter: 100,
            step_fraction: 0.98,
            verbose: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    MaxIter,
    InfeasibleDetected,
}

/// Final iterate with its primal-dual certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpSolution<T> {
    pub x: Vec<RealMatrix<T>>,
    pub y: Vec<T>,
    pub z: Vec<RealMatrix<T>>,
    pub primal_value: T,
    pub dual_value: T,
    /// `dual_value − primal_value`.
    pub gap: T,
    pub status: SolveStatus,
    pub iterations: usize,
}

impl<T: Real> SdpSolution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

fn blocks_dot<T: Real>(a: &[RealMatrix<T>], b: &[RealMatrix<T>]) -> T {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn blocks_norm<T: Real>(a: &[RealMatrix<T>]) -> T {
    blocks_dot(a, a).sqrt()
}

fn vec_norm<T: Real>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

// Largest α with M + α·D ⪰ 0 given the Cholesky inverse factor of M.
fn max_step<T: Real>(l_inv: &RealMatrix<T>, d: &RealMatrix<T>) -> T {
    let w = l_inv.matmul(d).matmul(&l_inv.transpose());
    let lambda_min = symmetric_eigen(&w.symmetrized()).values[0];
    if lambda_min >= T::zero() {
        T::infinity()
    } else {
        -T::one() / lambda_min
    }
}

struct Direction<T> {
    dx: Vec<RealMatrix<T>>,
    dy: Vec<T>,
    dz: Vec<RealMatrix<T>>,
}

/// Primal-dual path-following interior-point method.
///
/// Uses the HKM search direction (`dX = sym(μZ⁻¹ − X − X dZ Z⁻¹)`) with a
/// Mehrotra predictor-corrector, an infeasible start at `X = Z = τ·I` with
/// `τ = max(1, ‖C‖_F, max|b_k|)` and separate primal and dual step lengths.
/// Iterates are deterministic: no randomness enters the method.
pub fn solve<T: Real>(p: &SdpProblem<T>, opts: &SdpOptions) -> Result<SdpSolution<T>> {
    p.validate()?;
    let m = p.n_constraints();
    let nb = p.block_dims.len();
    let order = T::lit(p.order() as f64);
    let b = p.rhs();
    let b_norm = vec_norm(&b);
    let c_norm = p.objective_norm();

    let tau = T::one()
        .max(c_norm)
        .max(b.iter().fold(T::zero(), |a, v| a.max(v.abs())));
    let mut x: Vec<RealMatrix<T>> = p
        .block_dims
        .iter()
        .map(|&d| RealMatrix::identity(d).scaled(tau))
        .collect();
    let mut z = x.clone();
    let mut y = vec![T::zero(); m];

    let touched: Vec<Vec<bool>> = p
        .constraints
        .iter()
        .map(|c| {
            let mut t = vec![false; nb];
            for e in c.matrix.entries() {
                t[e.0] = true;
            }
            t
        })
        .collect();

    let gap_tol = T::lit(opts.gap_tol);
    let feas_tol = T::lit(opts.feas_tol);
    let frac = T::lit(opts.step_fraction);
    let huge = T::lit(1e13) * tau;

    let mut status = SolveStatus::MaxIter;
    let mut iterations = 0;
    let mut stalled = 0;

    for iter in 0..=opts.max_iter {
        iterations = iter;
        let ax = p.apply(&x);
        let rp: Vec<T> = b.iter().zip(&ax).map(|(&bk, &a)| bk - a).collect();
        // Rd = C − Aᵀy + Z
        let aty = p.adjoint(&y);
        let rd: Vec<RealMatrix<T>> = (0..nb)
            .map(|k| p.objective[k].sub(&aty[k]).add(&z[k]))
            .collect();
        let pobj = blocks_dot(&p.objective, &x);
        let dobj: T = b.iter().zip(&y).map(|(&bk, &yk)| bk * yk).sum();
        let xz = blocks_dot(&x, &z);
        let mu = xz / order;
        let pinf = vec_norm(&rp) / (T::one() + b_norm);
        let dinf = blocks_norm(&rd) / (T::one() + c_norm);
        let scale = T::one().max(pobj.abs());
        let gap = dobj - pobj;

        if opts.verbose {
            eprintln!(
                "iter {iter:3}  pobj {:+.10e}  dobj {:+.10e}  gap {:.2e}  pinf {:.2e}  dinf {:.2e}  mu {:.2e}",
                pobj, dobj, gap, pinf, dinf, mu
            );
        }

        if pinf <= feas_tol
            && dinf <= feas_tol
            && gap.abs() <= gap_tol * scale
            && xz <= gap_tol * scale
        {
            status = SolveStatus::Optimal;
            break;
        }
        if blocks_norm(&x) > huge || vec_norm(&y) > huge {
            status = SolveStatus::InfeasibleDetected;
            break;
        }
        if iter == opts.max_iter || stalled >= 3 {
            break;
        }

        // Factorizations.
        let mut x_linv = Vec::with_capacity(nb);
        let mut z_inv = Vec::with_capacity(nb);
        let mut z_linv = Vec::with_capacity(nb);
        for k in 0..nb {
            let lx = cholesky_psd(&x[k], T::zero())
                .map_err(|_| Error::IllConditioned { iteration: iter })?;
            let lz = cholesky_psd(&z[k], T::zero())
                .map_err(|_| Error::IllConditioned { iteration: iter })?;
            x_linv.push(lower_triangular_inverse(&lx));
            z_linv.push(lower_triangular_inverse(&lz));
            z_inv.push(cholesky_inverse(&lz));
        }

        let schur = build_schur(p, &x, &z_inv, &touched);
        let chol = factor_schur(schur).ok_or(Error::IllConditioned { iteration: iter })?;

        // X Rd Z⁻¹, shared by predictor and corrector.
        let x_rd_zinv: Vec<RealMatrix<T>> = (0..nb)
            .map(|k| x[k].matmul(&rd[k]).matmul(&z_inv[k]))
            .collect();

        let solve_dir = |mu_target: T, corr: Option<&[RealMatrix<T>]>| -> Direction<T> {
            // H = μZ⁻¹ − X − corr + X Rd Z⁻¹
            let h: Vec<RealMatrix<T>> = (0..nb)
                .map(|k| {
                    let mut hk = z_inv[k].scaled(mu_target).sub(&x[k]).add(&x_rd_zinv[k]);
                    if let Some(c) = corr {
                        hk = hk.sub(&c[k]);
                    }
                    hk
                })
                .collect();
            let rhs: Vec<T> = p
                .constraints
                .iter()
                .zip(&rp)
                .map(|(c, &r)| c.matrix.dot(&h) - r)
                .collect();
            let dy = cholesky_solve(&chol, &rhs);
            // dZ = Aᵀdy − Rd
            let atdy = p.adjoint(&dy);
            let dz: Vec<RealMatrix<T>> =
                (0..nb).map(|k| atdy[k].sub(&rd[k]).symmetrized()).collect();
            let dx: Vec<RealMatrix<T>> = (0..nb)
                .map(|k| {
                    let mut t = z_inv[k]
                        .scaled(mu_target)
                        .sub(&x[k])
                        .sub(&x[k].matmul(&dz[k]).matmul(&z_inv[k]));
                    if let Some(c) = corr {
                        t = t.sub(&c[k]);
                    }
                    t.symmetrized()
                })
                .collect();
            Direction { dx, dy, dz }
        };

        let steps = |d: &Direction<T>| -> (T, T) {
            let mut ap = T::infinity();
            let mut ad = T::infinity();
            for k in 0..nb {
                ap = ap.min(max_step(&x_linv[k], &d.dx[k]));
                ad = ad.min(max_step(&z_linv[k], &d.dz[k]));
            }
            (T::one().min(frac * ap), T::one().min(frac * ad))
        };

        // Predictor.
        let pred = solve_dir(T::zero(), None);
        let (ap, ad) = steps(&pred);
        let x_aff: Vec<RealMatrix<T>> = (0..nb).map(|k| x[k].axpy(ap, &pred.dx[k])).collect();
        let z_aff: Vec<RealMatrix<T>> = (0..nb).map(|k| z[k].axpy(ad, &pred.dz[k])).collect();
        let mu_aff = blocks_dot(&x_aff, &z_aff) / order;
        let sigma = if mu > T::zero() {
            (mu_aff / mu).powi(3).max(T::zero()).min(T::one())
        } else {
            T::zero()
        };

        // Corrector.
        let corr: Vec<RealMatrix<T>> = (0..nb)
            .map(|k| pred.dx[k].matmul(&pred.dz[k]).matmul(&z_inv[k]))
            .collect();
        let dir = solve_dir(sigma * mu, Some(&corr));
        let (ap, ad) = steps(&dir);

        for k in 0..nb {
            x[k] = x[k].axpy(ap, &dir.dx[k]).symmetrized();
            z[k] = z[k].axpy(ad, &dir.dz[k]).symmetrized();
        }
        for (yk, dyk) in y.iter_mut().zip(&dir.dy) {
            *yk = *yk + ad * *dyk;
        }
        if ap < T::lit(1e-10) && ad < T::lit(1e-10) {
            stalled += 1;
        } else {
            stalled = 0;
        }
    }

    let primal_value = blocks_dot(&p.objective, &x);
    let dual_value: T = b.iter().zip(&y).map(|(&bk, &yk)| bk * yk).sum();
    Ok(SdpSolution {
        x,
        y,
        z,
        primal_value,
        dual_value,
        gap: dual_value - primal_value,
        status,
        iterations,
    })
}

// M_kl = tr(A_k X A_l Z⁻¹), computed row-wise through G_k = Z⁻¹ A_k X.
fn build_schur<T: Real>(
    p: &SdpProblem<T>,
    x: &[RealMatrix<T>],
    z_inv: &[RealMatrix<T>],
    touched: &[Vec<bool>],
) -> RealMatrix<T> {
    let m = p.n_constraints();
    let mut schur = RealMatrix::zeros(m);
    let mut g: Vec<RealMatrix<T>> = p.block_dims.iter().map(|&d| RealMatrix::zeros(d)).collect();
    for k in 0..m {
        for (blk, t) in touched[k].iter().enumerate() {
            if *t {
                g[blk] = RealMatrix::zeros(p.block_dims[blk]);
            }
        }
        for &(blk, a, bb, v) in p.constraints[k].matrix.entries() {
            let n = p.block_dims[blk];
            let gb = &mut g[blk];
            let zi = &z_inv[blk];
            let xr = x[blk].row(bb);
            for d in 0..n {
                let coef = v * zi[(d, a)];
                if coef == T::zero() {
                    continue;
                }
                for c in 0..n {
                    gb[(d, c)] = gb[(d, c)] + coef * xr[c];
                }
            }
        }
        for l in k..m {
            let mut s = T::zero();
            for &(blk, c, d, w) in p.constraints[l].matrix.entries() {
                if touched[k][blk] {
                    s = s + w * g[blk][(d, c)];
                }
            }
            schur[(k, l)] = s;
        }
    }
    for k in 0..m {
        for l in 0..k {
            schur[(k, l)] = schur[(l, k)];
        }
    }
    schur
}

fn factor_schur<T: Real>(mut schur: RealMatrix<T>) -> Option<RealMatrix<T>> {
    let m = schur.dim();
    let max_diag = (0..m).fold(T::zero(), |a, i| a.max(schur[(i, i)].abs()));
    let mut reg = T::zero();
    for attempt in 0..4 {
        if let Ok(l) = cholesky_psd(&schur, T::min_positive_value()) {
            return Some(l);
        }
        let next = T::lit(1e-14) * T::lit(100f64.powi(attempt)) * T::one().max(max_diag);
        for i in 0..m {
            schur[(i, i)] = schur[(i, i)] - reg + next;
        }
        reg = next;
    }
    None
}
