//! Lovász number of the anticommutativity graph, with certificates.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    anticommutativity_graph, chromatic_number_with, clique_number_with_cap, is_perfect_with_cap,
    Graph, GraphCaps, GraphJson, Perfectness,
};
use crate::numerics::{symmetric_eigen, RealMatrix};
use crate::pauli::ObservableSet;
use crate::scalar::Real;
use crate::sdp::{
    solve, verify_solution, ResidualReport, SdpOptions, SdpProblem, SdpSolution, SolveStatus,
    SparseBlockMatrix,
};

/// Slack used when comparing θ against the integer graph invariants.
pub const SANDWICH_SLACK: f64 = 1e-6;

/// Certified value of θ(Ḡ, w).
#[derive(Clone, Debug)]
pub struct ThetaCertificate<T> {
    pub value: T,
    pub weights: Vec<T>,
    /// The graph θ is evaluated on (Ḡ).
    pub graph: Graph,
    pub solution: SdpSolution<T>,
    pub residual_report: ResidualReport,
}

impl<T: Real> ThetaCertificate<T> {
    pub fn to_json(&self) -> ThetaCertificateJson {
        ThetaCertificateJson {
            value: self.value.to_f64_lossy(),
            weights: self.weights.iter().map(|w| w.to_f64_lossy()).collect(),
            graph: GraphJson::from(&self.graph),
            status: self.solution.status,
            iterations: self.solution.iterations,
            gap: self.solution.gap.to_f64_lossy(),
            residuals: self.residual_report.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaCertificateJson {
    pub value: f64,
    pub weights: Vec<f64>,
    pub graph: GraphJson,
    pub status: SolveStatus,
    pub iterations: usize,
    pub gap: f64,
    pub residuals: ResidualReport,
}

/// Trace-normalized primal SDP for θ(gbar, w):
/// maximize Σ √(w_i w_j) X_ij s.t. tr X = 1, X_ij = 0 on edges, X ⪰ 0.
pub fn theta_problem<T: Real>(gbar: &Graph, weights: &[T]) -> Result<SdpProblem<T>> {
    let n = gbar.n();
    if n == 0 {
        return Err(Error::InvalidInput("θ needs at least one vertex".into()));
    }
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: weights.len(),
        });
    }
    if let Some(w) = weights
        .iter()
        .find(|w| !(**w > T::zero()) || !w.is_finite())
    {
        return Err(Error::InvalidInput(format!(
            "weights must be positive and finite, got {w}"
        )));
    }
    let mut p = SdpProblem::new(vec![n]);
    p.objective[0] = RealMatrix::from_fn(n, |i, j| (weights[i] * weights[j]).sqrt());
    let mut trace = SparseBlockMatrix::new();
    for i in 0..n {
        trace.add_sym(0, i, i, T::one());
    }
    p.add_constraint(trace, T::one());
    for (i, j) in gbar.edges() {
        let mut e = SparseBlockMatrix::new();
        e.add_sym(0, i, j, T::one());
        p.add_constraint(e, T::zero());
    }
    Ok(p)
}

/// θ(gbar, w) with default solver options.
pub fn lovasz_theta<T: Real>(gbar: &Graph, weights: &[T]) -> Result<ThetaCertificate<T>> {
    lovasz_theta_with(gbar, weights, &SdpOptions::default())
}

/// θ(gbar) with unit weights.
pub fn lovasz_theta_unweighted<T: Real>(gbar: &Graph) -> Result<ThetaCertificate<T>> {
    lovasz_theta(gbar, &vec![T::one(); gbar.n()])
}

pub fn lovasz_theta_with<T: Real>(
    gbar: &Graph,
    weights: &[T],
    opts: &SdpOptions,
) -> Result<ThetaCertificate<T>> {
    let p = theta_problem(gbar, weights)?;
    let solution = solve(&p, opts)?;
    if solution.status != SolveStatus::Optimal {
        return Err(Error::NoCertificate {
            status: solution.status,
        });
    }
    let residual_report = verify_solution(&p, &solution);
    if let Some(c) = residual_report.failures().next() {
        return Err(Error::CertificateRejected {
            check: c.name,
            value: c.value,
            tolerance: c.tolerance,
        });
    }
    Ok(ThetaCertificate {
        value: solution.primal_value,
        weights: weights.to_vec(),
        graph: gbar.clone(),
        solution,
        residual_report,
    })
}

/// `λ_max(B)` if `B` is feasible for the eigenvalue form of θ(gbar):
/// `B ⪰ 0`, `B_ii = 1`, `B_ij = 0` on edges of gbar.
pub fn eigen_form_value(gbar: &Graph, b: &RealMatrix<f64>, tol: f64) -> Option<f64> {
    let n = gbar.n();
    if b.dim() != n || !b.is_symmetric(tol) {
        return None;
    }
    if (0..n).any(|i| (b[(i, i)] - 1.0).abs() > tol)
        || gbar.edges().iter().any(|&(i, j)| b[(i, j)].abs() > tol)
    {
        return None;
    }
    let eig = symmetric_eigen(b);
    if eig.values[0] < -tol {
        return None;
    }
    eig.values.last().copied()
}

/// Feasible matrix for the eigenvalue form recovered from an optimal `X`:
/// `B_ij = X_ij / √(X_ii X_jj)`. `None` if some diagonal entry vanishes.
pub fn eigen_form_from_solution(x: &RealMatrix<f64>) -> Option<RealMatrix<f64>> {
    let n = x.dim();
    let d: Vec<f64> = (0..n).map(|i| x[(i, i)]).collect();
    if d.iter().any(|&v| v <= 1e-10) {
        return None;
    }
    Some(RealMatrix::from_fn(n, |i, j| {
        if i == j {
            1.0
        } else {
            x[(i, j)] / (d[i] * d[j]).sqrt()
        }
    }))
}

/// Random feasible point of the eigenvalue form: Gram matrix of unit vectors
/// made orthogonal along the edges of gbar, built vertex by vertex.
pub fn random_eigen_form_point(gbar: &Graph, rng: &mut impl Rng) -> RealMatrix<f64> {
    let n = gbar.n();
    let dim = n.max(1);
    let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        loop {
            let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            // Orthogonalize against earlier neighbours (modified Gram-Schmidt on their span).
            let mut basis: Vec<Vec<f64>> = Vec::new();
            for j in (0..i).filter(|&j| gbar.has_edge(i, j)) {
                let mut u = vecs[j].clone();
                for q in &basis {
                    let c: f64 = u.iter().zip(q).map(|(a, b)| a * b).sum();
                    u.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
                }
                let norm = u.iter().map(|a| a * a).sum::<f64>().sqrt();
                if norm > 1e-12 {
                    basis.push(u.into_iter().map(|a| a / norm).collect());
                }
            }
            for q in &basis {
                let c: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 1e-6 {
                vecs.push(v.into_iter().map(|a| a / norm).collect());
                break;
            }
        }
    }
    RealMatrix::from_fn(n, |i, j| {
        if i == j {
            1.0
        } else {
            vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum()
        }
    })
}

/// Best `λ_max(B)` found by random sampling plus coordinate hill climbing on
/// the eigenvalue form. Always a lower bound on θ(gbar).
pub fn eigen_form_search(gbar: &Graph, samples: usize, rng: &mut impl Rng) -> f64 {
    let mut best = 1.0f64;
    for _ in 0..samples {
        let mut b = random_eigen_form_point(gbar, rng);
        let mut val = eigen_form_value(gbar, &b, 1e-9).unwrap_or(0.0);
        let mut step = 0.2;
        for _ in 0..60 {
            let i = rng.random_range(0..gbar.n());
            let j = rng.random_range(0..gbar.n());
            if i == j || gbar.has_edge(i, j) {
                continue;
            }
            let delta = rng.random_range(-step..step);
            let mut trial = b.clone();
            trial = RealMatrix::from_fn(trial.dim(), |r, c| {
                if (r, c) == (i, j) || (r, c) == (j, i) {
                    trial[(r, c)] + delta
                } else {
                    trial[(r, c)]
                }
            });
            if let Some(v) = eigen_form_value(gbar, &trial, 1e-9) {
                if v > val {
                    val = v;
                    b = trial;
                    continue;
                }
            }
            step *= 0.95;
        }
        best = best.max(val);
    }
    best
}

/// Graph invariants around θ for an observable set.
#[derive(Clone, Debug)]
pub struct SandwichReport<T> {
    /// ω(G); `None` when the clique cap is exceeded.
    pub omega: Option<usize>,
    pub theta: ThetaCertificate<T>,
    /// χ(G); `None` when the coloring cap is exceeded.
    pub chi: Option<usize>,
    pub perfect: Perfectness,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReportJson {
    pub omega: Option<usize>,
    pub theta: f64,
    pub chi: Option<usize>,
    pub perfect: Perfectness,
    /// Invariants that were skipped because of a size cap.
    pub skipped: Vec<&'static str>,
}

impl<T: Real> SandwichReport<T> {
    pub fn to_json(&self) -> SandwichReportJson {
        let mut skipped = Vec::new();
        if self.omega.is_none() {
            skipped.push("omega");
        }
        if self.chi.is_none() {
            skipped.push("chi");
        }
        if self.perfect == Perfectness::Unknown {
            skipped.push("perfect");
        }
        SandwichReportJson {
            omega: self.omega,
            theta: self.theta.value.to_f64_lossy(),
            chi: self.chi,
            perfect: self.perfect.clone(),
            skipped,
        }
    }
}

pub fn sandwich_report<T: Real>(set: &ObservableSet<T>) -> Result<SandwichReport<T>> {
    sandwich_report_with(set, GraphCaps::default(), &SdpOptions::default())
}

/// ω(G), θ(Ḡ, w), χ(G) and the perfectness probe of G, where Ḡ is the
/// anticommutativity graph of `set`. Invariants over a cap come back as
/// `None`/`Unknown` instead of failing the whole report.
pub fn sandwich_report_with<T: Real>(
    set: &ObservableSet<T>,
    caps: GraphCaps,
    opts: &SdpOptions,
) -> Result<SandwichReport<T>> {
    let gbar = anticommutativity_graph(set)?;
    let g = gbar.complement();
    let theta = lovasz_theta_with(&gbar, set.weights(), opts)?;
    let omega = capped(clique_number_with_cap(&g, caps.clique))?;
    let unit = set.weights().iter().all(|&w| w == T::one());
    let theta_f = theta.value.to_f64_lossy();
    // θ(Ḡ) ≤ χ(G) makes ⌈θ − slack⌉ a valid lower bound for the coloring search.
    let lower = unit.then(|| (theta_f - SANDWICH_SLACK).ceil().max(1.0) as usize);
    let chi = capped(chromatic_number_with(&g, caps.chromatic, lower))?;
    let perfect = is_perfect_with_cap(&g, caps.perfectness);
    if unit {
        let om = omega.unwrap_or(0);
        let ch = chi.unwrap_or(usize::MAX);
        if om as f64 > theta_f + SANDWICH_SLACK || theta_f > ch as f64 + SANDWICH_SLACK {
            return Err(Error::SandwichViolated {
                omega: om,
                theta: theta_f,
                chi: ch,
            });
        }
    }
    Ok(SandwichReport {
        omega,
        theta,
        chi,
        perfect,
    })
}

fn capped(r: Result<usize>) -> Result<Option<usize>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::SizeCapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}
