//! Separability bounds, θ-based entanglement witnesses, and numerical lower
//! (see-saw) and upper (PPT relaxation) bounds on `Σ ⟨A_i⟩²`.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{anticommutativity_graph, is_perfect, Perfectness};
use crate::numerics::{
    eig_hermitian, kron, partial_transpose_index, DensityMatrix, HermitianMatrix, RealMatrix,
};
use crate::pauli::{expectation, variance, ObservableSet};
use crate::scalar::Real;
use crate::sdp::{
    solve, verify_solution, ResidualReport, SdpOptions, SdpProblem, SdpSolution, SolveStatus,
    SparseBlockMatrix,
};
use crate::theta::lovasz_theta_with;

/// Default cap on the total Hilbert-space dimension of the PPT relaxation.
pub const DEFAULT_PPT_CAP: usize = 64;
/// Largest dimension accepted by the see-saw.
pub const SEESAW_DIM_CAP: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

/// Solver settings for θ values that enter witnesses: `θ_AB` and the
/// detection threshold are reported to 1e-9, below the default gap target.
pub const WITNESS_SDP_OPTIONS: SdpOptions = SdpOptions {
    gap_tol: 1e-11,
    feas_tol: 1e-11,
    max_iter: 100,
    step_fraction: 0.98,
    verbose: false,
};

fn certified_theta<T: Real>(set: &ObservableSet<T>) -> Result<(T, Perfectness)> {
    let gbar = anticommutativity_graph(set)?;
    let cert = lovasz_theta_with(&gbar, set.weights(), &WITNESS_SDP_OPTIONS)?;
    Ok((cert.value, is_perfect(&gbar.complement())))
}

fn check_pair<T: Real>(a: &ObservableSet<T>, b: &ObservableSet<T>) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if let Some(index) = a
        .first_non_dichotomic()
        .or_else(|| b.first_non_dichotomic())
    {
        return Err(Error::NotDichotomic { index });
    }
    Ok(())
}

/// `√(θ(Ḡ_A)·θ(Ḡ_B))`, the maximum of `Σ ⟨A_i ⊗ B_i⟩` over separable states.
pub fn separability_bound<T: Real>(
    set_a: &ObservableSet<T>,
    set_b: &ObservableSet<T>,
) -> Result<T> {
    check_pair(set_a, set_b)?;
    let (ta, _) = certified_theta(set_a)?;
    let (tb, _) = certified_theta(set_b)?;
    Ok((ta * tb).sqrt())
}

/// `Σ_i A_i ⊗ B_i`.
pub fn correlation_operator<T: Real>(
    set_a: &ObservableSet<T>,
    set_b: &ObservableSet<T>,
) -> Result<HermitianMatrix<T>> {
    if set_a.len() != set_b.len() {
        return Err(Error::LengthMismatch {
            left: set_a.len(),
            right: set_b.len(),
        });
    }
    let (ma, mb) = (set_a.matrices()?, set_b.matrices()?);
    let mut s = HermitianMatrix::zeros(set_a.dim() * set_b.dim());
    for (a, b) in ma.iter().zip(&mb) {
        s = s.add(&kron(a, b));
    }
    Ok(s)
}

/// Linear witness `W = θ_AB·𝟙 − Σ A_i ⊗ B_i` with its evaluations.
#[derive(Clone, Debug)]
pub struct WitnessReport<T> {
    pub witness: HermitianMatrix<T>,
    pub theta_a: T,
    pub theta_b: T,
    pub theta_ab: T,
    pub dim_a: usize,
    pub dim_b: usize,
    pub labels_a: Vec<String>,
    pub labels_b: Vec<String>,
    /// Some separable state attains `tr(Wρ) = 0` when both θ bounds are tight.
    pub weakly_optimal_hint: TriState,
    pub evaluations: Vec<(String, T)>,
}

impl<T: Real> WitnessReport<T> {
    pub fn dim(&self) -> usize {
        self.witness.dim()
    }

    /// `tr(W ρ)`.
    pub fn value(&self, rho: &DensityMatrix<T>) -> Result<T> {
        expectation(&self.witness, rho)
    }

    /// Evaluates and records `tr(W ρ)` under `label`.
    pub fn evaluate(&mut self, label: impl Into<String>, rho: &DensityMatrix<T>) -> Result<T> {
        let v = self.value(rho)?;
        self.evaluations.push((label.into(), v));
        Ok(v)
    }
}

pub fn build_witness<T: Real>(
    set_a: &ObservableSet<T>,
    set_b: &ObservableSet<T>,
) -> Result<WitnessReport<T>> {
    check_pair(set_a, set_b)?;
    let (theta_a, perf_a) = certified_theta(set_a)?;
    let (theta_b, perf_b) = certified_theta(set_b)?;
    let theta_ab = (theta_a * theta_b).sqrt();
    let s = correlation_operator(set_a, set_b)?;
    let witness = HermitianMatrix::identity(s.dim()).scale(theta_ab).sub(&s);
    let weakly_optimal_hint = match (&perf_a, &perf_b) {
        (Perfectness::Perfect, Perfectness::Perfect) => TriState::Yes,
        (Perfectness::Imperfect { .. }, _) | (_, Perfectness::Imperfect { .. }) => TriState::No,
        _ => TriState::Unknown,
    };
    Ok(WitnessReport {
        witness,
        theta_a,
        theta_b,
        theta_ab,
        dim_a: set_a.dim(),
        dim_b: set_b.dim(),
        labels_a: set_a.labels(),
        labels_b: set_b.labels(),
        weakly_optimal_hint,
        evaluations: Vec::new(),
    })
}

/// White-noise robustness of a detection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Threshold {
    /// `ν ρ + (1 − ν) 𝟙/d` is detected for every `ν` above this value.
    Above(f64),
    /// Not detected for any `ν ∈ [0, 1]`.
    Never,
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Threshold::Above(v) => s.serialize_f64(*v),
            Threshold::Never => s.serialize_str("never"),
        }
    }
}

/// Smallest `ν` with `tr(W (ν ρ + (1 − ν) 𝟙/d)) < 0` for all larger `ν`,
/// in closed form since the trace is affine in `ν`.
pub fn detection_threshold<T: Real>(
    w: &WitnessReport<T>,
    rho: &DensityMatrix<T>,
) -> Result<Threshold> {
    let d = w.dim();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.dim(),
        });
    }
    let t0 = w.witness.trace().to_f64_lossy() / d as f64;
    let tr = w.value(rho)?.to_f64_lossy();
    Ok(if t0 < 0.0 {
        Threshold::Above(0.0)
    } else if tr >= 0.0 {
        Threshold::Never
    } else {
        Threshold::Above(t0 / (t0 - tr))
    })
}

/// Signed two-qubit Pauli lists for the ququart example; the first set uses
/// the upper signs, the second the lower ones. Entries without `±` carry `+`.
const QUQUART_TERMS: [(&str, bool); 15] = [
    ("1X", true),
    ("1Y", false),
    ("1Z", true),
    ("X1", true),
    ("XX", false),
    ("XY", true),
    ("XZ", true),
    ("Y1", false),
    ("YX", false),
    ("YY", false),
    ("YZ", true),
    ("Z1", false),
    ("ZX", true),
    ("ZY", true),
    ("ZZ", true),
];

/// The pair of two-ququart observable sets sharing one anticommutativity graph.
pub fn ququart_sets<T: Real>() -> Result<(ObservableSet<T>, ObservableSet<T>)> {
    let a: Vec<String> = QUQUART_TERMS.iter().map(|(p, _)| format!("+{p}")).collect();
    let b: Vec<String> = QUQUART_TERMS
        .iter()
        .map(|(p, pm)| {
            if *pm {
                format!("-{p}")
            } else {
                format!("+{p}")
            }
        })
        .collect();
    let a: Vec<&str> = a.iter().map(String::as_str).collect();
    let b: Vec<&str> = b.iter().map(String::as_str).collect();
    Ok((
        ObservableSet::from_pauli_strs(&a)?,
        ObservableSet::from_pauli_strs(&b)?,
    ))
}

/// Two-ququart PPT entangled state: uniform mixture of the projectors onto
/// `½ (𝟙 ⊗ 𝟙 ⊗ A ⊗ B) Σ_i |i⟩|i⟩` for
/// `AB ∈ {𝟙Y, XX, YZ, ZX, ZY, ZZ}`.
///
/// Qubits are ordered `(A′, A″, B′, B″)`, most significant first: the first
/// ququart is party A and `|i⟩ = |i₁ i₂⟩` with `i = 2 i₁ + i₂`. Each local
/// Pauli pair therefore acts on the second ququart.
pub fn benatti_state<T: Real>() -> DensityMatrix<T> {
    use crate::pauli::PauliString;
    let pairs = ["1Y", "XX", "YZ", "ZX", "ZY", "ZZ"];
    let half = T::lit(0.5);
    let mut omega = vec![Complex::new(T::zero(), T::zero()); 16];
    for i in 0..4 {
        omega[5 * i] = Complex::new(half, T::zero());
    }
    let mut rho = HermitianMatrix::zeros(16);
    for p in pairs {
        let local: PauliString = format!("11{p}").parse().expect("fixed label");
        let op = local.to_matrix::<T>().expect("four qubits");
        let psi = matvec(&op, &omega);
        rho = rho.add(&HermitianMatrix::projector(&psi));
    }
    DensityMatrix::new(rho.scale(T::one() / T::lit(6.0))).expect("valid by construction")
}

fn matvec<T: Real>(m: &HermitianMatrix<T>, v: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = m.dim();
    (0..n)
        .map(|i| {
            (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
                acc + m.get(i, j) * v[j]
            })
        })
        .collect()
}

fn normalize<T: Real>(v: &mut [Complex<T>]) {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
    v.iter_mut().for_each(|c| *c = *c / norm);
}

fn haar_vector<T: Real>(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex<T>> {
    let mut v: Vec<Complex<T>> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect();
    normalize(&mut v);
    v
}

/// Top eigenvector of `e`, starting from `start` for large dimensions.
fn top_eigenvector<T: Real>(
    e: &HermitianMatrix<T>,
    start: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    if e.dim() <= 64 {
        let eig = eig_hermitian(e)?;
        return Ok(eig.vectors.last().expect("nonempty").clone());
    }
    // Shifted power iteration; the Rayleigh quotient never decreases.
    let shift = e.frobenius_norm();
    let mut v = start.to_vec();
    for _ in 0..500 {
        let mut w = matvec(e, &v);
        w.iter_mut().zip(&v).for_each(|(a, b)| *a = *a + *b * shift);
        normalize(&mut w);
        let delta: T = w.iter().zip(&v).map(|(a, b)| (*a - *b).norm_sqr()).sum();
        v = w;
        if delta < T::lit(1e-24) {
            break;
        }
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Worker threads for independent restarts.
    pub jobs: usize,
    pub max_iter: usize,
    /// Stop once one sweep improves the objective by less than this.
    pub stall: f64,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 0,
            jobs: 1,
            max_iter: 1000,
            stall: 1e-10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeesawResult<T> {
    pub value: T,
    pub state: Vec<Complex<T>>,
    /// Objective after every iteration of the best restart.
    pub trace: Vec<T>,
    /// Index of the restart that produced `value`.
    pub best_restart: usize,
}

impl<T: Real> SeesawResult<T> {
    pub fn density_matrix(&self) -> DensityMatrix<T> {
        DensityMatrix::pure(&self.state).expect("unit vector")
    }
}

fn run_seesaw<T: Real>(
    mats: &[HermitianMatrix<T>],
    dim: usize,
    restart: usize,
    opts: &SeesawOptions,
) -> Result<SeesawResult<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart as u64);
    let mut psi = haar_vector::<T>(dim, &mut rng);
    let objective = |psi: &[Complex<T>]| -> (T, Vec<T>) {
        let a: Vec<T> = mats.iter().map(|m| m.quadratic_form(psi)).collect();
        (a.iter().map(|&x| x * x).sum(), a)
    };
    let (mut value, mut a) = objective(&psi);
    let mut trace = vec![value];
    for _ in 0..opts.max_iter {
        let mut e = HermitianMatrix::zeros(dim);
        for (m, &ai) in mats.iter().zip(&a) {
            e = e.add(&m.scale(ai));
        }
        let next = top_eigenvector(&e, &psi)?;
        let (next_value, next_a) = objective(&next);
        let slack = T::lit(1e-9) * T::one().max(value);
        assert!(
            next_value >= value - slack,
            "see-saw decreased: {value} -> {next_value}"
        );
        let improved = next_value - value;
        if next_value >= value {
            psi = next;
            value = next_value;
            a = next_a;
        }
        trace.push(value);
        if improved < T::lit(opts.stall) {
            break;
        }
    }
    Ok(SeesawResult {
        value,
        state: psi,
        trace,
        best_restart: restart,
    })
}

/// Lower bound on `max_ρ Σ ⟨A_i⟩²` by alternating optimization over pure
/// states: `a_i = ⟨A_i⟩`, `E = Σ a_i A_i`, state ← top eigenvector of `E`.
///
/// Restart `r` draws its Haar-random start from a ChaCha8 stream `r` seeded
/// by `opts.seed`, so results do not depend on `opts.jobs`. The reduction
/// keeps the largest value, ties going to the lowest restart index.
pub fn seesaw_max<T: Real>(
    set: &ObservableSet<T>,
    opts: &SeesawOptions,
) -> Result<SeesawResult<T>> {
    let dim = set.dim();
    if dim > SEESAW_DIM_CAP {
        return Err(Error::SizeCapExceeded {
            what: "see-saw dimension",
            size: dim,
            cap: SEESAW_DIM_CAP,
        });
    }
    let restarts = opts.restarts.max(1);
    let mats = set.matrices()?;
    let jobs = opts.jobs.clamp(1, restarts);
    let results: Vec<Result<SeesawResult<T>>> = if jobs == 1 {
        (0..restarts)
            .map(|r| run_seesaw(&mats, dim, r, opts))
            .collect()
    } else {
        let mut slots: Vec<Option<Result<SeesawResult<T>>>> = (0..restarts).map(|_| None).collect();
        std::thread::scope(|s| {
            for (worker, chunk) in slots.chunks_mut(restarts.div_ceil(jobs)).enumerate() {
                let mats = &mats;
                let base = worker * restarts.div_ceil(jobs);
                s.spawn(move || {
                    for (k, slot) in chunk.iter_mut().enumerate() {
                        *slot = Some(run_seesaw(mats, dim, base + k, opts));
                    }
                });
            }
        });
        slots
            .into_iter()
            .map(|s| s.expect("every restart ran"))
            .collect()
    };
    let mut best: Option<SeesawResult<T>> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Lower bound on `max Σ ⟨A_i⟩_α ⟨A_i⟩_β` over product pure states by
/// alternating between the two factors.
pub fn product_seesaw_max<T: Real>(set: &ObservableSet<T>, opts: &SeesawOptions) -> Result<T> {
    let dim = set.dim();
    let mats = set.matrices()?;
    let mut best = T::neg_infinity();
    for restart in 0..opts.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(restart as u64);
        let mut alpha = haar_vector::<T>(dim, &mut rng);
        let mut beta = haar_vector::<T>(dim, &mut rng);
        let value = |x: &[Complex<T>], y: &[Complex<T>]| -> T {
            mats.iter()
                .map(|m| m.quadratic_form(x) * m.quadratic_form(y))
                .sum()
        };
        let mut current = value(&alpha, &beta);
        for _ in 0..opts.max_iter {
            for side in 0..2 {
                let other = if side == 0 { &beta } else { &alpha };
                let mut e = HermitianMatrix::zeros(dim);
                for m in &mats {
                    e = e.add(&m.scale(m.quadratic_form(other)));
                }
                let start = if side == 0 {
                    alpha.clone()
                } else {
                    beta.clone()
                };
                let v = top_eigenvector(&e, &start)?;
                if side == 0 {
                    alpha = v;
                } else {
                    beta = v;
                }
            }
            let next = value(&alpha, &beta);
            let done = next - current < T::lit(opts.stall);
            current = current.max(next);
            if done {
                break;
            }
        }
        best = best.max(current);
    }
    Ok(best)
}

/// PPT relaxation of `max tr(S ρ)` with `S = Σ A_i ⊗ A_i`.
#[derive(Clone, Debug)]
pub struct PptResult<T> {
    /// Certified upper bound (dual objective).
    pub upper_bound: T,
    pub primal_value: T,
    /// Whether the real-symmetric formulation was exact (`S` real).
    pub real_formulation: bool,
    pub solution: SdpSolution<T>,
    pub residual_report: ResidualReport,
}

pub fn ppt_product_max<T: Real>(set: &ObservableSet<T>) -> Result<PptResult<T>> {
    ppt_product_max_with(set, DEFAULT_PPT_CAP, &SdpOptions::default())
}

/// Solves `max tr(S ρ)` s.t. `tr ρ = 1`, `ρ ⪰ 0`, `ρ^Γ ⪰ 0`, with `ρ^Γ`
/// carried as a second block tied to `ρ` by equality constraints.
///
/// When `S` is real (always for Pauli strings) the optimum is attained at a
/// real `ρ` (average any optimum with its complex conjugate), so the blocks
/// are real symmetric `D × D`. Otherwise both blocks use the `2D × 2D` real
/// embedding with trace 2, objective `½⟨embed(S), X⟩`, and partial-transpose
/// links imposed on the structured (real and imaginary) components only.
pub fn ppt_product_max_with<T: Real>(
    set: &ObservableSet<T>,
    cap: usize,
    opts: &SdpOptions,
) -> Result<PptResult<T>> {
    let d = set.dim();
    let total = d * d;
    if total > cap {
        return Err(Error::SizeCapExceeded {
            what: "PPT relaxation dimension",
            size: total,
            cap,
        });
    }
    let mats = set.matrices()?;
    let mut s = HermitianMatrix::zeros(total);
    for a in &mats {
        s = s.add(&kron(a, a));
    }
    let real_formulation = s.is_real();
    let p = if real_formulation {
        ppt_problem_real(&s.real_part(), d)
    } else {
        ppt_problem_complex(&s, d)
    };
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
    Ok(PptResult {
        upper_bound: solution.dual_value,
        primal_value: solution.primal_value,
        real_formulation,
        solution,
        residual_report,
    })
}

fn ppt_problem_real<T: Real>(s: &RealMatrix<T>, d: usize) -> SdpProblem<T> {
    let n = d * d;
    let mut p = SdpProblem::new(vec![n, n]);
    p.objective[0] = s.clone();
    let mut trace = SparseBlockMatrix::new();
    for i in 0..n {
        trace.add_sym(0, i, i, T::one());
    }
    p.add_constraint(trace, T::one());
    for i in 0..n {
        for j in i..n {
            let (k, l) = partial_transpose_index(i, j, d);
            let mut link = SparseBlockMatrix::new();
            link.add_sym(1, i, j, T::one());
            link.add_sym(0, k, l, -T::one());
            p.add_constraint(link, T::zero());
        }
    }
    p
}

fn ppt_problem_complex<T: Real>(s: &HermitianMatrix<T>, d: usize) -> SdpProblem<T> {
    let n = d * d;
    let mut p = SdpProblem::new(vec![2 * n, 2 * n]);
    p.objective[0] = s.real_embedding().scaled(T::lit(0.5));
    let mut trace = SparseBlockMatrix::new();
    for i in 0..2 * n {
        trace.add_sym(0, i, i, T::one());
    }
    p.add_constraint(trace, T::lit(2.0));
    let half = T::lit(0.5);
    for i in 0..n {
        for j in i..n {
            let (k, l) = partial_transpose_index(i, j, d);
            // Real part: ½(X_ij + X_{n+i,n+j}).
            let mut re = SparseBlockMatrix::new();
            re.add_sym(1, i, j, half).add_sym(1, n + i, n + j, half);
            re.add_sym(0, k, l, -half).add_sym(0, n + k, n + l, -half);
            p.add_constraint(re, T::zero());
            if i != j {
                // Imaginary part: ½(X_{n+i,j} − X_{i,n+j}).
                let mut im = SparseBlockMatrix::new();
                im.add_sym(1, n + i, j, half).add_sym(1, i, n + j, -half);
                im.add_sym(0, n + k, l, -half).add_sym(0, k, n + l, half);
                p.add_constraint(im, T::zero());
            }
        }
    }
    p
}

/// `½[θ_A + θ_B] − Σ⟨A_i ⊗ B_i⟩ − ½ Σ⟨A_i ⊗ 𝟙 − 𝟙 ⊗ B_i⟩²`; nonnegative on
/// separable states.
pub fn nonlinear_witness_value<T: Real>(
    set_a: &ObservableSet<T>,
    set_b: &ObservableSet<T>,
    rho: &DensityMatrix<T>,
) -> Result<T> {
    check_pair(set_a, set_b)?;
    let d = set_a.dim() * set_b.dim();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.dim(),
        });
    }
    let (ta, _) = certified_theta(set_a)?;
    let (tb, _) = certified_theta(set_b)?;
    let id_a = HermitianMatrix::identity(set_a.dim());
    let id_b = HermitianMatrix::identity(set_b.dim());
    let mut corr = T::zero();
    let mut sq = T::zero();
    for (a, b) in set_a.matrices()?.iter().zip(&set_b.matrices()?) {
        corr = corr + expectation(&kron(a, b), rho)?;
        let diff = expectation(&kron(a, &id_b).sub(&kron(&id_a, b)), rho)?;
        sq = sq + diff * diff;
    }
    let half = T::lit(0.5);
    Ok(half * (ta + tb) - corr - half * sq)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalUrResult {
    /// `Σ Δ²(A_i ⊗ 𝟙 + 𝟙 ⊗ B_i)`.
    pub lhs: f64,
    /// `(n − θ_A) + (n − θ_B)`.
    pub rhs: f64,
    pub violated: bool,
}

/// Local uncertainty relation test; a violation certifies entanglement.
pub fn local_ur_criterion<T: Real>(
    set_a: &ObservableSet<T>,
    set_b: &ObservableSet<T>,
    rho: &DensityMatrix<T>,
) -> Result<LocalUrResult> {
    check_pair(set_a, set_b)?;
    let d = set_a.dim() * set_b.dim();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.dim(),
        });
    }
    let (ta, _) = certified_theta(set_a)?;
    let (tb, _) = certified_theta(set_b)?;
    let id_a = HermitianMatrix::identity(set_a.dim());
    let id_b = HermitianMatrix::identity(set_b.dim());
    let mut lhs = 0.0;
    for (a, b) in set_a.matrices()?.iter().zip(&set_b.matrices()?) {
        let m = kron(a, &id_b).add(&kron(&id_a, b));
        lhs += variance(&m, rho)?.to_f64_lossy();
    }
    let n = set_a.len() as f64;
    let rhs = (n - ta.to_f64_lossy()) + (n - tb.to_f64_lossy());
    Ok(LocalUrResult {
        lhs,
        rhs,
        violated: lhs < rhs - 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{min_eigenvalue_hermitian, partial_transpose};

    type C = Complex<f64>;

    fn set(items: &[&str]) -> ObservableSet<f64> {
        ObservableSet::from_pauli_strs(items).unwrap()
    }

    fn pentagon() -> ObservableSet<f64> {
        set(&["X11", "1X1", "Z1X", "ZZ1", "1ZZ"])
    }

    fn singlet() -> DensityMatrix<f64> {
        let s = 0.5f64.sqrt();
        DensityMatrix::pure(&[
            C::new(0.0, 0.0),
            C::new(s, 0.0),
            C::new(-s, 0.0),
            C::new(0.0, 0.0),
        ])
        .unwrap()
    }

    fn random_pure(dim: usize, rng: &mut ChaCha8Rng) -> DensityMatrix<f64> {
        DensityMatrix::pure(&haar_vector::<f64>(dim, rng)).unwrap()
    }

    #[test]
    fn separability_bounds() {
        assert!(
            (separability_bound(&set(&["X", "Y", "Z"]), &set(&["X", "Y", "Z"])).unwrap() - 1.0)
                .abs()
                < 1e-7
        );
        assert!((separability_bound(&pentagon(), &pentagon()).unwrap() - 5f64.sqrt()).abs() < 1e-6);
        let (a, b) = ququart_sets::<f64>().unwrap();
        assert!((separability_bound(&a, &b).unwrap() - 3.0).abs() < 1e-7);
        assert_eq!(
            separability_bound(&set(&["X"]), &set(&["X", "Y"])).unwrap_err(),
            Error::LengthMismatch { left: 1, right: 2 }
        );
    }

    #[test]
    fn ququart_sets_share_graph() {
        let (a, b) = ququart_sets::<f64>().unwrap();
        assert_eq!(a.len(), 15);
        let (ga, gb) = (
            anticommutativity_graph(&a).unwrap(),
            anticommutativity_graph(&b).unwrap(),
        );
        assert_eq!(ga, gb);
        assert_eq!(crate::graph::clique_number(&ga.complement()).unwrap(), 3);
    }

    #[test]
    fn zz_witness() {
        let mut w = build_witness(&set(&["Z"]), &set(&["Z"])).unwrap();
        assert!(
            w.evaluate("|00>", &DensityMatrix::basis(4, 0))
                .unwrap()
                .abs()
                < 1e-12
        );
        assert_eq!(w.weakly_optimal_hint, TriState::Yes);
        assert_eq!(
            detection_threshold(&w, &DensityMatrix::basis(4, 1)).unwrap(),
            Threshold::Never
        );
        assert_eq!(
            detection_threshold(&w, &DensityMatrix::maximally_mixed(4)).unwrap(),
            Threshold::Never
        );
    }

    #[test]
    fn benatti_state_properties() {
        let rho = benatti_state::<f64>();
        assert!((rho.as_hermitian().trace() - 1.0).abs() < 1e-12);
        let pt = partial_transpose(rho.as_hermitian(), 4, 4).unwrap();
        assert!(min_eigenvalue_hermitian(&pt).unwrap() >= -1e-9);
        let (a, b) = ququart_sets::<f64>().unwrap();
        let s = correlation_operator(&a, &b).unwrap();
        assert!((expectation(&s, &rho).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn ququart_witness_threshold() {
        let (a, b) = ququart_sets::<f64>().unwrap();
        let mut w = build_witness(&a, &b).unwrap();
        assert!((w.theta_ab - 3.0).abs() < 1e-9);
        let rho = benatti_state::<f64>();
        assert!((w.evaluate("rho_I", &rho).unwrap() + 2.0).abs() < 1e-9);
        match detection_threshold(&w, &rho).unwrap() {
            Threshold::Above(nu) => assert!((nu - 0.6).abs() < 1e-9, "{nu}"),
            Threshold::Never => panic!("not detected"),
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = DensityMatrix::product(&random_pure(4, &mut rng), &random_pure(4, &mut rng));
            assert!(w.value(&p).unwrap() >= -1e-9);
        }
    }

    #[test]
    fn seesaw_examples() {
        let opts = SeesawOptions {
            restarts: 8,
            ..Default::default()
        };
        let r = seesaw_max(&set(&["X", "Y", "Z"]), &opts).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
        let r = seesaw_max(&pentagon(), &opts).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8, "{}", r.value);
        assert!(r.trace.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn seesaw_is_deterministic_across_jobs() {
        let serial = seesaw_max(
            &pentagon(),
            &SeesawOptions {
                restarts: 6,
                seed: 9,
                ..Default::default()
            },
        )
        .unwrap();
        let parallel = seesaw_max(
            &pentagon(),
            &SeesawOptions {
                restarts: 6,
                seed: 9,
                jobs: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(serial.value, parallel.value);
        assert_eq!(serial.best_restart, parallel.best_restart);
        assert_eq!(serial.state, parallel.state);
    }

    #[test]
    fn ppt_small_cases() {
        let z = ppt_product_max(&set(&["Z"])).unwrap();
        assert!((z.upper_bound - 1.0).abs() < 1e-6);
        assert!(z.real_formulation);
        let xy = ppt_product_max(&set(&["X", "Y"])).unwrap();
        assert!((xy.upper_bound - 1.0).abs() < 1e-6, "{}", xy.upper_bound);
        assert!(matches!(
            ppt_product_max(&set(&["XYZ1", "ZZZ1", "XXX1", "YYY1"])),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn ppt_complex_path_agrees() {
        // X, Y, Z as dense matrices rotated by a complex phase gate keep
        // S = Σ A⊗A complex-valued.
        let c = C::new(0.0, 0.0);
        let s = 0.5f64.sqrt();
        let a1 = HermitianMatrix::new(
            crate::numerics::ComplexMatrix::from_row_major(
                2,
                vec![c, C::new(s, s), C::new(s, -s), c],
            )
            .unwrap(),
        )
        .unwrap();
        let set_c = ObservableSet::from_matrices(vec![a1]).unwrap();
        let r = ppt_product_max(&set_c).unwrap();
        assert!(!r.real_formulation);
        // max over PPT states of ⟨A ⊗ A⟩ for a single dichotomic A is 1.
        assert!((r.upper_bound - 1.0).abs() < 1e-6, "{}", r.upper_bound);
    }

    #[test]
    fn product_seesaw_matches_seesaw() {
        let opts = SeesawOptions {
            restarts: 6,
            ..Default::default()
        };
        let v = product_seesaw_max(&pentagon(), &opts).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
    }

    #[test]
    fn nonlinear_witness() {
        let xyz = set(&["X", "Y", "Z"]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = DensityMatrix::product(&random_pure(2, &mut rng), &random_pure(2, &mut rng));
            assert!(nonlinear_witness_value(&xyz, &xyz, &p).unwrap() >= -1e-9);
        }
        // On the singlet ⟨X⊗X⟩ = ⟨Y⊗Y⟩ = ⟨Z⊗Z⟩ = −1, so only the sign-flipped
        // partner set makes the correlation term large enough.
        let flipped = nonlinear_witness_value(&xyz, &set(&["X", "-Y", "Z"]), &singlet()).unwrap();
        assert!((flipped - 2.0).abs() < 1e-9);
        let neg = nonlinear_witness_value(&xyz, &set(&["-X", "-Y", "-Z"]), &singlet()).unwrap();
        assert!((neg + 2.0).abs() < 1e-9);
        let mixed =
            nonlinear_witness_value(&xyz, &xyz, &DensityMatrix::maximally_mixed(4)).unwrap();
        assert!((mixed - 1.0).abs() < 1e-9);
    }

    #[test]
    fn local_uncertainty_relations() {
        let xyz = set(&["X", "Y", "Z"]);
        let r = local_ur_criterion(&xyz, &xyz, &singlet()).unwrap();
        assert!(r.lhs.abs() < 1e-12 && (r.rhs - 4.0).abs() < 1e-7 && r.violated);
        let prod = DensityMatrix::product(&DensityMatrix::basis(2, 0), &DensityMatrix::basis(2, 0));
        assert!(!local_ur_criterion(&xyz, &xyz, &prod).unwrap().violated);
        assert!(
            !local_ur_criterion(&xyz, &xyz, &DensityMatrix::maximally_mixed(4))
                .unwrap()
                .violated
        );
    }

    #[test]
    fn threshold_json() {
        assert_eq!(
            serde_json::to_string(&Threshold::Never).unwrap(),
            "\"never\""
        );
        assert_eq!(
            serde_json::to_string(&Threshold::Above(0.6)).unwrap(),
            "0.6"
        );
    }
}
