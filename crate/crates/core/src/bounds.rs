//! State-independent bounds derived from θ(Ḡ): expectation squares,
//! variance and entropic uncertainty relations, sector lengths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{anticommutativity_graph, is_perfect, Perfectness};
use crate::numerics::{DensityMatrix, HermitianMatrix};
use crate::pauli::{expectation, variance, ObservableSet};
use crate::scalar::Real;
use crate::theta::{lovasz_theta, ThetaCertificate, ThetaCertificateJson};

/// θ is treated as an integer when it lies within this distance of one.
pub const INTEGER_THETA_TOL: f64 = 1e-6;
/// Slack allowed when testing a concrete state against a bound.
pub const VIOLATION_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    ExpectationSquare,
    VarianceUr,
    EntropicUr,
    SectorLength,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "entropy", content = "q", rename_all = "snake_case")]
pub enum Entropy {
    /// Base-2 Shannon entropy.
    Shannon,
    /// Tsallis entropy with parameter q.
    Tsallis(f64),
}

impl Entropy {
    /// Entropy of the flat two-outcome distribution.
    pub fn flat_value(self) -> f64 {
        match self {
            Entropy::Shannon => 1.0,
            Entropy::Tsallis(q) => (1.0 - 2f64.powf(1.0 - q)) / (q - 1.0),
        }
    }

    /// Entropy of a probability vector.
    pub fn of_distribution(self, p: &[f64]) -> f64 {
        match self {
            Entropy::Shannon => -p
                .iter()
                .filter(|&&x| x > 0.0)
                .map(|&x| x * x.log2())
                .sum::<f64>(),
            Entropy::Tsallis(q) => {
                (1.0 - p.iter().map(|&x| x.max(0.0).powf(q)).sum::<f64>()) / (q - 1.0)
            }
        }
    }

    /// Rejects Tsallis parameters outside the range where the entropic
    /// relation is proven, `(1, 2) ∪ (3, ∞)`.
    fn check_for_relation(self) -> Result<()> {
        match self {
            Entropy::Tsallis(q) if !((q > 1.0 && q < 2.0) || q > 3.0) || !q.is_finite() => {
                Err(Error::InvalidTsallisQ { q })
            }
            _ => Ok(()),
        }
    }

    fn check_defined(self) -> Result<()> {
        match self {
            Entropy::Tsallis(q) if !(q > 0.0) || q == 1.0 || !q.is_finite() => {
                Err(Error::InvalidTsallisQ { q })
            }
            _ => Ok(()),
        }
    }
}

/// Whether the bound is known to be attained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TightHint {
    /// Perfect commutation graph of Pauli strings: ω(G) = θ(Ḡ) is attained.
    Tight,
    /// Commutation graph is imperfect; the bound may be loose.
    PossiblyLoose,
    Unknown,
}

impl TightHint {
    pub fn from_perfectness(p: &Perfectness, all_pauli: bool) -> Self {
        match p {
            Perfectness::Perfect if all_pauli => TightHint::Tight,
            Perfectness::Imperfect { .. } => TightHint::PossiblyLoose,
            _ => TightHint::Unknown,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport<T> {
    pub kind: BoundKind,
    pub value: T,
    /// Number of observables.
    pub n: usize,
    pub theta: Option<ThetaCertificate<T>>,
    pub entropy: Option<Entropy>,
    pub tight_hint: TightHint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReportJson {
    pub kind: BoundKind,
    pub value: f64,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaCertificateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<Entropy>,
    pub tight_hint: TightHint,
}

impl<T: Real> BoundReport<T> {
    pub fn to_json(&self) -> BoundReportJson {
        BoundReportJson {
            kind: self.kind,
            value: self.value.to_f64_lossy(),
            n: self.n,
            theta: self.theta.as_ref().map(ThetaCertificate::to_json),
            entropy: self.entropy,
            tight_hint: self.tight_hint,
        }
    }
}

/// θ(Ḡ, w) together with the tightness hint for a set; shared by all
/// set-based bounds so the SDP is solved once.
#[derive(Clone, Debug)]
pub struct ThetaContext<T> {
    pub certificate: ThetaCertificate<T>,
    pub tight_hint: TightHint,
    pub n: usize,
}

impl<T: Real> ThetaContext<T> {
    pub fn new(set: &ObservableSet<T>) -> Result<Self> {
        let gbar = anticommutativity_graph(set)?;
        let certificate = lovasz_theta(&gbar, set.weights())?;
        let tight_hint =
            TightHint::from_perfectness(&is_perfect(&gbar.complement()), set.is_all_pauli());
        Ok(Self {
            certificate,
            tight_hint,
            n: set.len(),
        })
    }

    pub fn from_certificate(certificate: ThetaCertificate<T>, tight_hint: TightHint) -> Self {
        let n = certificate.graph.n();
        Self {
            certificate,
            tight_hint,
            n,
        }
    }

    pub fn theta(&self) -> T {
        self.certificate.value
    }

    fn report(&self, kind: BoundKind, value: T, entropy: Option<Entropy>) -> BoundReport<T> {
        BoundReport {
            kind,
            value,
            n: self.n,
            theta: Some(self.certificate.clone()),
            entropy,
            tight_hint: self.tight_hint,
        }
    }

    /// `Σ ⟨A_i⟩² ≤ θ(Ḡ, w)`.
    pub fn expectation_bound(&self) -> BoundReport<T> {
        self.report(BoundKind::ExpectationSquare, self.theta(), None)
    }

    /// `Σ Δ²(A_i) ≥ n − θ(Ḡ)`, dichotomic observables only.
    pub fn variance_ur(&self, set: &ObservableSet<T>) -> Result<BoundReport<T>> {
        if let Some(index) = set.first_non_dichotomic() {
            return Err(Error::NotDichotomic { index });
        }
        Ok(self.report(
            BoundKind::VarianceUr,
            T::lit(self.n as f64) - self.theta(),
            None,
        ))
    }

    /// `Σ S(A_i|ρ) ≥ (n − θ)·S₀`, only for integer θ.
    pub fn entropic_ur(&self, set: &ObservableSet<T>, entropy: Entropy) -> Result<BoundReport<T>> {
        entropy.check_for_relation()?;
        if let Some(index) = set.first_non_dichotomic() {
            return Err(Error::NotDichotomic { index });
        }
        let theta = self.theta().to_f64_lossy();
        let s0 = entropy.flat_value();
        let rounded = theta.round();
        if (theta - rounded).abs() > INTEGER_THETA_TOL {
            let advisory = (self.n as f64 - theta.floor()) * s0;
            return Err(Error::NonIntegerTheta { theta, advisory });
        }
        let value = ((self.n as f64 - rounded) * s0).max(0.0);
        Ok(self.report(BoundKind::EntropicUr, T::lit(value), Some(entropy)))
    }
}

pub fn expectation_bound<T: Real>(set: &ObservableSet<T>) -> Result<BoundReport<T>> {
    Ok(ThetaContext::new(set)?.expectation_bound())
}

pub fn variance_ur<T: Real>(set: &ObservableSet<T>) -> Result<BoundReport<T>> {
    if let Some(index) = set.first_non_dichotomic() {
        return Err(Error::NotDichotomic { index });
    }
    ThetaContext::new(set)?.variance_ur(set)
}

pub fn entropic_ur<T: Real>(set: &ObservableSet<T>, entropy: Entropy) -> Result<BoundReport<T>> {
    entropy.check_for_relation()?;
    ThetaContext::new(set)?.entropic_ur(set, entropy)
}

/// Entropy of the two-outcome distribution `p± = (1 ± ⟨a⟩)/2`.
pub fn entropy_of_measurement<T: Real>(
    a: &HermitianMatrix<T>,
    rho: &DensityMatrix<T>,
    entropy: Entropy,
) -> Result<f64> {
    entropy.check_defined()?;
    let defect = a
        .square()
        .sub(&HermitianMatrix::identity(a.dim()))
        .frobenius_norm();
    if defect > T::lit(T::TOL.involution) {
        return Err(Error::NotDichotomic { index: 0 });
    }
    let e = expectation(a, rho)?.to_f64_lossy().clamp(-1.0, 1.0);
    Ok(entropy.of_distribution(&[(1.0 + e) / 2.0, (1.0 - e) / 2.0]))
}

/// Maximum sector length `2^{N−1} + (1 + (−1)^N)/2` over N-qubit states.
pub fn sector_length_max<T: Real>(n_qubits: usize) -> Result<BoundReport<T>> {
    if n_qubits == 0 || n_qubits > 62 {
        return Err(Error::InvalidInput(format!(
            "sector length needs 1 ≤ N ≤ 62, got {n_qubits}"
        )));
    }
    let even = if n_qubits.is_multiple_of(2) { 1u64 } else { 0 };
    let value = (1u64 << (n_qubits - 1)) + even;
    Ok(BoundReport {
        kind: BoundKind::SectorLength,
        value: T::lit(value as f64),
        n: 3usize.saturating_pow(n_qubits as u32),
        theta: None,
        entropy: None,
        tight_hint: TightHint::Unknown,
    })
}

/// Evaluation of a concrete state against the bounds of a set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateCheck {
    pub sum_sq: f64,
    /// `None` unless every observable is dichotomic.
    pub sum_var: Option<f64>,
    /// Shannon entropies; `None` unless every observable is dichotomic.
    pub sum_entropy: Option<f64>,
    /// Human-readable description of every bound exceeded beyond tolerance.
    pub violations: Vec<String>,
}

pub fn check_state<T: Real>(set: &ObservableSet<T>, rho: &DensityMatrix<T>) -> Result<StateCheck> {
    if set.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: rho.dim(),
        });
    }
    check_state_with(&ThetaContext::new(set)?, set, rho)
}

/// [`check_state`] reusing an existing θ certificate.
pub fn check_state_with<T: Real>(
    ctx: &ThetaContext<T>,
    set: &ObservableSet<T>,
    rho: &DensityMatrix<T>,
) -> Result<StateCheck> {
    if set.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: rho.dim(),
        });
    }
    let mats = set.matrices()?;
    let mut sum_sq = 0.0;
    let mut sum_var = 0.0;
    let mut sum_entropy = 0.0;
    let dichotomic = set.is_dichotomic();
    for a in &mats {
        let e = expectation(a, rho)?.to_f64_lossy();
        sum_sq += e * e;
        if dichotomic {
            sum_var += variance(a, rho)?.to_f64_lossy();
            sum_entropy += entropy_of_measurement(a, rho, Entropy::Shannon)?;
        }
    }
    let mut violations = Vec::new();
    let theta = ctx.theta().to_f64_lossy();
    if sum_sq > theta + VIOLATION_TOL {
        violations.push(format!("expectation_square: {sum_sq} > {theta}"));
    }
    if dichotomic {
        let v = ctx.variance_ur(set)?.value.to_f64_lossy();
        if sum_var < v - VIOLATION_TOL {
            violations.push(format!("variance_ur: {sum_var} < {v}"));
        }
        if let Ok(r) = ctx.entropic_ur(set, Entropy::Shannon) {
            let v = r.value.to_f64_lossy();
            if sum_entropy < v - VIOLATION_TOL {
                violations.push(format!("entropic_ur: {sum_entropy} < {v}"));
            }
        }
    }
    Ok(StateCheck {
        sum_sq,
        sum_var: dichotomic.then_some(sum_var),
        sum_entropy: dichotomic.then_some(sum_entropy),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique_number_with_cap, commutation_graph};
    use crate::pauli::{Pauli, PauliString};

    fn set(items: &[&str]) -> ObservableSet<f64> {
        ObservableSet::from_pauli_strs(items).unwrap()
    }

    #[test]
    fn expectation_examples() {
        assert!((expectation_bound(&set(&["X", "Y", "Z"])).unwrap().value - 1.0).abs() < 1e-7);
        let pent = expectation_bound(&set(&["X11", "1X1", "Z1X", "ZZ1", "1ZZ"])).unwrap();
        assert!((pent.value - 5f64.sqrt()).abs() < 1e-6);
        assert_eq!(pent.tight_hint, TightHint::PossiblyLoose);
        let all: Vec<_> = (0..16).map(|i| PauliString::from_index(2, i)).collect();
        let r = expectation_bound(&ObservableSet::<f64>::from_paulis(all).unwrap()).unwrap();
        assert!((r.value - 4.0).abs() < 1e-6);
    }

    #[test]
    fn variance_examples() {
        assert!((variance_ur(&set(&["X", "Y", "Z"])).unwrap().value - 2.0).abs() < 1e-7);
        let pent = variance_ur(&set(&["X11", "1X1", "Z1X", "ZZ1", "1ZZ"])).unwrap();
        assert!((pent.value - (5.0 - 5f64.sqrt())).abs() < 1e-6);
        assert!(variance_ur(&set(&["Z"])).unwrap().value.abs() < 1e-7);
        let m = HermitianMatrix::<f64>::diag(&[2.0, 0.5]);
        assert_eq!(
            variance_ur(&ObservableSet::from_matrices(vec![m]).unwrap()).unwrap_err(),
            Error::NotDichotomic { index: 0 }
        );
    }

    #[test]
    fn entropic_examples() {
        let xyz = set(&["X", "Y", "Z"]);
        let r = entropic_ur(&xyz, Entropy::Shannon).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert_eq!(r.value, variance_ur(&xyz).unwrap().value.round());
        assert_eq!(
            entropic_ur(&set(&["Z"]), Entropy::Shannon).unwrap().value,
            0.0
        );

        let ops = [Pauli::X, Pauli::Y, Pauli::Z];
        let mut items = Vec::new();
        for a in ops {
            for b in ops {
                for c in ops {
                    items.push(PauliString::from_paulis(&[a, b, c]));
                }
            }
        }
        let r = entropic_ur(
            &ObservableSet::<f64>::from_paulis(items).unwrap(),
            Entropy::Shannon,
        )
        .unwrap();
        assert_eq!(r.value, 22.0);
    }

    #[test]
    fn entropic_refusals() {
        match entropic_ur(&set(&["X11", "1X1", "Z1X", "ZZ1", "1ZZ"]), Entropy::Shannon) {
            Err(Error::NonIntegerTheta { theta, advisory }) => {
                assert!((theta - 5f64.sqrt()).abs() < 1e-6);
                assert_eq!(advisory, 3.0);
            }
            other => panic!("{other:?}"),
        }
        for q in [0.5, 1.0, 2.0, 2.5, 3.0] {
            assert_eq!(
                entropic_ur(&set(&["X"]), Entropy::Tsallis(q)).unwrap_err(),
                Error::InvalidTsallisQ { q }
            );
        }
        let r = entropic_ur(&set(&["X", "Y", "Z"]), Entropy::Tsallis(1.5)).unwrap();
        assert!((r.value - 2.0 * (1.0 - 2f64.powf(-0.5)) / 0.5).abs() < 1e-12);
    }

    #[test]
    fn measurement_entropy_examples() {
        let zero = DensityMatrix::<f64>::basis(2, 0);
        let z = PauliString::from_paulis(&[Pauli::Z])
            .to_matrix::<f64>()
            .unwrap();
        let x = PauliString::from_paulis(&[Pauli::X])
            .to_matrix::<f64>()
            .unwrap();
        assert_eq!(
            entropy_of_measurement(&z, &zero, Entropy::Shannon).unwrap(),
            0.0
        );
        assert!((entropy_of_measurement(&x, &zero, Entropy::Shannon).unwrap() - 1.0).abs() < 1e-15);
        let t = entropy_of_measurement(&x, &zero, Entropy::Tsallis(1.5)).unwrap();
        assert!((t - (1.0 - 2f64.powf(-0.5)) / 0.5).abs() < 1e-14);
        assert!(entropy_of_measurement(
            &HermitianMatrix::diag(&[2.0, 1.0]),
            &zero,
            Entropy::Shannon
        )
        .is_err());
    }

    #[test]
    fn sector_lengths() {
        let expected = [1.0, 3.0, 4.0, 9.0, 16.0, 33.0];
        for (k, &e) in expected.iter().enumerate() {
            assert_eq!(sector_length_max::<f64>(k + 1).unwrap().value, e);
        }
        // Clique oracle for N = 2.
        let ops = [Pauli::X, Pauli::Y, Pauli::Z];
        let items: Vec<_> = ops
            .iter()
            .flat_map(|&a| ops.iter().map(move |&b| PauliString::from_paulis(&[a, b])))
            .collect();
        let g = commutation_graph(&ObservableSet::<f64>::from_paulis(items).unwrap()).unwrap();
        assert_eq!(clique_number_with_cap(&g, 64).unwrap(), 3);
        assert!(sector_length_max::<f64>(0).is_err());
    }

    #[test]
    fn pentagon_on_all_zeros() {
        let pent = set(&["X11", "1X1", "Z1X", "ZZ1", "1ZZ"]);
        let c = check_state(&pent, &DensityMatrix::basis(8, 0)).unwrap();
        assert!((c.sum_sq - 2.0).abs() < 1e-12);
        assert!(c.violations.is_empty());
        assert!(check_state(&pent, &DensityMatrix::basis(4, 0)).is_err());
    }

    #[test]
    fn report_json() {
        let r = variance_ur(&set(&["X", "Y", "Z"])).unwrap();
        let j = serde_json::to_value(r.to_json()).unwrap();
        assert_eq!(j["kind"], "variance_ur");
        assert_eq!(j["tight_hint"], "tight");
        let e = serde_json::to_value(Entropy::Tsallis(1.5)).unwrap();
        assert_eq!(e, serde_json::json!({"entropy": "tsallis", "q": 1.5}));
    }
}
