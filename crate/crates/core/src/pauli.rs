//! Symbolic N-qubit Pauli strings, observable sets and state statistics.
//!
//! A Pauli string is stored in the symplectic representation: qubit `k`
//! carries `X` iff `x_k = 1, z_k = 0`, `Z` iff `x_k = 0, z_k = 1`, `Y` iff both
//! bits are set and the identity otherwise. Global phases are not tracked; the
//! operator for a string is the plain tensor product of `I, X, Y, Z` (phase
//! `+1`). Qubit 0 is the leftmost character and the most significant Kronecker
//! factor.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{max_eigenvalue, ComplexMatrix, DensityMatrix, HermitianMatrix, MatrixJson};
use crate::scalar::Real;

/// Largest qubit count converted to a dense matrix by default.
pub const DEFAULT_QUBIT_CAP: usize = 10;

const WORD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl PauliString {
    /// All-identity string on `n_qubits` qubits.
    pub fn identity(n_qubits: usize) -> Self {
        let words = n_qubits.div_ceil(WORD).max(1);
        Self {
            n_qubits,
            x: vec![0; words],
            z: vec![0; words],
        }
    }

    pub fn from_paulis(ops: &[Pauli]) -> Self {
        let mut p = Self::identity(ops.len());
        for (k, &op) in ops.iter().enumerate() {
            p.set(k, op);
        }
        p
    }

    /// String whose base-4 digits (qubit 0 most significant) encode
    /// `0 = I, 1 = X, 2 = Y, 3 = Z`.
    pub fn from_index(n_qubits: usize, mut index: u64) -> Self {
        let mut ops = vec![Pauli::I; n_qubits];
        for k in (0..n_qubits).rev() {
            ops[k] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][(index % 4) as usize];
            index /= 4;
        }
        Self::from_paulis(&ops)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, k: usize) -> Pauli {
        let (w, b) = (k / WORD, k % WORD);
        Pauli::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    pub fn set(&mut self, k: usize, op: Pauli) {
        let (w, b) = (k / WORD, k % WORD);
        let (xb, zb) = op.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Number of non-identity positions.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    fn y_count(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x & z).count_ones() as usize)
            .sum()
    }

    /// Symplectic inner product mod 2: true iff the strings anticommute.
    pub fn anticommutes(&self, other: &Self) -> Result<bool> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        let parity = self
            .x
            .iter()
            .zip(&self.z)
            .zip(other.x.iter().zip(&other.z))
            .map(|((px, pz), (qx, qz))| ((px & qz) ^ (pz & qx)).count_ones())
            .sum::<u32>();
        Ok(parity % 2 == 1)
    }

    /// Dense `2ⁿ × 2ⁿ` matrix, capped at [`DEFAULT_QUBIT_CAP`] qubits.
    pub fn to_matrix<T: Real>(&self) -> Result<HermitianMatrix<T>> {
        self.to_matrix_with_cap(DEFAULT_QUBIT_CAP)
    }

    pub fn to_matrix_with_cap<T: Real>(&self, cap: usize) -> Result<HermitianMatrix<T>> {
        if self.n_qubits > cap {
            return Err(Error::DimensionCapExceeded {
                qubits: self.n_qubits,
                cap,
            });
        }
        let n = self.n_qubits;
        let dim = 1usize << n;
        // Basis index b has qubit k at bit (n - 1 - k).
        let (mut xmask, mut zmask) = (0usize, 0usize);
        for k in 0..n {
            let (xb, zb) = self.get(k).bits();
            let bit = 1usize << (n - 1 - k);
            if xb {
                xmask |= bit;
            }
            if zb {
                zmask |= bit;
            }
        }
        // P|b⟩ = i^{#Y} (-1)^{|b ∧ z|} |b ⊕ x⟩
        let iy = match self.y_count() % 4 {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), -T::one()),
        };
        let mut m = ComplexMatrix::zeros(dim);
        for b in 0..dim {
            let sign = if (b & zmask).count_ones() % 2 == 1 {
                -T::one()
            } else {
                T::one()
            };
            m[(b ^ xmask, b)] = iy * sign;
        }
        HermitianMatrix::new(m)
    }
}

/// Parses a Pauli string over `{I, 1, X, Y, Z}`, leftmost character = qubit 0.
pub fn parse_pauli(text: &str) -> Result<PauliString> {
    parse_at(text, 0)
}

fn parse_at(text: &str, offset: usize) -> Result<PauliString> {
    let chars: Vec<char> = text.chars().collect();
    if chars.is_empty() {
        return Err(Error::Parse {
            position: offset,
            message: "empty Pauli string".into(),
        });
    }
    let mut ops = Vec::with_capacity(chars.len());
    for (i, c) in chars.iter().enumerate() {
        ops.push(match c {
            'I' | '1' => Pauli::I,
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            other => {
                return Err(Error::Parse {
                    position: offset + i,
                    message: format!("unexpected character {other:?}"),
                })
            }
        });
    }
    Ok(PauliString::from_paulis(&ops))
}

impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_pauli(s)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n_qubits {
            write!(f, "{}", self.get(k).symbol())?;
        }
        Ok(())
    }
}

/// A single observable: a (possibly negated) Pauli string or a dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum Observable<T> {
    Pauli { string: PauliString, negated: bool },
    Matrix(HermitianMatrix<T>),
}

impl<T: Real> Observable<T> {
    pub fn pauli(string: PauliString) -> Self {
        Observable::Pauli {
            string,
            negated: false,
        }
    }

    /// Parses an optionally signed Pauli string such as `"-XZ"` or `"+1Y"`.
    pub fn parse_signed(text: &str) -> Result<Self> {
        let (negated, rest, offset) = match text.chars().next() {
            Some('-') => (true, &text[1..], 1),
            Some('+') => (false, &text[1..], 1),
            _ => (false, text, 0),
        };
        Ok(Observable::Pauli {
            string: parse_at(rest, offset)?,
            negated,
        })
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Observable::Pauli { string, .. } => 1usize.checked_shl(string.n_qubits() as u32),
            Observable::Matrix(m) => Some(m.dim()),
        }
    }

    pub fn as_pauli(&self) -> Option<&PauliString> {
        match self {
            Observable::Pauli { string, .. } => Some(string),
            Observable::Matrix(_) => None,
        }
    }

    pub fn to_matrix(&self) -> Result<HermitianMatrix<T>> {
        match self {
            Observable::Pauli { string, negated } => {
                let m = string.to_matrix()?;
                Ok(if *negated { m.scale(-T::one()) } else { m })
            }
            Observable::Matrix(m) => Ok(m.clone()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Observable::Pauli { string, negated } => {
                format!("{}{}", if *negated { "-" } else { "" }, string)
            }
            Observable::Matrix(m) => format!("M[{}]", m.dim()),
        }
    }
}

/// Whether two observables anticommute.
///
/// Pauli pairs use the symplectic test. Any other pair is tested on dense
/// matrices: `‖{A,B}‖_F ≤ tol · max(1, ‖A‖_F ‖B‖_F)` counts as anticommuting.
pub fn observables_anticommute<T: Real>(a: &Observable<T>, b: &Observable<T>) -> Result<bool> {
    if let (Some(p), Some(q)) = (a.as_pauli(), b.as_pauli()) {
        return p.anticommutes(q);
    }
    let (ma, mb) = (a.to_matrix()?, b.to_matrix()?);
    matrices_anticommute(&ma, &mb)
}

pub fn matrices_anticommute<T: Real>(
    a: &HermitianMatrix<T>,
    b: &HermitianMatrix<T>,
) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let anti = a.anticommutator(b).frobenius_norm();
    let scale = T::one().max(a.frobenius_norm() * b.frobenius_norm());
    Ok(anti <= T::lit(T::TOL.anticommutation) * scale)
}

/// How the weight of an observable was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightPath {
    /// `A² = 1`; weight 1.
    Dichotomic,
    /// Weight `Λ(A²)`.
    GeneralSpectrum,
}

/// Ordered, validated collection of observables sharing one Hilbert space.
///
/// Index order is stable and defines vertex numbering downstream.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSet<T> {
    observables: Vec<Observable<T>>,
    dim: usize,
    weights: Vec<T>,
    paths: Vec<WeightPath>,
}

impl<T: Real> ObservableSet<T> {
    /// Validates and weights the observables; see [`validate_and_weight`].
    pub fn new(observables: Vec<Observable<T>>) -> Result<Self> {
        validate_and_weight(observables)
    }

    pub fn from_pauli_strs(items: &[&str]) -> Result<Self> {
        let obs = items
            .iter()
            .map(|s| Observable::parse_signed(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(obs)
    }

    pub fn from_paulis(items: Vec<PauliString>) -> Result<Self> {
        Self::new(items.into_iter().map(Observable::pauli).collect())
    }

    pub fn from_matrices(items: Vec<HermitianMatrix<T>>) -> Result<Self> {
        Self::new(items.into_iter().map(Observable::Matrix).collect())
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn observables(&self) -> &[Observable<T>] {
        &self.observables
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn paths(&self) -> &[WeightPath] {
        &self.paths
    }

    pub fn is_dichotomic(&self) -> bool {
        self.paths.iter().all(|p| *p == WeightPath::Dichotomic)
    }

    /// First observable that is not dichotomic, if any.
    pub fn first_non_dichotomic(&self) -> Option<usize> {
        self.paths.iter().position(|p| *p != WeightPath::Dichotomic)
    }

    pub fn is_all_pauli(&self) -> bool {
        self.observables.iter().all(|o| o.as_pauli().is_some())
    }

    pub fn labels(&self) -> Vec<String> {
        self.observables.iter().map(Observable::label).collect()
    }

    /// Dense matrices of every observable.
    pub fn matrices(&self) -> Result<Vec<HermitianMatrix<T>>> {
        self.observables.iter().map(Observable::to_matrix).collect()
    }

    /// Sub-set keeping the given indices in order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let obs = indices
            .iter()
            .map(|&i| self.observables[i].clone())
            .collect();
        Self::new(obs)
    }
}

/// Validates a list of observables and assigns weights.
///
/// Weight is 1 when `‖A² − 1‖_F` is within tolerance (always for Pauli
/// strings), otherwise `Λ(A²)`.
pub fn validate_and_weight<T: Real>(observables: Vec<Observable<T>>) -> Result<ObservableSet<T>> {
    let first = observables
        .first()
        .ok_or_else(|| Error::InvalidInput("observable set must be nonempty".into()))?;
    let qubits = first.as_pauli().map(PauliString::n_qubits);
    let dim = first.dim();
    for o in &observables[1..] {
        match (qubits, o.as_pauli()) {
            (Some(nq), Some(p)) if p.n_qubits() != nq => {
                return Err(Error::DimensionMismatch {
                    expected: nq,
                    found: p.n_qubits(),
                })
            }
            _ => {}
        }
        if o.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim.unwrap_or(usize::MAX),
                found: o.dim().unwrap_or(usize::MAX),
            });
        }
    }
    let dim = dim.ok_or(Error::SizeCapExceeded {
        what: "Hilbert-space dimension",
        size: qubits.unwrap_or(0),
        cap: usize::BITS as usize - 1,
    })?;

    let mut weights = Vec::with_capacity(observables.len());
    let mut paths = Vec::with_capacity(observables.len());
    for (index, o) in observables.iter().enumerate() {
        match o {
            Observable::Pauli { .. } => {
                weights.push(T::one());
                paths.push(WeightPath::Dichotomic);
            }
            Observable::Matrix(m) => {
                let sq = m.square();
                let defect = sq.sub(&HermitianMatrix::identity(m.dim())).frobenius_norm();
                if defect <= T::lit(T::TOL.involution) {
                    weights.push(T::one());
                    paths.push(WeightPath::Dichotomic);
                } else {
                    let lambda = max_eigenvalue(&sq)?;
                    if !(lambda > T::lit(T::TOL.zero_observable)) {
                        return Err(Error::ZeroObservable {
                            index,
                            lambda: lambda.to_f64_lossy(),
                        });
                    }
                    weights.push(lambda);
                    paths.push(WeightPath::GeneralSpectrum);
                }
            }
        }
    }
    Ok(ObservableSet {
        observables,
        dim,
        weights,
        paths,
    })
}

/// `Re tr(A ρ)`.
pub fn expectation<T: Real>(a: &HermitianMatrix<T>, rho: &DensityMatrix<T>) -> Result<T> {
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: rho.dim(),
        });
    }
    let v = a.matrix().trace_product(rho.matrix());
    debug_assert!(
        v.im.abs() <= T::lit(T::TOL.expectation_imag) * T::one().max(a.frobenius_norm()),
        "expectation has imaginary part {}",
        v.im
    );
    Ok(v.re)
}

/// `⟨A²⟩ − ⟨A⟩²`.
pub fn variance<T: Real>(a: &HermitianMatrix<T>, rho: &DensityMatrix<T>) -> Result<T> {
    let mean = expectation(a, rho)?;
    let second = expectation(&a.square(), rho)?;
    Ok(second - mean * mean)
}

/// Observable-set JSON: `{"kind": "pauli", "observables": [...]}` or
/// `{"kind": "matrix", "dim": d, "observables": [<matrix>, ...]}`.
///
/// Pauli entries may carry a leading `+` or `-` sign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObservableSetJson {
    Pauli {
        observables: Vec<String>,
    },
    Matrix {
        dim: usize,
        observables: Vec<MatrixJson>,
    },
}

impl ObservableSetJson {
    pub fn to_set<T: Real>(&self) -> Result<ObservableSet<T>> {
        match self {
            ObservableSetJson::Pauli { observables } => {
                let obs = observables
                    .iter()
                    .map(|s| Observable::parse_signed(s))
                    .collect::<Result<Vec<_>>>()?;
                ObservableSet::new(obs)
            }
            ObservableSetJson::Matrix { dim, observables } => {
                let mats = observables
                    .iter()
                    .map(|m| {
                        if m.dim != *dim {
                            return Err(Error::DimensionMismatch {
                                expected: *dim,
                                found: m.dim,
                            });
                        }
                        m.to_hermitian()
                    })
                    .collect::<Result<Vec<_>>>()?;
                ObservableSet::from_matrices(mats)
            }
        }
    }

    pub fn from_set<T: Real>(set: &ObservableSet<T>) -> Self {
        if set.is_all_pauli() {
            ObservableSetJson::Pauli {
                observables: set.labels(),
            }
        } else {
            let observables = set
                .observables()
                .iter()
                .map(|o| o.to_matrix().map(|m| MatrixJson::from_hermitian(&m)))
                .collect::<Result<Vec<_>>>()
                .expect("dense conversion of a validated set");
            ObservableSetJson::Matrix {
                dim: set.dim(),
                observables,
            }
        }
    }
}
