use thiserror::Error;

use crate::sdp::SolveStatus;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: |m[{row}][{col}] - conj(m[{col}][{row}])| = {deviation:e}")]
    NonHermitianInput {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not positive definite: pivot {index} is {pivot:e}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("parse error at index {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{qubits} qubits exceed the dense-matrix cap of {cap}")]
    DimensionCapExceeded { qubits: usize, cap: usize },

    #[error("observable {index} is zero (Λ(A²) = {lambda:e})")]
    ZeroObservable { index: usize, lambda: f64 },

    #[error("size {size} exceeds the cap of {cap} for {what}")]
    SizeCapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("expected {expected} labels, got {found}")]
    LabelCountMismatch { expected: usize, found: usize },

    #[error("observable lists differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("observable {index} is not dichotomic")]
    NotDichotomic { index: usize },

    #[error("Lovász number {theta} is not an integer; conjectural bound would be {advisory}")]
    NonIntegerTheta { theta: f64, advisory: f64 },

    #[error("Tsallis parameter q = {q} is outside (1,2) ∪ (3,∞)")]
    InvalidTsallisQ { q: f64 },

    #[error("Schur complement could not be factorized at iteration {iteration}")]
    IllConditioned { iteration: usize },

    #[error("constraint matrices are linearly dependent (constraint {index})")]
    DependentConstraints { index: usize },

    #[error("solver did not certify the optimum (status {status:?})")]
    NoCertificate { status: SolveStatus },

    #[error("independent residual check `{check}` failed: {value:e} > {tolerance:e}")]
    CertificateRejected {
        check: &'static str,
        value: f64,
        tolerance: f64,
    },

    #[error("sandwich inequality violated: ω = {omega}, θ = {theta}, χ = {chi}")]
    SandwichViolated {
        omega: usize,
        theta: f64,
        chi: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
