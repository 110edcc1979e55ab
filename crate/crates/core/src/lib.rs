//! Lovász-number bounds on sums of squared expectation values of quantum
//! observables, with uncertainty relations, entanglement witnesses and
//! numerical cross-checks (see-saw lower bounds, PPT-relaxation upper bounds).
//!
//! The numerical core is generic over [`Real`] (`f64` and `f32`); the aliases
//! below fix the scalar to `f64`, which every certified tolerance assumes.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` also rejects NaN

pub mod bounds;
pub mod entanglement;
pub mod error;
pub mod graph;
pub mod numerics;
pub mod pauli;
pub mod scalar;
pub mod sdp;
pub mod theta;

pub use error::{Error, Result};
pub use graph::Graph;
pub use pauli::{Observable, Pauli, PauliString};
pub use scalar::{Real, Tolerances};

pub type RealMatrix64 = numerics::RealMatrix<f64>;
pub type ComplexMatrix64 = numerics::ComplexMatrix<f64>;
pub type HermitianMatrix64 = numerics::HermitianMatrix<f64>;
pub type DensityMatrix64 = numerics::DensityMatrix<f64>;
pub type ObservableSet64 = pauli::ObservableSet<f64>;
pub type SdpProblem64 = sdp::SdpProblem<f64>;
pub type SdpSolution64 = sdp::SdpSolution<f64>;
pub type ThetaCertificate64 = theta::ThetaCertificate<f64>;
pub type BoundReport64 = bounds::BoundReport<f64>;
pub type WitnessReport64 = entanglement::WitnessReport<f64>;

pub type HermitianMatrix32 = numerics::HermitianMatrix<f32>;
pub type ObservableSet32 = pauli::ObservableSet<f32>;
