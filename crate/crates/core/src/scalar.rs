//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Numerical tolerances used throughout the crate.
///
/// All fields are stored as `f64` and converted to the working scalar on use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Absolute tolerance on `|m[i][j] - conj(m[j][i])|`.
    pub hermiticity: f64,
    /// Smallest eigenvalue still accepted as positive semidefinite (negated).
    pub psd: f64,
    /// Relative eigen/Cholesky reconstruction tolerance.
    pub reconstruction: f64,
    /// Allowed deviation of a density matrix trace from one.
    pub trace: f64,
    /// Frobenius tolerance on `A² - 1` for the dichotomic test.
    pub involution: f64,
    /// Relative Frobenius tolerance on `{A, B}` for the anticommutation test.
    pub anticommutation: f64,
    /// Largest imaginary part tolerated in an expectation value.
    pub expectation_imag: f64,
    /// Smallest `Λ(A²)` accepted before an observable counts as zero.
    pub zero_observable: f64,
    /// Relative residual and PSD slack accepted when verifying an SDP certificate.
    pub sdp_residual: f64,
    /// Relative duality gap accepted when verifying an SDP certificate.
    pub sdp_gap: f64,
}

impl Tolerances {
    pub const F64: Tolerances = Tolerances {
        hermiticity: 1e-12,
        psd: 1e-9,
        reconstruction: 1e-9,
        trace: 1e-10,
        involution: 1e-9,
        anticommutation: 1e-9,
        expectation_imag: 1e-10,
        zero_observable: 1e-12,
        sdp_residual: 1e-8,
        sdp_gap: 1e-7,
    };

    pub const F32: Tolerances = Tolerances {
        hermiticity: 1e-5,
        psd: 1e-4,
        reconstruction: 1e-4,
        trace: 1e-5,
        involution: 1e-4,
        anticommutation: 1e-4,
        expectation_imag: 1e-5,
        zero_observable: 1e-6,
        sdp_residual: 1e-4,
        sdp_gap: 1e-3,
    };
}

/// Floating-point scalar the linear algebra, solver and bounds are generic over.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + LowerExp
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Default tolerance record for this precision.
    const TOL: Tolerances;

    /// Converts an `f64` literal, panicking only on non-representable input.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const TOL: Tolerances = Tolerances::F64;
}

impl Real for f32 {
    const TOL: Tolerances = Tolerances::F32;
}
