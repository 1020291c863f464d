//! Floating-point abstraction shared by every numerical routine in the crate.
//!
//! Everything is written against [`Scalar`], implemented for `f32` and `f64`.
//! Exact or rational scalars are not supported: spectra, norms and Gaussian
//! sampling all need square roots and transcendental functions.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Numerical thresholds used throughout the crate for one scalar type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Maximum entrywise `|M - M^dagger|` accepted as Hermitian.
    pub herm: T,
    /// Smallest eigenvalue accepted as positive semidefinite is `-psd`.
    pub psd: T,
    /// Normalization and completeness slack.
    pub norm: T,
    /// Unit-trace slack for density matrices.
    pub trace: T,
    /// Unitarity slack (`U^dagger U = I`).
    pub unitary: T,
    /// Relative off-diagonal Frobenius threshold ending Jacobi sweeps.
    pub jacobi: T,
    /// Negativity values in `(-clamp, 0)` are reported as zero.
    pub clamp: T,
}

pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    const NAME: &'static str;

    fn tolerances() -> Tolerances<Self>;

    /// Converts an `f64` literal. Every finite `f64` is representable (possibly rounded).
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "f64";

    fn tolerances() -> Tolerances<f64> {
        Tolerances {
            herm: 1e-10,
            psd: 1e-9,
            norm: 1e-12,
            trace: 1e-10,
            unitary: 1e-10,
            jacobi: 1e-12,
            clamp: 1e-10,
        }
    }
}

impl Scalar for f32 {
    const NAME: &'static str = "f32";

    fn tolerances() -> Tolerances<f32> {
        Tolerances {
            herm: 1e-5,
            psd: 1e-4,
            norm: 1e-5,
            trace: 1e-4,
            unitary: 1e-4,
            jacobi: 1e-6,
            clamp: 1e-4,
        }
    }
}

#[inline]
pub(crate) fn cplx<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn real<T: Scalar>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
