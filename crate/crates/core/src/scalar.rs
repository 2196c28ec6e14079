//! Real scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
///
/// All tolerances in this crate are written for `f64`. [`Scalar::tol`] widens
/// them for lower-precision types in proportion to the machine epsilon, so the
/// same code paths stay meaningful for `f32`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// An `f64`-calibrated tolerance, scaled up by `eps(Self) / eps(f64)` when
    /// `Self` is less precise.
    #[inline]
    fn tol(x: f64) -> Self {
        let ratio = Self::epsilon().to_f64().unwrap_or(f64::EPSILON) / f64::EPSILON;
        Self::lit(x * ratio.max(1.0))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
