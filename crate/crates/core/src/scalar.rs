//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the geometry, quadrature and densities are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate are
/// calibrated for `f64`; `f32` works but with proportionally looser accuracy.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in target float")
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Clamps into [-1, 1] before `acos`/`asin`.
    #[inline]
    fn clamp_unit(self) -> Self {
        self.max(-Self::one()).min(Self::one())
    }
}

impl Real for f32 {}
impl Real for f64 {}
