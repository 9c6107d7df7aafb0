//! Densities, distribution functions and conditional probabilities of the
//! area `σ` and perimeter `τ` of uniformly random spherical triangles.
//!
//! Functions documented as infallible return the quadrature's best estimate
//! when the requested tolerance cannot be certified; the `_with` variants
//! expose the tolerance and report [`Error::ToleranceNotMet`] instead.

mod area;
mod conditional;
mod curve;
mod double;
mod elliptic_identity;
mod perimeter;

pub use area::{area_cdf, area_cdf_kernel, area_cdf_with, area_density};
pub use conditional::{conditional_cdf, conditional_cdf_with, ConditionalKind, KernelParams};
pub use curve::{tabulate, DensityCurve, DensityKind};
pub use double::{
    conditional_density, density_via_double_integral, density_via_double_integral_with, DoubleIntegralKind,
};
pub use elliptic_identity::{elliptic_identity_gap, elliptic_identity_sides, EllipticIdentity};
pub use perimeter::{perimeter_cdf, perimeter_cdf_with, perimeter_density, perimeter_density_with, CdfTable};

use crate::error::{Error, Result};
use crate::quadrature::{QuadratureResult, QuadratureSpec};
use crate::scalar::Real;

/// Symmetric tolerance, floored a little above what the scalar type can
/// actually resolve.
pub(crate) fn spec_for<T: Real>(tol: f64) -> QuadratureSpec<T> {
    let t = T::lit(tol).max(T::lit(1e3) * T::epsilon());
    QuadratureSpec::new(t, t)
}

pub(crate) fn best_estimate<T: Real>(r: Result<QuadratureResult<T>>) -> T {
    match r {
        Ok(q) => q.value,
        Err(Error::ToleranceNotMet { value, .. }) => T::lit(value),
        Err(_) => T::nan(),
    }
}

/// Maps `v ↦ offset + scale·v` over both a result and a best estimate that
/// missed its tolerance.
pub(crate) fn affine<T: Real>(r: Result<QuadratureResult<T>>, offset: T, scale: T) -> Result<QuadratureResult<T>> {
    match r {
        Ok(q) => Ok(QuadratureResult {
            value: offset + scale * q.value,
            err_estimate: scale.abs() * q.err_estimate,
            evaluations: q.evaluations,
        }),
        Err(Error::ToleranceNotMet {
            value,
            err_estimate,
            evaluations,
        }) => Err(Error::ToleranceNotMet {
            value: (offset + scale * T::lit(value)).as_f64(),
            err_estimate: scale.abs().as_f64() * err_estimate,
            evaluations,
        }),
        Err(e) => Err(e),
    }
}

pub(crate) fn best_value<T: Real>(r: Result<T>) -> T {
    match r {
        Ok(v) => v,
        Err(Error::ToleranceNotMet { value, .. }) => T::lit(value),
        Err(_) => T::nan(),
    }
}

/// `sin(x)/x` with the removable point filled in.
pub(crate) fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-4) {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}

pub(crate) fn check_range<T: Real>(what: &str, value: T, hi: T) -> Result<()> {
    if value >= T::zero() && value <= hi {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} = {value} outside [0, {hi}]")))
    }
}
