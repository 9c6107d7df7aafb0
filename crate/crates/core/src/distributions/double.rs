//! Unconditional densities as nested integrals of conditional densities over
//! the conditioning side or angle, whose density is `sin κ / 2`.

use super::{best_value, spec_for, ConditionalKind};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, try_integrate, QuadratureResult, QuadratureSpec};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DoubleIntegralKind {
    /// Area density from the area given a side, integrated over the side.
    AreaPrimal,
    /// Dual area density from the dual area given an angle.
    AreaDual,
    /// Perimeter density from the perimeter given a side.
    PerimeterPrimal,
    /// Dual perimeter density from the dual perimeter given an angle.
    PerimeterDual,
}

impl DoubleIntegralKind {
    pub const ALL: [Self; 4] = [
        Self::AreaPrimal,
        Self::AreaDual,
        Self::PerimeterPrimal,
        Self::PerimeterDual,
    ];

    fn conditional(self) -> ConditionalKind {
        match self {
            Self::AreaPrimal => ConditionalKind::AreaGivenSide,
            Self::AreaDual => ConditionalKind::AreaGivenAngle,
            Self::PerimeterPrimal => ConditionalKind::PerimeterGivenSide,
            Self::PerimeterDual => ConditionalKind::PerimeterGivenAngle,
        }
    }
}

/// Density in `x` of the statistic conditioned on a side or angle equal to
/// `kappa`, for the four kinds whose distribution function is a single
/// integral ([`ConditionalKind::AreaGivenSide`],
/// [`ConditionalKind::PerimeterGivenAngle`],
/// [`ConditionalKind::PerimeterGivenSide`],
/// [`ConditionalKind::AreaGivenAngle`]).
pub fn conditional_density<T: Real>(kind: ConditionalKind, x: T, kappa: T) -> Result<T> {
    conditional_density_with(kind, x, kappa, 1e-11).map(|q| q.value)
}

pub(crate) fn conditional_density_with<T: Real>(
    kind: ConditionalKind,
    x: T,
    kappa: T,
    tol: f64,
) -> Result<QuadratureResult<T>> {
    let zero = QuadratureResult {
        value: T::zero(),
        err_estimate: T::zero(),
        evaluations: 0,
    };
    if !(x > T::zero() && x < T::two_pi()) {
        return Ok(zero);
    }
    let pi = T::PI();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let half = x / two;
    let sh = half.sin();
    let spec = spec_for::<T>(tol);
    let r = match kind {
        ConditionalKind::AreaGivenSide => {
            let c = kappa.cos();
            let (p, q) = (T::one() - c, T::one() + c);
            integrate(
                |theta: T| {
                    let a = (theta - half).sin();
                    let den = p * a * a + q * sh * sh;
                    two * p * q * a * sh * theta.sin() / (den * den)
                },
                half,
                pi,
                &spec,
            )
        }
        ConditionalKind::PerimeterGivenAngle => {
            let c = kappa.cos();
            let (p, q) = (T::one() - c, T::one() + c);
            integrate(
                |rho: T| {
                    let a = (half - rho).sin();
                    let den = p * sh * sh + q * a * a;
                    two * p * q * a * sh * rho.sin() / (den * den)
                },
                T::zero(),
                half,
                &spec,
            )
        }
        ConditionalKind::PerimeterGivenSide => {
            if kappa >= half || kappa <= T::zero() {
                return Ok(zero);
            }
            // ρ = x/2 − κ + s
            let outer = sh * (half - kappa).sin();
            across(
                |s: T, rest: T| {
                    let rad = four * outer * s.sin() * rest.sin();
                    if rad > T::zero() {
                        (half - s).sin() * (half - kappa + s).sin() / rad.sqrt()
                    } else {
                        T::zero()
                    }
                },
                kappa,
                &spec,
            )
        }
        ConditionalKind::AreaGivenAngle => {
            if kappa <= half || kappa >= pi {
                return Ok(zero);
            }
            // θ = x/2 + s, and sin(κ + s) = sin(π − κ − s)
            let outer = sh * (kappa - half).sin();
            across(
                |s: T, rest: T| {
                    let rad = four * outer * rest.sin() * s.sin();
                    if rad > T::zero() {
                        -(half - kappa - s).sin() * (half + s).sin() / rad.sqrt()
                    } else {
                        T::zero()
                    }
                },
                pi - kappa,
                &spec,
            )
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "{other:?} has no single-integral conditional density"
            )))
        }
    };
    super::affine(r, T::zero(), T::one() / T::two_pi())
}

/// `∫₀^len f(s, len − s) ds` for integrands with inverse-square-root
/// singularities at both ends. Each half is integrated in the distance to its
/// own endpoint, so that distance never comes out of a cancelling difference.
fn across<T: Real, F: Fn(T, T) -> T>(f: F, len: T, spec: &QuadratureSpec<T>) -> Result<QuadratureResult<T>> {
    let mid = len / T::lit(2.0);
    let half_spec = QuadratureSpec {
        abs_tol: spec.abs_tol / T::lit(2.0),
        ..spec.singular(true, false)
    };
    let l = integrate(|s: T| f(s, len - s), T::zero(), mid, &half_spec);
    let r = integrate(|w: T| f(len - w, w), T::zero(), len - mid, &half_spec);
    match (l, r) {
        (Ok(l), Ok(r)) => Ok(QuadratureResult {
            value: l.value + r.value,
            err_estimate: l.err_estimate + r.err_estimate,
            evaluations: l.evaluations + r.evaluations,
        }),
        (l, r) => {
            let (lv, le, ln) = parts(l)?;
            let (rv, re, rn) = parts(r)?;
            Err(Error::ToleranceNotMet {
                value: lv + rv,
                err_estimate: le + re,
                evaluations: ln + rn,
            })
        }
    }
}

fn parts<T: Real>(r: Result<QuadratureResult<T>>) -> Result<(f64, f64, usize)> {
    match r {
        Ok(q) => Ok((q.value.as_f64(), q.err_estimate.as_f64(), q.evaluations)),
        Err(Error::ToleranceNotMet {
            value,
            err_estimate,
            evaluations,
        }) => Ok((value, err_estimate, evaluations)),
        Err(e) => Err(e),
    }
}

/// Unconditional density of area or perimeter at `x`, tolerance `1e-10`.
pub fn density_via_double_integral<T: Real>(kind: DoubleIntegralKind, x: T) -> Result<T> {
    density_via_double_integral_with(kind, x, 1e-10)
}

/// Unconditional density as `∫ (conditional density at κ) · sin κ / 2 dκ`.
///
/// The perimeter-given-side density carries `1/√sin(x/2 − κ)` and the
/// area-given-angle density `1/√sin(κ − x/2)`, so those outer integrals are
/// run with the corresponding endpoint flagged; the inner integrals are
/// singular at both ends.
pub fn density_via_double_integral_with<T: Real>(kind: DoubleIntegralKind, x: T, tol: f64) -> Result<T> {
    if !(x > T::zero() && x < T::two_pi()) {
        return Err(Error::InvalidArgument(format!("x = {x} outside (0, 2π)")));
    }
    let pi = T::PI();
    let half = x / T::lit(2.0);
    let outer: QuadratureSpec<T> = spec_for(tol);
    let inner_tol = outer.abs_tol.as_f64() / 10.0;
    let cond = kind.conditional();
    let weight = |kappa: T| -> Result<T> {
        let inner = conditional_density_with(cond, x, kappa, inner_tol).map(|q| q.value);
        Ok(best_value(inner) * kappa.sin() / T::lit(2.0))
    };
    let (a, b, spec) = match kind {
        DoubleIntegralKind::AreaPrimal | DoubleIntegralKind::PerimeterDual => (T::zero(), pi, outer),
        DoubleIntegralKind::PerimeterPrimal => (T::zero(), half, outer.singular(false, true)),
        DoubleIntegralKind::AreaDual => (half, pi, outer.singular(true, false)),
    };
    Ok(try_integrate(weight, a, b, &spec)?.value)
}
