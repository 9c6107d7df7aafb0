//! Distribution of area or perimeter conditioned on one side or one angle.
//!
//! Each kind describes the event `{statistic ≤ x}` as the part of a square of
//! two free coordinates lying under a boundary curve `v ≤ f(u)`, and integrates
//! the coordinates' area element over it. The probability is that area over
//! `2π`, the area of the whole square.
//!
//! | kind                   | conditioning | `u`               | `v`               | area element |
//! |------------------------|--------------|-------------------|-------------------|--------------|
//! | `AreaGivenSide`        | `c = κ`      | `α`               | `b`               | `sin v`      |
//! | `PerimeterGivenAngle`  | `α = κ`      | `c`               | `β`               | `sin v`      |
//! | `PerimeterGivenSide`   | `c = κ`      | `b`               | `α`               | `sin u`      |
//! | `AreaGivenAngle`       | `α = κ`      | `β`               | `c`               | `sin u`      |
//! | `AreaMedian`           | `c = κ`      | median angle      | median length     | `sin v`      |
//! | `PerimeterBisector`    | `α = κ`      | bisector `ρ`      | bisector angle    | `sin v`      |
//! | `PerimeterAngleCoords` | `c = κ`      | `α`               | `β`               | rational     |
//! | `AreaSideCoords`       | `α = κ`      | `c`               | `b`               | rational     |
//!
//! Kinds sharing a conditioning variable and statistic compute the same
//! function by different routes.

use super::{affine, check_range, spec_for};
use crate::coords::{area_element, CoordKind, CoordTriple};
use crate::error::{Error, Result};
use crate::identities::bisector_threshold;
use crate::quadrature::{integrate, try_integrate, QuadratureResult, QuadratureSpec};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionalKind {
    AreaGivenSide,
    PerimeterGivenAngle,
    PerimeterGivenSide,
    AreaGivenAngle,
    AreaMedian,
    PerimeterBisector,
    PerimeterAngleCoords,
    AreaSideCoords,
}

impl ConditionalKind {
    pub const ALL: [Self; 8] = [
        Self::AreaGivenSide,
        Self::PerimeterGivenAngle,
        Self::PerimeterGivenSide,
        Self::AreaGivenAngle,
        Self::AreaMedian,
        Self::PerimeterBisector,
        Self::PerimeterAngleCoords,
        Self::AreaSideCoords,
    ];

    /// Whether the statistic is the area (otherwise the perimeter).
    pub fn is_area(self) -> bool {
        matches!(
            self,
            Self::AreaGivenSide | Self::AreaGivenAngle | Self::AreaMedian | Self::AreaSideCoords
        )
    }

    /// Whether the conditioning variable is the side `c` (otherwise the
    /// angle `α`).
    pub fn conditions_on_side(self) -> bool {
        matches!(
            self,
            Self::AreaGivenSide | Self::PerimeterGivenSide | Self::AreaMedian | Self::PerimeterAngleCoords
        )
    }

    /// The single-integral kind computing the same probability.
    pub fn reference(self) -> Self {
        match self {
            Self::AreaMedian => Self::AreaGivenSide,
            Self::PerimeterBisector => Self::PerimeterGivenAngle,
            Self::PerimeterAngleCoords => Self::PerimeterGivenSide,
            Self::AreaSideCoords => Self::AreaGivenAngle,
            k => k,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::AreaGivenSide => "area-given-side",
            Self::PerimeterGivenAngle => "perimeter-given-angle",
            Self::PerimeterGivenSide => "perimeter-given-side",
            Self::AreaGivenAngle => "area-given-angle",
            Self::AreaMedian => "area-median",
            Self::PerimeterBisector => "perimeter-bisector",
            Self::PerimeterAngleCoords => "perimeter-angle-coords",
            Self::AreaSideCoords => "area-side-coords",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// The region `{statistic ≤ x}` for one kind at fixed `(x, κ)`.
///
/// `omega = tan(κ/2) / sin(x/2)` is the ratio that governs the area given a
/// side; `rho_thres` is the smallest bisector length compatible with the
/// perimeter, set for [`ConditionalKind::PerimeterBisector`] only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams<T> {
    pub kind: ConditionalKind,
    pub x: T,
    pub kappa: T,
    pub omega: T,
    pub rho_thres: Option<T>,
}

impl<T: Real> KernelParams<T> {
    pub fn new(kind: ConditionalKind, x: T, kappa: T) -> Result<Self> {
        check_range("x", x, T::two_pi())?;
        check_range("kappa", kappa, T::PI())?;
        let two = T::lit(2.0);
        let rho_thres = (kind == ConditionalKind::PerimeterBisector).then(|| bisector_threshold(x, kappa));
        Ok(Self {
            kind,
            x,
            kappa,
            omega: (kappa / two).tan() / (x / two).sin(),
            rho_thres,
        })
    }

    /// Upper boundary of the region in `v` at `u`; values in `[0, π]`.
    pub fn f_limit(&self, u: T) -> T {
        let pi = T::PI();
        let two = T::lit(2.0);
        let (x, kappa) = (self.x, self.kappa);
        let half = x / two;
        let sh = half.sin();
        let (sk, ck) = (kappa / two).sin_cos();
        let v = match self.kind {
            ConditionalKind::AreaGivenSide => {
                if u < half {
                    pi
                } else {
                    two * (ck * sh).atan2(sk * (u - half).sin())
                }
            }
            ConditionalKind::PerimeterGivenAngle => {
                if u <= half {
                    two * (ck * (half - u).sin()).atan2(sk * sh)
                } else {
                    T::zero()
                }
            }
            ConditionalKind::PerimeterGivenSide => {
                if kappa > half || u > half {
                    T::zero()
                } else if u < half - kappa {
                    pi
                } else {
                    self.side_cosine(u).acos()
                }
            }
            ConditionalKind::AreaGivenAngle => {
                if kappa <= half || u < half {
                    pi
                } else if u <= pi - kappa + half {
                    pi - self.side_cosine(u).acos()
                } else {
                    T::zero()
                }
            }
            ConditionalKind::AreaMedian => median_cosine(x, kappa, u).acos(),
            ConditionalKind::PerimeterBisector => match self.bisector_sine(u) {
                Some(s) => pi - s.asin(),
                None => T::zero(),
            },
            ConditionalKind::PerimeterAngleCoords => {
                if kappa >= half {
                    T::zero()
                } else {
                    two * ((half - kappa).sin() * (u / two).cos()).atan2(sh * (u / two).sin())
                }
            }
            ConditionalKind::AreaSideCoords => {
                if kappa < half {
                    pi
                } else {
                    two * ((u / two).cos() * sh).atan2((u / two).sin() * (kappa - half).sin())
                }
            }
        };
        v.max(T::zero()).min(pi)
    }

    /// Lower boundary of the region in `v`; zero except for the bisector,
    /// whose region is a band `arcsin s ≤ v ≤ π − arcsin s`.
    pub fn f_lower(&self, u: T) -> T {
        match self.kind {
            ConditionalKind::PerimeterBisector => match self.bisector_sine(u) {
                Some(s) => s.asin(),
                None => T::PI(),
            },
            _ => T::zero(),
        }
    }

    /// `∂f_limit/∂x` at `u` by central differences.
    pub fn g(&self, u: T) -> T {
        let h = T::lit(1e-6).max(T::epsilon().sqrt());
        let shifted = |dx: T| {
            Self {
                x: self.x + dx,
                ..*self
            }
            .f_limit(u)
        };
        (shifted(h) - shifted(-h)) / (h + h)
    }

    /// Signed distance-like margin of `(u, v)` from the region boundary:
    /// positive inside, negative outside.
    pub fn margin(&self, u: T, v: T) -> T {
        if self.kind == ConditionalKind::PerimeterBisector {
            let rt = self.rho_thres.unwrap_or(T::zero());
            if u < rt {
                return u - rt;
            }
            if let Some(over) = self.bisector_overshoot(u) {
                return -over;
            }
        }
        (v - self.f_lower(u)).min(self.f_limit(u) - v)
    }

    /// `(sin(x − κ) + (cos(x − κ) − cos κ) cot u) / sin κ`, clamped to
    /// `[−1, 1]`; the cosine of the free angle on the boundary for the two
    /// kinds conditioning on a side and an angle respectively.
    fn side_cosine(&self, u: T) -> T {
        let (x, kappa) = (self.x, self.kappa);
        let two = T::lit(2.0);
        let sk = kappa.sin();
        if sk == T::zero() {
            return T::one();
        }
        let (su, cu) = u.sin_cos();
        if su == T::zero() {
            return -T::one();
        }
        // cos(x − κ) − cos κ = −2 sin(x/2) sin(x/2 − κ)
        let diff = -two * (x / two).sin() * (x / two - kappa).sin();
        (((x - kappa).sin() + diff * cu / su) / sk).clamp_unit()
    }

    fn bisector_denominator(&self, u: T) -> T {
        let two = T::lit(2.0);
        let (sh, ch) = (self.x / two).sin_cos();
        sh * u.cos() + ch * (self.kappa / two).cos() * u.sin()
    }

    /// `s = −sin(x/2) sin(κ/2) / (sin(x/2) cos u + cos(x/2) cos(κ/2) sin u)`
    /// when `u ≥ ρ_thres` and `|s| ≤ 1`.
    fn bisector_sine(&self, u: T) -> Option<T> {
        let rt = self.rho_thres?;
        if u < rt {
            return None;
        }
        let two = T::lit(2.0);
        let s = -(self.x / two).sin() * (self.kappa / two).sin() / self.bisector_denominator(u);
        (s.abs() <= T::one()).then_some(s)
    }

    fn bisector_overshoot(&self, u: T) -> Option<T> {
        let two = T::lit(2.0);
        let s = -(self.x / two).sin() * (self.kappa / two).sin() / self.bisector_denominator(u);
        (!(s.abs() <= T::one())).then(|| if s.is_finite() { s.abs() - T::one() } else { T::one() })
    }
}

/// Cosine of the boundary median length at median angle `theta`; the unified
/// form covers `x < π` and `x > π` with one sign.
fn median_cosine<T: Real>(x: T, kappa: T, theta: T) -> T {
    let two = T::lit(2.0);
    let y = (kappa / two).cos();
    let (s, c) = (x / two).sin_cos();
    let one_m = (T::one() - y) * (T::one() + y);
    let st = theta.sin();
    let den = one_m * st * st * c * c + s * s;
    if den == T::zero() {
        return -T::one();
    }
    ((-y * s * s + one_m * st * c * (st * st * c * c + s * s).sqrt()) / den).clamp_unit()
}

/// `P{statistic ≤ x | conditioning variable = κ}`, tolerance `1e-10`.
pub fn conditional_cdf<T: Real>(kind: ConditionalKind, x: T, kappa: T) -> Result<T> {
    conditional_cdf_with(kind, x, kappa, 1e-10)
}

pub fn conditional_cdf_with<T: Real>(kind: ConditionalKind, x: T, kappa: T, tol: f64) -> Result<T> {
    if x.is_nan() {
        return Err(Error::InvalidArgument("x is NaN".into()));
    }
    check_range("kappa", kappa, T::PI())?;
    if x <= T::zero() {
        return Ok(T::zero());
    }
    if x >= T::two_pi() {
        return Ok(T::one());
    }
    let q = cdf_quadrature(kind, x, kappa, spec_for(tol))?;
    Ok(q.value.max(T::zero()).min(T::one()))
}

fn exact<T: Real>(value: T) -> Result<QuadratureResult<T>> {
    Ok(QuadratureResult {
        value,
        err_estimate: T::zero(),
        evaluations: 0,
    })
}

fn cdf_quadrature<T: Real>(
    kind: ConditionalKind,
    x: T,
    kappa: T,
    spec: QuadratureSpec<T>,
) -> Result<QuadratureResult<T>> {
    let pi = T::PI();
    let two = T::lit(2.0);
    let inv = T::one() / T::two_pi();
    let half = x / two;
    let (sh, ch) = half.sin_cos();
    let (sk, ck) = (kappa / two).sin_cos();
    let params = KernelParams::new(kind, x, kappa)?;
    match kind {
        ConditionalKind::AreaGivenSide => {
            let r = integrate(
                |theta: T| {
                    let b = ck * sh;
                    let a = sk * (theta - half).sin();
                    let den = b * b + a * a;
                    if den == T::zero() {
                        T::zero()
                    } else {
                        two * b * b / den
                    }
                },
                half,
                pi,
                &spec,
            );
            affine(r, x * inv, inv)
        }
        ConditionalKind::PerimeterGivenAngle => {
            let r = integrate(
                |rho: T| {
                    let a = ck * (half - rho).sin();
                    let b = sk * sh;
                    let den = a * a + b * b;
                    if den == T::zero() {
                        T::zero()
                    } else {
                        two * a * a / den
                    }
                },
                T::zero(),
                half,
                &spec,
            );
            affine(r, T::zero(), inv)
        }
        ConditionalKind::PerimeterGivenSide => {
            if kappa > half {
                return exact(T::zero());
            }
            let base = pi * (T::one() - (half - kappa).cos()) * inv;
            if kappa == T::zero() {
                return exact(base);
            }
            let r = integrate(
                |rho: T| params.side_cosine(rho).acos() * rho.sin(),
                half - kappa,
                half,
                &spec.singular(true, true),
            );
            affine(r, base, inv)
        }
        ConditionalKind::AreaGivenAngle => {
            if kappa <= half {
                return exact(T::one());
            }
            let base = pi * (T::one() - ch) * inv;
            let top = pi - kappa + half;
            if kappa.sin() == T::zero() || !(top > half) {
                return exact(base);
            }
            let r = integrate(
                |theta: T| (pi - params.side_cosine(theta).acos()) * theta.sin(),
                half,
                top,
                &spec.singular(true, true),
            );
            affine(r, base, inv)
        }
        ConditionalKind::AreaMedian => {
            let r = integrate(
                |theta: T| T::one() - median_cosine(x, kappa, theta),
                T::zero(),
                pi,
                &spec,
            );
            affine(r, T::zero(), inv)
        }
        ConditionalKind::PerimeterBisector => {
            let rt = params.rho_thres.unwrap_or(T::zero());
            let r = integrate(
                |rho: T| {
                    let s = sh * sk / params.bisector_denominator(rho);
                    let w = T::one() - s * s;
                    if w > T::zero() {
                        w.sqrt()
                    } else {
                        T::zero()
                    }
                },
                rt,
                pi,
                &spec.singular(true, false),
            );
            affine(r, T::zero(), two * inv)
        }
        ConditionalKind::PerimeterAngleCoords => {
            if kappa >= half {
                return exact(T::zero());
            }
            jacobian_double(&params, CoordKind::Angle, spec)
        }
        ConditionalKind::AreaSideCoords => {
            if kappa < half {
                return exact(T::one());
            }
            jacobian_double(&params, CoordKind::Side, spec)
        }
    }
}

/// `(1/2π) ∫₀^π du ∫₀^{f(u)} J(u, v, κ) dv` with the rational area element of
/// the angle or side coordinates.
fn jacobian_double<T: Real>(
    params: &KernelParams<T>,
    coords: CoordKind,
    spec: QuadratureSpec<T>,
) -> Result<QuadratureResult<T>> {
    let inner = spec.inner();
    let kappa = params.kappa;
    let r = try_integrate(
        |u: T| {
            let top = params.f_limit(u);
            let q = integrate(
                |v: T| area_element(&CoordTriple::new(coords, u, v, kappa)),
                T::zero(),
                top,
                &inner,
            )?;
            Ok(q.value)
        },
        T::zero(),
        T::PI(),
        &spec.singular(true, false),
    );
    affine(r, T::zero(), T::one() / T::two_pi())
}
