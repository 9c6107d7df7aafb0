//! Perimeter of a random spherical triangle.

use rayon::prelude::*;

use super::{affine, area_cdf_with, area_density, best_value, check_range, spec_for};
use crate::elliptic::{ellip_ke, EllipticModulus};
use crate::error::{Error, Result};
use crate::quadrature::{try_integrate, QuadratureSpec};
use crate::scalar::Real;

/// Density of the perimeter `τ`, tolerance `1e-12`. Zero at `τ ≤ 0`, infinite
/// at `τ ≥ 2π`.
pub fn perimeter_density<T: Real>(tau: T) -> T {
    best_value(perimeter_density_with(tau, 1e-12))
}

/// Density of the perimeter as a single integral of complete elliptic
/// integrals:
///
/// ```text
/// (1/4π) ∫₀^{τ/2} [E(sin(t/2)) − cos²((τ−t)/2) K(sin(t/2))] / √(sin(τ/2) sin(τ/2 − t)) · sin t dt
/// ```
///
/// The square root vanishes at `t = τ/2`; that endpoint is integrated with the
/// inverse-square-root substitution.
pub fn perimeter_density_with<T: Real>(tau: T, tol: f64) -> Result<T> {
    if tau.is_nan() {
        return Err(Error::InvalidArgument("perimeter is NaN".into()));
    }
    if tau <= T::zero() {
        return Ok(T::zero());
    }
    if tau >= T::two_pi() {
        return Ok(T::infinity());
    }
    let two = T::lit(2.0);
    let half = tau / two;
    let s_half = half.sin();
    let spec = spec_for::<T>(tol).singular(false, true);
    // keeps the modulus off 1 when τ is within rounding of 2π
    let top = T::one() - T::lit(1e-14).max(T::lit(8.0) * T::epsilon());
    let q = try_integrate(
        |t: T| {
            let gap = s_half * (half - t).sin();
            if !(gap > T::zero()) {
                return Ok(T::zero());
            }
            let zeta = (t / two).sin().min(top);
            let (k, e) = ellip_ke(EllipticModulus::saturating(zeta))?;
            let c = ((tau - t) / two).cos();
            Ok((e - c * c * k) / gap.sqrt() * t.sin())
        },
        T::zero(),
        half,
        &spec,
    );
    let scale = T::one() / (T::lit(4.0) * T::PI());
    affine(q, T::zero(), scale).map(|r| r.value.max(T::zero()))
}

/// `P{τ ≤ tau}`, tolerance `1e-10`.
pub fn perimeter_cdf<T: Real>(tau: T) -> T {
    best_value(perimeter_cdf_with(tau, 1e-10)).max(T::zero()).min(T::one())
}

/// `P{τ ≤ tau}` by integrating [`perimeter_density_with`]; the divergence at
/// `2π` is integrable and handled as an endpoint singularity.
pub fn perimeter_cdf_with<T: Real>(tau: T, tol: f64) -> Result<T> {
    check_range("tau", tau, T::two_pi())?;
    if tau == T::zero() {
        return Ok(T::zero());
    }
    let spec = spec_for::<T>(tol);
    let near_end = tau > T::two_pi() - T::lit(0.5);
    let inner_tol = spec.abs_tol.as_f64() / 10.0;
    let q = try_integrate(
        |t: T| perimeter_density_with(t, inner_tol),
        T::zero(),
        tau,
        &spec.singular(false, near_end),
    )?;
    Ok(q.value.max(T::zero()).min(T::one()))
}

/// A distribution function tabulated on a uniform grid over `[0, 2π]` and
/// interpolated by cubic Hermite segments whose slopes are the density, or
/// linearly when no density is at hand.
///
/// Built once and evaluated millions of times when comparing against large
/// samples. The perimeter table treats its final interval as
/// `1 − F(x) ∝ √(2π − x)`, matching the inverse-square-root blow-up of the
/// density.
#[derive(Debug, Clone)]
pub struct CdfTable<T> {
    lo: T,
    step: T,
    values: Vec<T>,
    slopes: Option<Vec<T>>,
    sqrt_tail: bool,
}

impl<T: Real> CdfTable<T> {
    /// Area distribution on `[0, 2π]` with `intervals` segments.
    pub fn area(intervals: usize) -> Result<Self> {
        Self::check_intervals(intervals)?;
        let step = T::two_pi() / T::lit(intervals as f64);
        let nodes: Vec<T> = (0..=intervals).map(|i| step * T::lit(i as f64)).collect();
        let values = nodes
            .par_iter()
            .map(|&x| area_cdf_with(x.min(T::two_pi()), 1e-12))
            .collect::<Result<Vec<T>>>()?;
        let slopes = nodes.iter().map(|&x| area_density(x)).collect();
        Ok(Self {
            lo: T::zero(),
            step,
            values,
            slopes: Some(slopes),
            sqrt_tail: false,
        })
    }

    /// Any distribution function on `[0, 2π]`, sampled at `intervals + 1`
    /// nodes and interpolated linearly.
    pub fn from_fn<F>(intervals: usize, f: F) -> Result<Self>
    where
        F: Fn(T) -> Result<T> + Sync,
    {
        Self::check_intervals(intervals)?;
        let step = T::two_pi() / T::lit(intervals as f64);
        let values = (0..=intervals)
            .into_par_iter()
            .map(|i| f((step * T::lit(i as f64)).min(T::two_pi())))
            .collect::<Result<Vec<T>>>()?;
        Ok(Self {
            lo: T::zero(),
            step,
            values,
            slopes: None,
            sqrt_tail: false,
        })
    }

    /// Perimeter distribution on `[0, 2π]` with `intervals` segments, the last
    /// of which carries the square-root tail.
    pub fn perimeter(intervals: usize) -> Result<Self> {
        Self::check_intervals(intervals)?;
        let step = T::two_pi() / T::lit(intervals as f64);
        let node = |i: usize| step * T::lit(i as f64);
        let spec = QuadratureSpec::new(T::lit(1e-13).max(T::lit(1e3) * T::epsilon()), T::lit(1e-11));
        let pieces = (0..intervals - 1)
            .into_par_iter()
            .map(|i| {
                try_integrate(|t: T| perimeter_density_with(t, 1e-13), node(i), node(i + 1), &spec).map(|q| q.value)
            })
            .collect::<Result<Vec<T>>>()?;
        let mut values = Vec::with_capacity(intervals + 1);
        let mut acc = T::zero();
        values.push(acc);
        for p in pieces {
            acc = acc + p;
            values.push(acc);
        }
        values.push(T::one());
        let mut slopes: Vec<T> = (0..intervals)
            .into_par_iter()
            .map(|i| perimeter_density_with(node(i), 1e-13))
            .collect::<Result<Vec<T>>>()?;
        slopes.push(T::infinity());
        Ok(Self {
            lo: T::zero(),
            step,
            values,
            slopes: Some(slopes),
            sqrt_tail: true,
        })
    }

    fn check_intervals(intervals: usize) -> Result<()> {
        if intervals < 2 {
            return Err(Error::InvalidArgument(
                "a distribution table needs at least two intervals".into(),
            ));
        }
        Ok(())
    }

    /// Distribution function at the grid nodes.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn eval(&self, x: T) -> T {
        let n = self.values.len() - 1;
        let pos = (x - self.lo) / self.step;
        if !(pos > T::zero()) {
            return T::zero();
        }
        if pos >= T::lit(n as f64) {
            return T::one();
        }
        let i = pos.floor().to_usize().unwrap_or(0).min(n - 1);
        let t = pos - T::lit(i as f64);
        let (f0, f1) = (self.values[i], self.values[i + 1]);
        if self.sqrt_tail && i == n - 1 {
            return (f1 - (f1 - f0) * (T::one() - t).sqrt()).max(T::zero()).min(T::one());
        }
        let Some(slopes) = &self.slopes else {
            return (f0 + (f1 - f0) * t).max(T::zero()).min(T::one());
        };
        let (m0, m1) = (slopes[i] * self.step, slopes[i + 1] * self.step);
        let t2 = t * t;
        let t3 = t2 * t;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let v = (two * t3 - three * t2 + T::one()) * f0
            + (t3 - two * t2 + t) * m0
            + (three * t2 - two * t3) * f1
            + (t3 - t2) * m1;
        v.max(T::zero()).min(T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    const AT_PI: f64 = 0.132_582_521_472_477_68; // 3√2/32

    #[test]
    fn value_at_pi() {
        assert!((3.0 * 2f64.sqrt() / 32.0 - AT_PI).abs() < 1e-16);
        assert!((perimeter_density(PI) - AT_PI).abs() < 1e-11);
    }

    #[test]
    fn vanishes_at_zero_and_diverges_at_full_turn() {
        assert_eq!(perimeter_density(0.0), 0.0);
        let small = perimeter_density(0.01);
        assert!(small > 0.0 && small < 1e-3);
        assert!(perimeter_density(0.001) < small);
        assert!(perimeter_density(TAU).is_infinite());
        assert!(perimeter_density(TAU - 1e-6) > perimeter_density(TAU - 1e-3));
    }

    #[test]
    fn reference_values() {
        // frozen from an independent quadrature (scipy quad with scipy's ellipk/ellipe)
        for &(tau, expected) in &[
            (1.0, 0.005_765_057_509_847_227),
            (1.5 * PI, 0.279_459_180_224_238_8),
            (6.0, 0.350_887_866_413_405_1),
        ] {
            let v = perimeter_density(tau);
            assert!((v - expected).abs() < 1e-11, "τ = {tau}: {v}");
        }
    }

    #[test]
    fn normalized() {
        let total = perimeter_cdf_with(TAU, 1e-9).unwrap();
        assert!((total - 1.0).abs() < 1e-6, "{total}");
    }

    #[test]
    fn cdf_derivative_is_density() {
        let h = 1e-4;
        let fd = (perimeter_cdf(3.0 + h) - perimeter_cdf(3.0 - h)) / (2.0 * h);
        assert!((fd - perimeter_density(3.0_f64)).abs() < 1e-6);
    }

    #[test]
    fn tables_match_direct_evaluation() {
        let area = CdfTable::<f64>::area(256).unwrap();
        let per = CdfTable::<f64>::perimeter(256).unwrap();
        assert_eq!(area.eval(0.0), 0.0);
        assert_eq!(per.eval(TAU), 1.0);
        for &x in &[0.3, 1.234, 3.0, 4.5, 6.1] {
            assert!((area.eval(x) - super::super::area_cdf(x)).abs() < 1e-7, "area at {x}");
            assert!((per.eval(x) - perimeter_cdf(x)).abs() < 1e-6, "perimeter at {x}");
        }
        let last = per.values()[255];
        assert!((last - perimeter_cdf(TAU * 255.0 / 256.0)).abs() < 1e-8);
    }

    #[test]
    fn f32_value_at_pi() {
        assert!((perimeter_density(std::f32::consts::PI) - 0.132_582_52).abs() < 1e-5);
    }
}
