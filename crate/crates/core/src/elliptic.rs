//! Complete elliptic integrals of the first and second kind by the
//! arithmetic-geometric mean.
//!
//! Arguments are the modulus `ζ` (not the parameter `m = ζ²`):
//!
//! ```text
//! K(ζ) = ∫₀^{π/2} dθ / √(1 − ζ² sin²θ)
//! E(ζ) = ∫₀^{π/2} √(1 − ζ² sin²θ) dθ
//! ```

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ITER: usize = 64;

/// Elliptic modulus, `0 ≤ ζ ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticModulus<T>(T);

impl<T: Real> EllipticModulus<T> {
    pub fn new(zeta: T) -> Result<Self> {
        if zeta >= T::zero() && zeta <= T::one() {
            Ok(Self(zeta))
        } else {
            Err(Error::InvalidArgument(format!(
                "elliptic modulus {zeta} outside [0, 1]"
            )))
        }
    }

    /// Clamps into `[0, 1]`; for moduli produced by trigonometric expressions
    /// that may round a hair past the boundary.
    pub fn saturating(zeta: T) -> Self {
        Self(zeta.max(T::zero()).min(T::one()))
    }

    pub fn zeta(&self) -> T {
        self.0
    }

    /// Complementary modulus `√(1 − ζ²)`, computed as `√((1 − ζ)(1 + ζ))`.
    pub fn complement(&self) -> Self {
        Self(((T::one() - self.0) * (T::one() + self.0)).sqrt())
    }
}

/// Runs the AGM from `(1, ζ')` and returns `(a_∞, Σ 2^{n-1} c_n²)` with
/// `c_0 = ζ`.
fn agm<T: Real>(m: EllipticModulus<T>) -> (T, T) {
    let half = T::lit(0.5);
    let mut a = T::one();
    let mut b = m.complement().0;
    let mut c = m.0;
    let mut pow = half;
    let mut sum = pow * c * c;
    for _ in 0..MAX_ITER {
        let a_next = half * (a + b);
        c = half * (a - b);
        b = (a * b).sqrt();
        a = a_next;
        pow = pow + pow;
        sum = sum + pow * c * c;
        if c.abs() <= T::epsilon() * a {
            break;
        }
    }
    (a, sum)
}

/// `K(ζ)`; [`Error::Divergent`] at `ζ = 1`.
pub fn ellip_k<T: Real>(m: EllipticModulus<T>) -> Result<T> {
    if T::one() - m.0 <= T::lit(1e-15).max(T::epsilon()) {
        return Err(Error::Divergent);
    }
    let (a, _) = agm(m);
    Ok(T::FRAC_PI_2() / a)
}

/// `E(ζ)`; finite on the whole closed interval with `E(1) = 1`.
pub fn ellip_e<T: Real>(m: EllipticModulus<T>) -> T {
    if m.0 == T::one() {
        return T::one();
    }
    let (a, sum) = agm(m);
    T::FRAC_PI_2() / a * (T::one() - sum)
}

/// `(K(ζ), E(ζ))` from a single AGM run.
pub fn ellip_ke<T: Real>(m: EllipticModulus<T>) -> Result<(T, T)> {
    if T::one() - m.0 <= T::lit(1e-15).max(T::epsilon()) {
        return Err(Error::Divergent);
    }
    let (a, sum) = agm(m);
    let k = T::FRAC_PI_2() / a;
    Ok((k, k * (T::one() - sum)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadratureSpec};
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn modulus(z: f64) -> EllipticModulus<f64> {
        EllipticModulus::new(z).unwrap()
    }

    // Oracles: the defining integrals, evaluated by adaptive quadrature.
    fn k_by_quadrature(z: f64) -> f64 {
        let spec = QuadratureSpec::new(1e-13, 1e-14);
        integrate(
            |t: f64| 1.0 / (1.0 - z * z * t.sin().powi(2)).sqrt(),
            0.0,
            FRAC_PI_2,
            &spec,
        )
        .unwrap()
        .value
    }

    fn e_by_quadrature(z: f64) -> f64 {
        let spec = QuadratureSpec::new(1e-13, 1e-14);
        integrate(|t: f64| (1.0 - z * z * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, &spec)
            .unwrap()
            .value
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(ellip_k(modulus(0.0)).unwrap(), FRAC_PI_2);
        assert_eq!(ellip_e(modulus(0.0)), FRAC_PI_2);
    }

    #[test]
    fn k_diverges_at_one_and_e_is_one() {
        assert_eq!(ellip_k(modulus(1.0)), Err(Error::Divergent));
        assert_eq!(ellip_e(modulus(1.0)), 1.0);
    }

    #[test]
    fn lemniscatic_case_matches_quadrature() {
        let z = SQRT_2 / 2.0;
        let oracle = k_by_quadrature(z);
        // frozen from the quadrature oracle
        assert!((oracle - 1.854_074_677_301_371_9).abs() < 1e-13);
        assert!((ellip_k(modulus(z)).unwrap() - 1.854_074_677_301_371_9).abs() < 1e-12);
        assert!((ellip_e(modulus(z)) - e_by_quadrature(z)).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_quadrature_across_moduli() {
        for i in 0..20 {
            let z = i as f64 / 20.0;
            let (k, e) = ellip_ke(modulus(z)).unwrap();
            assert!((k - k_by_quadrature(z)).abs() < 1e-12, "K({z})");
            assert!((e - e_by_quadrature(z)).abs() < 1e-12, "E({z})");
        }
    }

    #[test]
    fn legendre_relation() {
        for i in 1..=20 {
            let z = i as f64 / 21.0;
            let m = modulus(z);
            let (k, e) = ellip_ke(m).unwrap();
            let (kc, ec) = ellip_ke(m.complement()).unwrap();
            assert!((e * kc + ec * k - k * kc - FRAC_PI_2).abs() < 1e-12, "ζ = {z}");
        }
    }

    #[test]
    fn k_increases_and_e_decreases() {
        let grid: Vec<(f64, f64)> = (0..100).map(|i| ellip_ke(modulus(i as f64 / 100.0)).unwrap()).collect();
        for w in grid.windows(2) {
            assert!(w[1].0 > w[0].0);
            assert!(w[1].1 < w[0].1);
        }
    }

    #[test]
    fn defining_integral_at_one_half() {
        let spec = QuadratureSpec::new(1e-12, 1e-12);
        let q = integrate(
            |t: f64| 1.0 / (1.0 - 0.25 * t.sin().powi(2)).sqrt(),
            0.0,
            FRAC_PI_2,
            &spec,
        )
        .unwrap()
        .value;
        assert!((q - ellip_k(modulus(0.5)).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn out_of_range_modulus_is_rejected() {
        assert!(EllipticModulus::new(1.5).is_err());
        assert!(EllipticModulus::new(-0.1).is_err());
    }

    #[test]
    fn f32_values() {
        let m = EllipticModulus::<f32>::new(0.5).unwrap();
        assert!((ellip_k(m).unwrap() - 1.685_750_4).abs() < 1e-5);
    }
}
