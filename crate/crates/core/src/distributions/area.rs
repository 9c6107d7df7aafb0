//! Area of a random spherical triangle.

use super::{affine, best_estimate, check_range, sinc, spec_for};
use crate::error::Result;
use crate::quadrature::{integrate, QuadratureResult};
use crate::scalar::Real;

/// Below this distance from `π` the density is evaluated from its Taylor
/// series; the closed form loses digits to cancellation there.
const SERIES_RADIUS: f64 = 0.5;
const SERIES_TERMS: usize = 40;

/// Density of the area `σ` on `[0, 2π]`:
///
/// ```text
/// f(σ) = −N(σ) / (16π cos⁴(σ/2))
/// N(σ) = (σ² − 4πσ + 3π² − 6) cos σ − 6(σ − 2π) sin σ − 2(σ² − 4πσ + 3π² + 3)
/// ```
///
/// Note the leading minus. Numerator and denominator both vanish to fourth
/// order at `σ = π`, where `f(π) = 1/(4π)`.
pub fn area_density<T: Real>(sigma: T) -> T {
    let pi = T::PI();
    if !(sigma >= T::zero() && sigma <= T::two_pi()) {
        return T::zero();
    }
    let s = sigma - pi;
    let value = if s.abs() < T::lit(SERIES_RADIUS) {
        // N(π + s) = Σ_{j≥4} c_j s^j and 16π cos⁴(σ/2) = π s⁴ sinc⁴(s/2)
        let c = series_coefficients();
        let mut acc = T::zero();
        for &cj in c[4..].iter().rev() {
            acc = acc * s + T::lit(cj);
        }
        let d = sinc(s / T::lit(2.0));
        -acc / (pi * d * d * d * d)
    } else {
        let p = sigma * sigma - T::lit(4.0) * pi * sigma + T::lit(3.0) * pi * pi;
        let n = (p - T::lit(6.0)) * sigma.cos()
            - T::lit(6.0) * (sigma - T::two_pi()) * sigma.sin()
            - T::lit(2.0) * (p + T::lit(3.0));
        let h = (sigma / T::lit(2.0)).cos();
        let h2 = h * h;
        -n / (T::lit(16.0) * pi * h2 * h2)
    };
    value.max(T::zero())
}

/// Taylor coefficients of `N(π + s)`. Writing `P = s² − 2πs`,
/// `N = −P(2 + cos s) + 6(cos s − 1) + 6(s − π) sin s`.
fn series_coefficients() -> [f64; SERIES_TERMS] {
    let pi = std::f64::consts::PI;
    let mut fact = [1.0f64; SERIES_TERMS];
    for j in 1..SERIES_TERMS {
        fact[j] = fact[j - 1] * j as f64;
    }
    let alt = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    // 2 + cos s and sin s
    let d = |j: usize| match j {
        0 => 3.0,
        j if j % 2 == 0 => alt(j / 2) / fact[j],
        _ => 0.0,
    };
    let e = |j: usize| if j % 2 == 1 { alt(j / 2) / fact[j] } else { 0.0 };
    let mut c = [0.0; SERIES_TERMS];
    for (j, cj) in c.iter_mut().enumerate() {
        let mut v = 0.0;
        if j >= 2 {
            v -= d(j - 2);
        }
        if j >= 1 {
            v += 2.0 * pi * d(j - 1) + 6.0 * e(j - 1);
        }
        if j >= 2 && j % 2 == 0 {
            v += 6.0 * alt(j / 2) / fact[j];
        }
        v -= 6.0 * pi * e(j);
        *cj = v;
    }
    c
}

/// `P{σ ≤ sigma}`, tolerance `1e-12`.
pub fn area_cdf<T: Real>(sigma: T) -> T {
    best_estimate(area_cdf_quadrature(sigma, 1e-12))
        .max(T::zero())
        .min(T::one())
}

/// `P{σ ≤ sigma}` from the single integral over the side length `κ` of the
/// conditional probability given `c = κ`:
///
/// ```text
/// (1/2π) [σ + ∫₀^π (π − atan2(R, cos(κ/2) cos(σ/2))) sin(σ/2) cos(κ/2) / R · sin κ dκ]
/// R = √(sin²(σ/2) cos²(κ/2) + sin²(κ/2))
/// ```
///
/// The `atan2` covers both `σ < π` and `σ > π` without switching branches.
pub fn area_cdf_with<T: Real>(sigma: T, tol: f64) -> Result<T> {
    check_range("sigma", sigma, T::two_pi())?;
    Ok(area_cdf_quadrature(sigma, tol)?.value.max(T::zero()).min(T::one()))
}

fn area_cdf_quadrature<T: Real>(sigma: T, tol: f64) -> Result<QuadratureResult<T>> {
    let two = T::lit(2.0);
    let (s, c) = (sigma / two).sin_cos();
    let pi = T::PI();
    let q = integrate(
        |kappa: T| {
            let (sk, ck) = (kappa / two).sin_cos();
            let r = (s * s * ck * ck + sk * sk).sqrt();
            if r == T::zero() {
                return T::zero();
            }
            (pi - r.atan2(ck * c)) * s * ck / r * kappa.sin()
        },
        T::zero(),
        pi,
        &spec_for(tol),
    );
    affine(q, sigma / T::two_pi(), T::one() / T::two_pi())
}

/// The elementary integral that reduces the area distribution to closed form:
///
/// ```text
/// k(y) = 4 tan(y/2) / cos²(y/2) · ∫_{y/2}^{π/2} (π − z) cos²z dz
/// ```
///
/// so that `P{σ ≤ y} = (y + k(y)) / 2π` and `1 + k'(y) = 2π f(y)`.
/// Near `y = π` the prefactor blows up while the integral vanishes; there the
/// integral is expanded in `ε = π/2 − y/2` and the ratio taken analytically,
/// giving `k(π) = 2π/3`.
pub fn area_cdf_kernel<T: Real>(y: T) -> T {
    let pi = T::PI();
    let two = T::lit(2.0);
    let eps = pi / two - y / two;
    if eps.abs() < T::lit(0.25) {
        // ∫₀^ε (π/2 + w) sin²w dw, sin²w = Σ (−1)^{k+1} 2^{2k−1} w^{2k} / (2k)!
        // accumulated as the integral divided by ε³
        let mut integral = T::zero();
        let mut coef = T::one(); // 2^{2k−1}/(2k)! at k = 1
        let mut sign = T::one();
        let mut pow = T::one(); // ε^{2k−2}
        for k in 1..=20 {
            let kk = T::lit(k as f64);
            let term = coef * (pi / two * pow / (two * kk + T::one()) + pow * eps / (two * kk + two));
            integral = integral + sign * term;
            coef = coef * T::lit(4.0) / ((two * kk + T::one()) * (two * kk + two));
            sign = -sign;
            pow = pow * eps * eps;
        }
        // sin³ε = ε³ sinc³ε
        let d = sinc(eps);
        return T::lit(4.0) * eps.cos() * integral / (d * d * d);
    }
    // antiderivative of (π − z) cos²z
    let big_f = |z: T| {
        let w = pi - z;
        -w * w / T::lit(4.0) + w * (two * z).sin() / T::lit(4.0) - (two * z).cos() / T::lit(8.0)
    };
    let half = y / two;
    let c = half.cos();
    T::lit(4.0) * half.tan() / (c * c) * (big_f(pi / two) - big_f(half))
}
