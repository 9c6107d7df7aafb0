//! Two integral identities that turn the perimeter-given-side and
//! area-given-angle densities into complete elliptic integrals.
//!
//! ```text
//! ∫_{x/2−κ}^{x/2} sin(x−κ−ρ) sin κ sin ρ / √R(ρ) dρ
//!     = [E(sin(κ/2)) − cos²((x−κ)/2) K(sin(κ/2))] sin κ / √(sin(x/2) sin(x/2 − κ))
//!
//! −∫_{x/2}^{π−κ+x/2} sin(x−κ−θ) sin κ sin θ / √R(θ) dθ
//!     = [E(cos(κ/2)) − sin²((x−κ)/2) K(cos(κ/2))] sin κ / √(sin(x/2) sin(κ − x/2))
//! ```
//!
//! with `R` the product of four sines that vanishes at both limits. No
//! symbolic proof is known; they are checked here by quadrature.

use super::spec_for;
use crate::elliptic::{ellip_ke, EllipticModulus};
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EllipticIdentity {
    /// Conditioning on a side; requires `0 < κ < x/2 < π`.
    Perimeter,
    /// Conditioning on an angle; requires `x/2 < κ < π`.
    Area,
}

/// `(quadrature side, elliptic side)` of the identity at `(x, κ)`.
pub fn elliptic_identity_sides<T: Real>(which: EllipticIdentity, x: T, kappa: T, tol: f64) -> Result<(T, T)> {
    let pi = T::PI();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let half = x / two;
    let ok = match which {
        EllipticIdentity::Perimeter => kappa > T::zero() && kappa < half && half < pi,
        EllipticIdentity::Area => half > T::zero() && half < kappa && kappa < pi,
    };
    if !ok {
        return Err(Error::InvalidArgument(format!(
            "({x}, {kappa}) outside the domain of the {which:?} identity"
        )));
    }
    let sh = half.sin();
    let sk = kappa.sin();
    let spec = spec_for::<T>(tol).singular(true, true);
    let (lhs, gap, zeta, weight) = match which {
        EllipticIdentity::Perimeter => {
            let outer = sh * (half - kappa).sin();
            let q = integrate(
                |rho: T| {
                    let rad = four * outer * (kappa + rho - half).sin() * (half - rho).sin();
                    if rad > T::zero() {
                        (x - kappa - rho).sin() * sk * rho.sin() / rad.sqrt()
                    } else {
                        T::zero()
                    }
                },
                half - kappa,
                half,
                &spec,
            )?;
            let c = ((x - kappa) / two).cos();
            (q.value, outer, (kappa / two).sin(), c * c)
        }
        EllipticIdentity::Area => {
            let outer = sh * (kappa - half).sin();
            let q = integrate(
                |theta: T| {
                    let rad = four * outer * (kappa + theta - half).sin() * (theta - half).sin();
                    if rad > T::zero() {
                        -(x - kappa - theta).sin() * sk * theta.sin() / rad.sqrt()
                    } else {
                        T::zero()
                    }
                },
                half,
                pi - kappa + half,
                &spec,
            )?;
            let s = ((x - kappa) / two).sin();
            (q.value, outer, (kappa / two).cos(), s * s)
        }
    };
    let (k, e) = ellip_ke(EllipticModulus::new(zeta)?)?;
    Ok((lhs, (e - weight * k) * sk / gap.sqrt()))
}

/// `|quadrature side − elliptic side|`, quadrature tolerance `1e-12`.
pub fn elliptic_identity_gap<T: Real>(which: EllipticIdentity, x: T, kappa: T) -> Result<T> {
    let (lhs, rhs) = elliptic_identity_sides(which, x, kappa, 1e-12)?;
    Ok((lhs - rhs).abs())
}
