//! Trigonometric identities linking a triangle's elements to its area and
//! perimeter, evaluated as residuals, plus the median and angle-bisector
//! decompositions.
//!
//! Every identity is rearranged so that no denominator remains; the residual
//! is the absolute difference of the two sides of that product form.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sphere::TriangleMetrics;

/// Absolute residuals of the six identities.
///
/// | field               | identity                                                     |
/// |---------------------|--------------------------------------------------------------|
/// | `primal_half_side`  | `tan(b/2) = cot(c/2) csc(α − σ/2) sin(σ/2)`                  |
/// | `primal_cosine`     | `cos α = [sin(τ−c) + (cos(τ−c) − cos c) cot b] / sin c`      |
/// | `dual_half_angle`   | `tan(β/2) = cot(α/2) sin(τ/2 − c) csc(τ/2)`                  |
/// | `dual_cosine`       | `−cos c = [sin(σ−α) + (cos(σ−α) − cos α) cot β] / sin α`     |
/// | `excess_tangent`    | `tan(σ/2) = sin a sin b sin γ / (1 + cos a + cos b + cos c)` |
/// | `perimeter_tangent` | `tan(τ/2) = sin α sin β sin c / (cos α + cos β + cos γ − 1)` |
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals<T> {
    pub primal_half_side: T,
    pub primal_cosine: T,
    pub dual_half_angle: T,
    pub dual_cosine: T,
    pub excess_tangent: T,
    pub perimeter_tangent: T,
}

impl<T: Real> IdentityResiduals<T> {
    pub fn max(&self) -> T {
        self.as_array().into_iter().fold(T::zero(), T::max)
    }

    pub fn as_array(&self) -> [T; 6] {
        [
            self.primal_half_side,
            self.primal_cosine,
            self.dual_half_angle,
            self.dual_cosine,
            self.excess_tangent,
            self.perimeter_tangent,
        ]
    }
}

pub fn identity_residuals<T: Real>(m: &TriangleMetrics<T>) -> IdentityResiduals<T> {
    let half = T::lit(0.5);
    let one = T::one();
    let (a, b, c) = (m.a, m.b, m.c);
    let (al, be, ga) = (m.alpha, m.beta, m.gamma);
    let (sigma, tau) = (m.sigma, m.tau);

    let (sb2, cb2) = (half * b).sin_cos();
    let (sc2, cc2) = (half * c).sin_cos();
    let (sa2, ca2) = (half * al).sin_cos();
    let (sbe2, cbe2) = (half * be).sin_cos();
    let (ss2, cs2) = (half * sigma).sin_cos();
    let (st2, ct2) = (half * tau).sin_cos();

    let primal_half_side = (al - half * sigma).sin() * sb2 * sc2 - cb2 * cc2 * ss2;
    let primal_cosine =
        b.sin() * c.sin() * al.cos() - (tau - c).sin() * b.sin() - ((tau - c).cos() - c.cos()) * b.cos();
    let dual_half_angle = (half * tau - c).sin() * ca2 * cbe2 - sa2 * sbe2 * st2;
    let dual_cosine =
        -al.sin() * be.sin() * c.cos() - (sigma - al).sin() * be.sin() - ((sigma - al).cos() - al.cos()) * be.cos();
    let excess_tangent = ss2 * (one + a.cos() + b.cos() + c.cos()) - cs2 * a.sin() * b.sin() * ga.sin();
    let perimeter_tangent = st2 * (al.cos() + be.cos() + ga.cos() - one) - ct2 * al.sin() * be.sin() * c.sin();

    IdentityResiduals {
        primal_half_side: primal_half_side.abs(),
        primal_cosine: primal_cosine.abs(),
        dual_half_angle: dual_half_angle.abs(),
        dual_cosine: dual_cosine.abs(),
        excess_tangent: excess_tangent.abs(),
        perimeter_tangent: perimeter_tangent.abs(),
    }
}

/// Position of a cevian's foot relative to the opposite vertex.
///
/// For the median from `C` to the midpoint `P` of side `c`: `rho = |PC|` and
/// `theta` is the angle `BPC`.
///
/// For the bisector of `α` meeting `BC` at `Q`: `theta` is the angle `AQC`
/// and `rho = π − |AQ|`, the distance from `Q` to the antipode of `A`; with
/// this convention the cosine-rule expansions around `Q` take the form
/// `−cos γ = cos θ cos(α/2) + sin θ sin(α/2) cos ρ`. `rho_thres` is the
/// smallest `rho` compatible with the triangle's perimeter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CevianDecomposition<T> {
    pub rho: T,
    pub theta: T,
    pub rho_thres: Option<T>,
}

fn check_nondegenerate<T: Real>(m: &TriangleMetrics<T>) -> Result<()> {
    let tol = T::lit(crate::sphere::DEGENERACY_TOL);
    let pi = T::PI();
    for s in m.sides().into_iter().chain(m.angles()) {
        if !(s >= tol && s <= pi - tol) {
            return Err(Error::DegenerateTriangle("element at 0 or π"));
        }
    }
    Ok(())
}

pub fn median_decompose<T: Real>(m: &TriangleMetrics<T>) -> Result<CevianDecomposition<T>> {
    check_nondegenerate(m)?;
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let (sc2, cc2) = (half * m.c).sin_cos();
    let cos_rho = (m.a.cos() + m.b.cos()) / (two * cc2);
    let sin_rho_cos_theta = (m.a.cos() - m.b.cos()) / (two * sc2);
    let sin_rho_sin_theta = m.a.sin() * m.b.sin() * m.gamma.sin() / m.c.sin();
    Ok(CevianDecomposition {
        rho: sin_rho_sin_theta.hypot(sin_rho_cos_theta).atan2(cos_rho),
        theta: sin_rho_sin_theta.atan2(sin_rho_cos_theta),
        rho_thres: None,
    })
}

/// `ρ_thres = arccos(−(cos(τ/2) + sin(α/2)) / (1 + cos(τ/2) sin(α/2)))`,
/// evaluated through its sine `sin(τ/2) cos(α/2) / (1 + cos(τ/2) sin(α/2))`.
pub fn bisector_threshold<T: Real>(tau: T, alpha: T) -> T {
    let half = T::lit(0.5);
    let (st2, ct2) = (half * tau).sin_cos();
    let (sa2, ca2) = (half * alpha).sin_cos();
    (st2 * ca2).atan2(-(ct2 + sa2))
}

pub fn bisector_decompose<T: Real>(m: &TriangleMetrics<T>) -> Result<CevianDecomposition<T>> {
    check_nondegenerate(m)?;
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let (sa2, ca2) = (half * m.alpha).sin_cos();
    let sin_theta_cos_rho = -(m.beta.cos() + m.gamma.cos()) / (two * sa2);
    let sin_theta_sin_rho = m.beta.sin() * m.c.sin();
    let cos_theta = (m.beta.cos() - m.gamma.cos()) / (two * ca2);
    let sin_theta = sin_theta_cos_rho.hypot(sin_theta_sin_rho);
    Ok(CevianDecomposition {
        rho: sin_theta_sin_rho.atan2(sin_theta_cos_rho),
        theta: sin_theta.atan2(cos_theta),
        rho_thres: Some(bisector_threshold(m.tau, m.alpha)),
    })
}

/// Cleared residual of `tan(σ/2) = sin(c/2) sin ρ sin θ / (cos(c/2) + cos ρ)`.
pub fn median_area_residual<T: Real>(sigma: T, c: T, d: &CevianDecomposition<T>) -> T {
    let half = T::lit(0.5);
    let (ss2, cs2) = (half * sigma).sin_cos();
    let (sc2, cc2) = (half * c).sin_cos();
    (ss2 * (cc2 + d.rho.cos()) - cs2 * sc2 * d.rho.sin() * d.theta.sin()).abs()
}

/// Cleared residual of
/// `tan(τ/2) = −cos(α/2) sin ρ sin θ / (sin(α/2) + cos ρ sin θ)`.
pub fn bisector_perimeter_residual<T: Real>(tau: T, alpha: T, d: &CevianDecomposition<T>) -> T {
    let half = T::lit(0.5);
    let (st2, ct2) = (half * tau).sin_cos();
    let (sa2, ca2) = (half * alpha).sin_cos();
    let st = d.theta.sin();
    (st2 * (sa2 + d.rho.cos() * st) + ct2 * ca2 * d.rho.sin() * st).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolvedForm {
    /// `cos ψ` in angle coordinates from `(φ, τ, κ)`.
    AnglePsi,
    /// `cos η` in side coordinates from `(ξ, σ, κ)`.
    SideEta,
}

/// Closed-form cosine of the second varying coordinate on the level set of
/// perimeter (angle coordinates) or area (side coordinates).
///
/// * `AnglePsi`: with `Y = tan(φ/2) sin(τ/2) / sin(τ/2 − κ)`,
///   `cos ψ = (Y² − 1)/(Y² + 1)`.
/// * `SideEta`: with `Y = cot(ξ/2) sin(σ/2) / sin(κ − σ/2)`,
///   `cos η = (1 − Y²)/(1 + Y²)`.
pub fn solved_forms<T: Real>(kind: SolvedForm, x: T, tau_or_sigma: T, kappa: T) -> Result<T> {
    let half = T::lit(0.5);
    let one = T::one();
    let s2 = (half * tau_or_sigma).sin();
    let (num, den) = match kind {
        SolvedForm::AnglePsi => (
            (half * x).sin() * s2,
            (half * x).cos() * (half * tau_or_sigma - kappa).sin(),
        ),
        SolvedForm::SideEta => (
            (half * x).cos() * s2,
            (half * x).sin() * (kappa - half * tau_or_sigma).sin(),
        ),
    };
    if den == T::zero() {
        return Err(Error::InvalidArgument("solved form denominator vanishes".into()));
    }
    // (Y² ∓ 1)/(Y² ± 1) written with Y = num/den to stay finite for large Y.
    let (n2, d2) = (num * num, den * den);
    let value = match kind {
        SolvedForm::AnglePsi => (n2 - d2) / (n2 + d2),
        SolvedForm::SideEta => (d2 - n2) / (n2 + d2),
    };
    if !(value.abs() <= one + T::lit(1e-12)) {
        return Err(Error::OutOfDomain(value.as_f64()));
    }
    Ok(value.clamp_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{embed, CoordKind, CoordTriple};
    use crate::sphere::{metrics_from_vertices, sample_uniform_point, RngStream, UnitVec3};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn octant() -> TriangleMetrics<f64> {
        let e = |i: usize| {
            let mut a = [0.0; 3];
            a[i] = 1.0;
            UnitVec3::from_array(a).unwrap()
        };
        metrics_from_vertices(&e(0), &e(1), &e(2)).unwrap()
    }

    type Sampled = (UnitVec3<f64>, UnitVec3<f64>, UnitVec3<f64>, TriangleMetrics<f64>);

    fn random_triangles(n: usize, seed: u64) -> Vec<Sampled> {
        let mut rng = RngStream::new(seed, 0);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let a = sample_uniform_point(&mut rng);
            let b = sample_uniform_point(&mut rng);
            let c = sample_uniform_point(&mut rng);
            if let Ok(m) = metrics_from_vertices(&a, &b, &c) {
                out.push((a, b, c, m));
            }
        }
        out
    }

    #[test]
    fn octant_residuals_vanish() {
        assert!(identity_residuals(&octant()).max() < 1e-12);
    }

    #[test]
    fn random_triangles_satisfy_all_identities() {
        for (_, _, _, m) in random_triangles(2000, 11) {
            let r = identity_residuals(&m);
            assert!(r.max() < 1e-10, "{m:?}: {r:?}");
        }
    }

    #[test]
    fn perturbed_area_is_detected() {
        let mut m = octant();
        m.sigma += 1e-3;
        assert!(identity_residuals(&m).primal_half_side > 1e-4);
    }

    #[test]
    fn residuals_survive_relabeling() {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for (_, _, _, m) in random_triangles(200, 5) {
            for p in perms {
                assert!(identity_residuals(&m.relabel(p)).max() < 1e-10);
            }
        }
    }

    #[test]
    fn octant_median() {
        let m = octant();
        let d = median_decompose(&m).unwrap();
        assert!((d.rho - FRAC_PI_2).abs() < 1e-12);
        assert!((d.theta - FRAC_PI_2).abs() < 1e-12);
        assert!(median_area_residual(m.sigma, m.c, &d) < 1e-12);
    }

    #[test]
    fn isosceles_median_is_perpendicular() {
        let c = CoordTriple::<f64>::new(CoordKind::Side, 1.3, 1.3, 0.9);
        let m = embed(&c).unwrap();
        // b = c here; relabel so the two equal sides are a and b
        let m = m.relabel([1, 2, 0]);
        assert!((m.a - m.b).abs() < 1e-12);
        assert!((median_decompose(&m).unwrap().theta - FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn octant_bisector() {
        let m = octant();
        let d = bisector_decompose(&m).unwrap();
        assert!((d.rho - FRAC_PI_2).abs() < 1e-12);
        assert!((d.theta - FRAC_PI_2).abs() < 1e-12);
        assert!((d.rho_thres.unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert!(bisector_perimeter_residual(m.tau, m.alpha, &d) < 1e-12);
    }

    #[test]
    fn threshold_matches_arccos_form() {
        for (tau, alpha) in [(1.0_f64, 0.5_f64), (3.0, 2.0), (5.5, 1.0), (6.0, 3.0)] {
            let ct2 = (tau / 2.0_f64).cos();
            let sa2 = (alpha / 2.0_f64).sin();
            let direct = (-(ct2 + sa2) / (1.0 + ct2 * sa2)).acos();
            assert!((bisector_threshold(tau, alpha) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn decompositions_match_geometric_construction() {
        for (a, b, c, m) in random_triangles(1000, 99) {
            // median: foot is the midpoint of AB
            let p = UnitVec3::from_array(crate::sphere::v3::add(a.to_array(), b.to_array())).unwrap();
            let d = median_decompose(&m).unwrap();
            assert!((d.rho - p.arc_to(&c)).abs() < 1e-9);
            assert!((d.theta - p.angle_between(&b, &c)).abs() < 1e-9);
            assert!(median_area_residual(m.sigma, m.c, &d) < 1e-10);

            // bisector: foot is where the bisecting great circle crosses BC
            let tb = UnitVec3::from_array(a.cross(&b)).unwrap();
            let tc = UnitVec3::from_array(a.cross(&c)).unwrap();
            let plane = crate::sphere::v3::add(tb.to_array(), tc.to_array());
            let mut q = UnitVec3::from_array(crate::sphere::v3::cross(plane, b.cross(&c))).unwrap();
            if (b.arc_to(&q) + q.arc_to(&c) - m.a).abs() > 1e-9 {
                q = q.antipode();
            }
            let d = bisector_decompose(&m).unwrap();
            assert!(
                (d.rho - (PI - a.arc_to(&q))).abs() < 1e-9,
                "{} vs {}",
                d.rho,
                PI - a.arc_to(&q)
            );
            assert!((d.theta - q.angle_between(&c, &a)).abs() < 1e-9);
            assert!(bisector_perimeter_residual(m.tau, m.alpha, &d) < 1e-10);
            assert!(d.rho >= d.rho_thres.unwrap() - 1e-10);
        }
    }

    #[test]
    fn solved_forms_at_the_octant() {
        let v = solved_forms(SolvedForm::AnglePsi, FRAC_PI_2, 1.5 * PI, FRAC_PI_2).unwrap();
        assert!(v.abs() < 1e-15);
        let v = solved_forms(SolvedForm::SideEta, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn solved_forms_reproduce_embedded_triangles() {
        for (u, v, k) in [
            (0.4_f64, 1.1_f64, 0.8_f64),
            (2.0, 0.5, 1.5),
            (1.0, 2.5, 2.9),
            (2.8, 2.8, 0.3),
        ] {
            let m = embed(&CoordTriple::new(CoordKind::Angle, u, v, k)).unwrap();
            let cpsi = solved_forms(SolvedForm::AnglePsi, u, m.tau, k).unwrap();
            assert!((cpsi - v.cos()).abs() < 1e-10, "angle ({u}, {v}, {k})");
            let m = embed(&CoordTriple::new(CoordKind::Side, u, v, k)).unwrap();
            let ceta = solved_forms(SolvedForm::SideEta, u, m.sigma, k).unwrap();
            assert!((ceta - v.cos()).abs() < 1e-10, "side ({u}, {v}, {k})");
        }
    }

    #[test]
    fn vanishing_denominator_is_an_error() {
        assert!(solved_forms(SolvedForm::AnglePsi, 1.0, 2.0, 1.0).is_err());
    }
}
