//! Points on the unit sphere, primal and dual triangle construction, and the
//! six elements of a spherical triangle together with its area and perimeter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Minimum separation (radians) between vertices, and minimum cross-product
/// norm between poles, below which a triangle is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

pub(crate) mod v3 {
    use crate::scalar::Real;

    #[inline]
    pub fn dot<T: Real>(a: [T; 3], b: [T; 3]) -> T {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    #[inline]
    pub fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    #[inline]
    pub fn norm<T: Real>(a: [T; 3]) -> T {
        a[0].hypot(a[1]).hypot(a[2])
    }

    #[inline]
    pub fn scale<T: Real>(a: [T; 3], s: T) -> [T; 3] {
        [a[0] * s, a[1] * s, a[2] * s]
    }

    #[cfg(test)]
    pub fn add<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    #[inline]
    pub fn sub<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    #[inline]
    pub fn det<T: Real>(a: [T; 3], b: [T; 3], c: [T; 3]) -> T {
        dot(a, cross(b, c))
    }
}

/// A direction in R³ normalized onto the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec3<T> {
    x: T,
    y: T,
    z: T,
}

impl<T: Real> UnitVec3<T> {
    /// Normalizes `(x, y, z)`; `None` for the zero vector or non-finite input.
    pub fn normalize(x: T, y: T, z: T) -> Option<Self> {
        let n = v3::norm([x, y, z]);
        if !n.is_finite() || n <= T::min_positive_value() {
            return None;
        }
        Some(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn from_array(a: [T; 3]) -> Option<Self> {
        Self::normalize(a[0], a[1], a[2])
    }

    /// Builds a unit vector from polar angle and azimuth.
    pub fn from_spherical(polar: T, azimuth: T) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Self {
            x: sp * ca,
            y: sp * sa,
            z: cp,
        }
    }

    pub fn x(&self) -> T {
        self.x
    }

    pub fn y(&self) -> T {
        self.y
    }

    pub fn z(&self) -> T {
        self.z
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> T {
        v3::norm(self.to_array())
    }

    pub fn dot(&self, other: &Self) -> T {
        v3::dot(self.to_array(), other.to_array())
    }

    pub fn cross(&self, other: &Self) -> [T; 3] {
        v3::cross(self.to_array(), other.to_array())
    }

    pub fn antipode(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Great-circle distance, via `atan2(|p × q|, p · q)`.
    pub fn arc_to(&self, other: &Self) -> T {
        let c = self.cross(other);
        v3::norm(c).atan2(self.dot(other))
    }

    /// Angle at `self` between the arcs towards `p` and towards `q`
    /// (the dihedral angle between the planes `self, p` and `self, q`).
    pub fn angle_between(&self, p: &Self, q: &Self) -> T {
        let n1 = self.cross(p);
        let n2 = self.cross(q);
        v3::norm(v3::cross(n1, n2)).atan2(v3::dot(n1, n2))
    }
}

/// The six elements of a spherical triangle plus its area (spherical excess)
/// and perimeter. Side `a` is opposite angle `alpha` (vertex A), and so on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleMetrics<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub sigma: T,
    pub tau: T,
}

impl<T: Real> TriangleMetrics<T> {
    /// Assembles metrics from sides and angles; `sigma` and `tau` are derived.
    pub fn from_elements(sides: [T; 3], angles: [T; 3]) -> Self {
        let [a, b, c] = sides;
        let [alpha, beta, gamma] = angles;
        Self {
            a,
            b,
            c,
            alpha,
            beta,
            gamma,
            sigma: alpha + beta + gamma - T::PI(),
            tau: a + b + c,
        }
    }

    pub fn sides(&self) -> [T; 3] {
        [self.a, self.b, self.c]
    }

    pub fn angles(&self) -> [T; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    /// Relabels vertices so that the old vertex `perm[i]` becomes vertex `i`.
    pub fn relabel(&self, perm: [usize; 3]) -> Self {
        let s = self.sides();
        let g = self.angles();
        Self::from_elements(
            [s[perm[0]], s[perm[1]], s[perm[2]]],
            [g[perm[0]], g[perm[1]], g[perm[2]]],
        )
    }
}

/// Triangle elements for vertices `A`, `B`, `C`.
pub fn metrics_from_vertices<T: Real>(a: &UnitVec3<T>, b: &UnitVec3<T>, c: &UnitVec3<T>) -> Result<TriangleMetrics<T>> {
    let tol = T::lit(DEGENERACY_TOL);
    let pi = T::PI();
    let side_a = b.arc_to(c);
    let side_b = a.arc_to(c);
    let side_c = a.arc_to(b);
    for s in [side_a, side_b, side_c] {
        if !s.is_finite() {
            return Err(Error::DegenerateTriangle("non-finite vertex"));
        }
        if s < tol {
            return Err(Error::DegenerateTriangle("coincident vertices"));
        }
        if s > pi - tol {
            return Err(Error::DegenerateTriangle("antipodal vertices"));
        }
    }
    let alpha = a.angle_between(b, c);
    let beta = b.angle_between(c, a);
    let gamma = c.angle_between(a, b);
    Ok(TriangleMetrics::from_elements(
        [side_a, side_b, side_c],
        [alpha, beta, gamma],
    ))
}

/// Vertices of the dual triangle whose sides lie on the great circles with
/// poles `A'`, `B'`, `C'`: `A = B'×C'`, `B = A'×C'`, `C = A'×B'` (normalized).
pub fn dual_vertices<T: Real>(ap: &UnitVec3<T>, bp: &UnitVec3<T>, cp: &UnitVec3<T>) -> Result<[UnitVec3<T>; 3]> {
    let tol = T::lit(DEGENERACY_TOL);
    let make = |p: &UnitVec3<T>, q: &UnitVec3<T>, what: &'static str| {
        let x = p.cross(q);
        if !(v3::norm(x) >= tol) {
            return Err(Error::DegenerateDual(what));
        }
        UnitVec3::from_array(x).ok_or(Error::DegenerateDual(what))
    };
    Ok([
        make(bp, cp, "B' and C' parallel")?,
        make(ap, cp, "A' and C' parallel")?,
        make(ap, bp, "A' and B' parallel")?,
    ])
}

pub fn dual_metrics_from_poles<T: Real>(
    ap: &UnitVec3<T>,
    bp: &UnitVec3<T>,
    cp: &UnitVec3<T>,
) -> Result<TriangleMetrics<T>> {
    let [a, b, c] = dual_vertices(ap, bp, cp)?;
    metrics_from_vertices(&a, &b, &c).map_err(|_| Error::DegenerateDual("poles on a common great circle"))
}

/// Reproducible random source identified by `(seed, stream)`.
///
/// Backed by ChaCha8; the stream id selects an independent ChaCha stream, and
/// [`RngStream::chunk`] addresses disjoint segments of that stream so that
/// work split across threads stays deterministic.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

/// Words reserved per chunk; far more than any chunk consumes.
const CHUNK_WORDS: u128 = 1 << 40;

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// The `index`-th disjoint segment of this stream.
    pub fn chunk(&self, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng.set_word_pos(CHUNK_WORDS * u128::from(index));
        Self {
            seed: self.seed,
            stream: self.stream,
            rng,
        }
    }

    /// Uniform on [0, 1).
    pub fn uniform<T: Real>(&mut self) -> T {
        T::lit(self.rng.random::<f64>())
    }

    pub fn normal<T: Real>(&mut self) -> T {
        T::lit(self.rng.sample::<f64, _>(StandardNormal))
    }
}

/// Uniform point on the sphere from a normalized Gaussian triple.
pub fn sample_uniform_point<T: Real>(rng: &mut RngStream) -> UnitVec3<T> {
    loop {
        let (x, y, z) = (rng.normal::<T>(), rng.normal::<T>(), rng.normal::<T>());
        if let Some(p) = UnitVec3::normalize(x, y, z) {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn e(i: usize) -> UnitVec3<f64> {
        let mut a = [0.0; 3];
        a[i] = 1.0;
        UnitVec3::from_array(a).unwrap()
    }

    #[test]
    fn octant_triangle() {
        let m = metrics_from_vertices(&e(0), &e(1), &e(2)).unwrap();
        for x in m.sides().into_iter().chain(m.angles()) {
            assert!((x - FRAC_PI_2).abs() < 1e-15);
        }
        assert!((m.sigma - FRAC_PI_2).abs() < 1e-15);
        assert!((m.tau - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn coincident_and_antipodal_vertices_are_rejected() {
        assert!(matches!(
            metrics_from_vertices(&e(0), &e(0), &e(2)),
            Err(Error::DegenerateTriangle(_))
        ));
        assert!(matches!(
            metrics_from_vertices(&e(0), &e(0).antipode(), &e(2)),
            Err(Error::DegenerateTriangle(_))
        ));
    }

    #[test]
    fn dual_vertex_is_cross_product_of_poles() {
        let [a, _, _] = dual_vertices(&e(2), &e(0), &e(1)).unwrap();
        assert!((a.z() - 1.0).abs() < 1e-15 && a.x().abs() < 1e-15 && a.y().abs() < 1e-15);
        assert!(matches!(
            dual_metrics_from_poles(&e(0), &e(0), &e(1)),
            Err(Error::DegenerateDual(_))
        ));
    }

    #[test]
    fn samples_are_unit_and_reproducible() {
        let mut r1 = RngStream::new(7, 3);
        let mut r2 = RngStream::new(7, 3);
        for _ in 0..1000 {
            let p: UnitVec3<f64> = sample_uniform_point(&mut r1);
            let q: UnitVec3<f64> = sample_uniform_point(&mut r2);
            assert_eq!(p, q);
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
        let mut other = RngStream::new(7, 4);
        let p: UnitVec3<f64> = sample_uniform_point(&mut other);
        let mut r3 = RngStream::new(7, 3);
        let q: UnitVec3<f64> = sample_uniform_point(&mut r3);
        assert_ne!(p, q);
    }

    #[test]
    fn chunks_do_not_overlap() {
        let base = RngStream::new(1, 0);
        let mut c0 = base.chunk(0);
        let mut c1 = base.chunk(1);
        let a: Vec<f64> = (0..16).map(|_| c0.uniform()).collect();
        let b: Vec<f64> = (0..16).map(|_| c1.uniform()).collect();
        assert_ne!(a, b);
        let mut again = base.chunk(1);
        let c: Vec<f64> = (0..16).map(|_| again.uniform()).collect();
        assert_eq!(b, c);
    }

    #[test]
    fn arc_length_is_accurate_near_zero_and_pi() {
        let p = UnitVec3::from_spherical(FRAC_PI_2, 0.0);
        let q = UnitVec3::from_spherical(FRAC_PI_2, 1e-12);
        assert!((p.arc_to(&q) - 1e-12).abs() < 1e-24);
        let r = UnitVec3::from_spherical(FRAC_PI_2, PI - 1e-12);
        assert!((p.arc_to(&r) - (PI - 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn f32_octant() {
        let a = UnitVec3::<f32>::normalize(1.0, 0.0, 0.0).unwrap();
        let b = UnitVec3::<f32>::normalize(0.0, 1.0, 0.0).unwrap();
        let c = UnitVec3::<f32>::normalize(0.0, 0.0, 1.0).unwrap();
        let m = metrics_from_vertices(&a, &b, &c).unwrap();
        assert!((m.sigma - std::f32::consts::FRAC_PI_2).abs() < 1e-6);
    }
}
