//! The four coordinate systems used to parametrize a triangle by two varying
//! quantities and one fixed one.
//!
//! All four place `A = (1, 0, 0)` and put `B` on the equator.
//!
//! | kind   | `u` | `v` | `kappa` | fixes          |
//! |--------|-----|-----|---------|----------------|
//! | Primal | θ   | ρ   | c       | α = θ, b = ρ   |
//! | Dual   | ρ   | θ   | α       | c = ρ, β = θ   |
//! | Angle  | φ   | ψ   | c       | α = φ, β = ψ   |
//! | Side   | ξ   | η   | α       | c = ξ, b = η   |

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sphere::{metrics_from_vertices, v3, TriangleMetrics, UnitVec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoordKind {
    Primal,
    Dual,
    Angle,
    Side,
}

impl CoordKind {
    pub const ALL: [CoordKind; 4] = [CoordKind::Primal, CoordKind::Dual, CoordKind::Angle, CoordKind::Side];
}

/// Two varying parameters `(u, v)` plus the fixed one, interpreted per `kind`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordTriple<T> {
    pub kind: CoordKind,
    pub u: T,
    pub v: T,
    pub kappa: T,
}

impl<T: Real> CoordTriple<T> {
    pub fn new(kind: CoordKind, u: T, v: T, kappa: T) -> Self {
        Self { kind, u, v, kappa }
    }

    pub fn is_interior(&self) -> bool {
        let open = |x: T| x > T::zero() && x < T::PI();
        open(self.u) && open(self.v) && open(self.kappa)
    }

    fn with_uv(&self, u: T, v: T) -> Self {
        Self { u, v, ..*self }
    }
}

/// A 3×3 rotation matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3<T> {
    m: [[T; 3]; 3],
}

impl<T: Real> Rotation3<T> {
    /// Rotation about the x axis carrying `(0, 1, 0)` towards `(0, 0, 1)`.
    pub fn about_x(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        let (o, l) = (T::zero(), T::one());
        Self {
            m: [[l, o, o], [o, c, -s], [o, s, c]],
        }
    }

    /// Rotation fixing the equatorial vector `(cos λ, sin λ, 0)` and carrying
    /// `(sin λ, −cos λ, 0)` towards `(0, 0, 1)` by `angle`.
    pub fn about_equatorial(lambda: T, angle: T) -> Self {
        let (sl, cl) = lambda.sin_cos();
        let (sa, ca) = angle.sin_cos();
        let one = T::one();
        Self {
            m: [
                [cl * cl + (one - cl * cl) * ca, cl * sl * (one - ca), -sl * sa],
                [cl * sl * (one - ca), sl * sl + (one - sl * sl) * ca, cl * sa],
                [sl * sa, -cl * sa, ca],
            ],
        }
    }

    /// Rodrigues rotation by `angle` (right-handed) about the unit `axis`.
    pub fn axis_angle(axis: &UnitVec3<T>, angle: T) -> Self {
        let [x, y, z] = axis.to_array();
        let (s, c) = angle.sin_cos();
        let t = T::one() - c;
        Self {
            m: [
                [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
                [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
                [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
            ],
        }
    }

    pub fn entries(&self) -> [[T; 3]; 3] {
        self.m
    }

    pub fn apply(&self, p: [T; 3]) -> [T; 3] {
        [v3::dot(self.m[0], p), v3::dot(self.m[1], p), v3::dot(self.m[2], p)]
    }

    pub fn transpose(&self) -> Self {
        let m = self.m;
        Self {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    pub fn determinant(&self) -> T {
        v3::det(self.m[0], self.m[1], self.m[2])
    }

    /// Largest entry of `|MᵀM − I|`.
    pub fn orthogonality_defect(&self) -> T {
        let t = self.transpose();
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                let col_i = t.m[i];
                let col_j = t.m[j];
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((v3::dot(col_i, col_j) - target).abs());
            }
        }
        worst
    }
}

fn unit<T: Real>(p: [T; 3]) -> Result<UnitVec3<T>> {
    UnitVec3::from_array(p).ok_or(Error::NoSuchTriangle)
}

/// Great-circle normal `W` of side `BC` for a dual-style construction with `B`
/// at longitude `lambda` and angle `angle` at `B`.
fn side_normal<T: Real>(lambda: T, angle: T) -> [T; 3] {
    let (sl, cl) = lambda.sin_cos();
    let b = [cl, sl, T::zero()];
    let tilted = Rotation3::about_equatorial(lambda, angle).apply([sl, -cl, T::zero()]);
    v3::cross(b, tilted)
}

/// Normal of the great circle through `A = (1, 0, 0)` making angle `angle`
/// with the equator.
fn normal_through_a<T: Real>(angle: T) -> [T; 3] {
    let (s, c) = angle.sin_cos();
    [T::zero(), -s, c]
}

/// Vertices `[A, B, C]` of the triangle described by `coords`.
pub fn embed_vertices<T: Real>(coords: &CoordTriple<T>) -> Result<[UnitVec3<T>; 3]> {
    if !coords.is_interior() {
        return Err(Error::NoSuchTriangle);
    }
    let (o, l) = (T::zero(), T::one());
    let a = unit([l, o, o])?;
    let equator = |lon: T| {
        let (s, c) = lon.sin_cos();
        unit([c, s, o])
    };
    let (u, v, k) = (coords.u, coords.v, coords.kappa);
    let (b, c) = match coords.kind {
        CoordKind::Primal => {
            let (sr, cr) = v.sin_cos();
            (equator(k)?, unit(Rotation3::about_x(u).apply([cr, sr, o]))?)
        }
        CoordKind::Side => {
            let (se, ce) = v.sin_cos();
            (equator(u)?, unit(Rotation3::about_x(k).apply([ce, se, o]))?)
        }
        CoordKind::Dual => {
            let vv = normal_through_a(k);
            let w = side_normal(u, v);
            (equator(u)?, unit(v3::cross(vv, w))?)
        }
        CoordKind::Angle => {
            let vv = normal_through_a(u);
            let w = side_normal(k, v);
            (equator(k)?, unit(v3::cross(vv, w))?)
        }
    };
    Ok([a, b, c])
}

/// Triangle metrics of the embedded triangle. Every interior triple describes
/// a genuine triangle; [`Error::NoSuchTriangle`] is returned for triples on or
/// outside the boundary and for configurations too close to degenerate to
/// measure.
pub fn embed<T: Real>(coords: &CoordTriple<T>) -> Result<TriangleMetrics<T>> {
    let [a, b, c] = embed_vertices(coords)?;
    metrics_from_vertices(&a, &b, &c).map_err(|_| Error::NoSuchTriangle)
}

/// Recovers `(u, v, kappa)` of the given kind from a triangle.
pub fn defining_parameters<T: Real>(kind: CoordKind, m: &TriangleMetrics<T>) -> (T, T, T) {
    match kind {
        CoordKind::Primal => (m.alpha, m.b, m.c),
        CoordKind::Dual => (m.c, m.beta, m.alpha),
        CoordKind::Angle => (m.alpha, m.beta, m.c),
        CoordKind::Side => (m.c, m.b, m.alpha),
    }
}

/// Closed-form area element (Jacobian determinant at unit radius).
///
/// Returns 0 on the boundary of the parameter square and outside it.
pub fn area_element<T: Real>(coords: &CoordTriple<T>) -> T {
    let pi = T::PI();
    let inside = |x: T| x >= T::zero() && x <= pi;
    if !(inside(coords.u) && inside(coords.v) && inside(coords.kappa)) {
        return T::zero();
    }
    let (u, v, k) = (coords.u, coords.v, coords.kappa);
    let value = match coords.kind {
        CoordKind::Primal => v.sin(),
        CoordKind::Dual => v.sin(),
        CoordKind::Angle => {
            let (sp, cp) = u.sin_cos();
            let (ss, cs) = v.sin_cos();
            let (sk, ck) = k.sin_cos();
            let lead = sp * cs + ck * cp * ss;
            rational_jacobian(sk, sp, ss, lead)
        }
        CoordKind::Side => {
            let (sx, cx) = u.sin_cos();
            let (se, ce) = v.sin_cos();
            let (sk, ck) = k.sin_cos();
            let lead = sx * ce - ck * cx * se;
            rational_jacobian(sk, sx, se, lead)
        }
    };
    value.max(T::zero())
}

/// `sin²κ sin u sin v [lead² + sin²κ sin²v] / (1 − q²)^{5/2}`, where `q` is
/// the cosine of the third angle (angle coordinates, up to sign) or of the
/// third side (side coordinates). Since `1 − q² = lead² + sin²κ sin²v`
/// identically, this is `sin²κ sin u sin v / (lead² + sin²κ sin²v)^{3/2}`,
/// which stays accurate where `q → ±1`.
fn rational_jacobian<T: Real>(sk: T, su: T, sv: T, lead: T) -> T {
    let den = lead * lead + sk * sk * sv * sv;
    if !(den > T::zero()) {
        return T::zero();
    }
    sk * sk * su * sv / (den * den.sqrt())
}

/// The point whose image of the `(u, v)` square carries the area element:
/// `C` (primal), `−W` (dual), `−C` (angle), `B×C/‖B×C‖` (side).
pub fn jacobian_point<T: Real>(coords: &CoordTriple<T>) -> Result<[T; 3]> {
    match coords.kind {
        CoordKind::Primal => Ok(embed_vertices(coords)?[2].to_array()),
        CoordKind::Dual => Ok(v3::scale(side_normal(coords.u, coords.v), -T::one())),
        CoordKind::Angle => Ok(embed_vertices(coords)?[2].antipode().to_array()),
        CoordKind::Side => {
            let [_, b, c] = embed_vertices(coords)?;
            Ok(unit(b.cross(&c))?.to_array())
        }
    }
}

/// Relative error between [`area_element`] and `|det[P, ∂P/∂u, ∂P/∂v]|`
/// computed by central differences with step `h`.
pub fn jacobian_fd_check<T: Real>(coords: &CoordTriple<T>, h: T) -> Result<T> {
    if !(h >= T::lit(1e-6) && h <= T::lit(1e-3)) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step {h} outside [1e-6, 1e-3]"
        )));
    }
    let (u, v) = (coords.u, coords.v);
    let p = jacobian_point(coords)?;
    let pu_plus = jacobian_point(&coords.with_uv(u + h, v))?;
    let pu_minus = jacobian_point(&coords.with_uv(u - h, v))?;
    let pv_plus = jacobian_point(&coords.with_uv(u, v + h))?;
    let pv_minus = jacobian_point(&coords.with_uv(u, v - h))?;
    let two_h = h + h;
    let du = v3::scale(v3::sub(pu_plus, pu_minus), T::one() / two_h);
    let dv = v3::scale(v3::sub(pv_plus, pv_minus), T::one() / two_h);
    let numeric = v3::det(p, du, dv).abs();
    let analytic = area_element(coords);
    Ok((numeric - analytic).abs() / analytic.abs().max(T::min_positive_value()))
}
