//! Exact and simulated distributions of the area and perimeter of random
//! spherical triangles.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to one of the two.

// comparisons are negated on purpose so that NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coords;
pub mod distributions;
pub mod elliptic;
pub mod error;
pub mod identities;
pub mod montecarlo;
pub mod quadrature;
pub mod scalar;
pub mod sphere;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub use coords::{embed, embed_vertices, jacobian_fd_check, CoordKind, CoordTriple};
pub use distributions::{
    area_cdf, area_cdf_kernel, area_density, conditional_cdf, conditional_density, density_via_double_integral,
    elliptic_identity_gap, perimeter_cdf, perimeter_density, tabulate, CdfTable, ConditionalKind, DensityCurve,
    DensityKind, DoubleIntegralKind, EllipticIdentity,
};
pub use elliptic::{ellip_e, ellip_k, ellip_ke, EllipticModulus};
pub use identities::{
    bisector_decompose, identity_residuals, median_decompose, CevianDecomposition, IdentityResiduals,
};
pub use montecarlo::{
    ks_distance, region_coverage, sample_batch, summarize, BatchSummary, EmpiricalCdf, SampleBatch, SampleKind,
};
pub use quadrature::{integrate, try_integrate, QuadratureResult, QuadratureSpec};
pub use sphere::{
    dual_metrics_from_poles, dual_vertices, metrics_from_vertices, sample_uniform_point, RngStream, TriangleMetrics,
    UnitVec3,
};

pub type UnitVec3F64 = UnitVec3<f64>;
pub type UnitVec3F32 = UnitVec3<f32>;
pub type TriangleMetricsF64 = TriangleMetrics<f64>;
pub type TriangleMetricsF32 = TriangleMetrics<f32>;
pub type QuadratureSpecF64 = QuadratureSpec<f64>;
pub type QuadratureSpecF32 = QuadratureSpec<f32>;
pub type CoordTripleF64 = CoordTriple<f64>;
pub type CoordTripleF32 = CoordTriple<f32>;
pub type DensityCurveF64 = DensityCurve<f64>;
pub type DensityCurveF32 = DensityCurve<f32>;
pub type SampleBatchF64 = SampleBatch<f64>;
pub type SampleBatchF32 = SampleBatch<f32>;
pub type CdfTableF64 = CdfTable<f64>;
pub type CdfTableF32 = CdfTable<f32>;
