//! Simulation of random triangles as an independent check on the analytic
//! distributions.
//!
//! Work is split into fixed-size chunks, chunk `i` drawing from segment `i`
//! of the caller's [`RngStream`], and results are concatenated in chunk
//! order; a batch is therefore identical whatever the number of threads.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::coords::{embed, CoordKind, CoordTriple};
use crate::distributions::{conditional_cdf_with, CdfTable, ConditionalKind, KernelParams};
use crate::error::{Error, Result};
use crate::identities::{bisector_decompose, median_decompose};
use crate::scalar::Real;
use crate::sphere::{
    dual_metrics_from_poles, metrics_from_vertices, sample_uniform_point, RngStream, TriangleMetrics, UnitVec3,
};

const CHUNK: usize = 16_384;

type Draw<T> = ((T, T), [T; 5]);

/// Margin below which a point is considered to lie on a region boundary.
pub const REGION_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleKind {
    /// Three independent uniform vertices.
    Primal,
    /// Three independent uniform poles of the sides.
    Dual,
    /// `A = (1, 0, 0)`, `B = (cos κ, sin κ, 0)`, `C` uniform; so `c = κ`.
    PrimalGivenSide,
    /// Angle `α = κ` at `A`, with `c` uniform on `[0, π]` and `β` drawn with
    /// density `sin β / 2`.
    DualGivenAngle,
}

impl SampleKind {
    pub const ALL: [Self; 4] = [Self::Primal, Self::Dual, Self::PrimalGivenSide, Self::DualGivenAngle];

    pub fn is_conditional(self) -> bool {
        matches!(self, Self::PrimalGivenSide | Self::DualGivenAngle)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Primal => "primal",
            Self::Dual => "dual",
            Self::PrimalGivenSide => "primal-given-side",
            Self::DualGivenAngle => "dual-given-angle",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Sampler whose coordinates carry the region test of `kind`.
    pub fn for_conditional(kind: ConditionalKind) -> Self {
        if kind.conditions_on_side() {
            Self::PrimalGivenSide
        } else {
            Self::DualGivenAngle
        }
    }
}

/// Area and perimeter of `n` sampled triangles plus the coordinates used by
/// the region tests:
///
/// * primal samplers: `[α, b, β, median angle, median length]`, the median
///   drawn from `C` to the midpoint of `AB`;
/// * dual samplers: `[c, β, b, bisector ρ, bisector angle]`, the bisector
///   of `α`.
///
/// Coordinates that cannot be formed for a near-degenerate triangle are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch<T> {
    pub kind: SampleKind,
    pub kappa: Option<T>,
    pub stats: Vec<(T, T)>,
    pub coords: Vec<[T; 5]>,
    pub seed: u64,
    pub stream: u64,
}

impl<T: Real> SampleBatch<T> {
    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }

    pub fn areas(&self) -> Vec<T> {
        self.stats.iter().map(|s| s.0).collect()
    }

    pub fn perimeters(&self) -> Vec<T> {
        self.stats.iter().map(|s| s.1).collect()
    }
}

pub fn sample_batch<T: Real>(kind: SampleKind, kappa: T, n: usize, rng: &RngStream) -> Result<SampleBatch<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample size must be at least 1".into()));
    }
    if kind.is_conditional() && !(kappa > T::zero() && kappa < T::PI()) {
        return Err(Error::InvalidArgument(format!(
            "conditioning value {kappa} outside (0, π)"
        )));
    }
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<Draw<T>>> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.chunk(i as u64);
            let len = CHUNK.min(n - i * CHUNK);
            (0..len).map(|_| draw(kind, kappa, &mut r)).collect()
        })
        .collect();
    let mut stats = Vec::with_capacity(n);
    let mut coords = Vec::with_capacity(n);
    for (s, c) in parts.into_iter().flatten() {
        stats.push(s);
        coords.push(c);
    }
    Ok(SampleBatch {
        kind,
        kappa: kind.is_conditional().then_some(kappa),
        stats,
        coords,
        seed: rng.seed(),
        stream: rng.stream(),
    })
}

fn draw<T: Real>(kind: SampleKind, kappa: T, rng: &mut RngStream) -> Draw<T> {
    let m = draw_metrics(kind, kappa, rng);
    ((m.sigma, m.tau), region_coords(kind, &m))
}

/// One triangle; degenerate draws (probability zero up to rounding) are
/// redrawn.
fn draw_metrics<T: Real>(kind: SampleKind, kappa: T, rng: &mut RngStream) -> TriangleMetrics<T> {
    loop {
        let m = match kind {
            SampleKind::Primal => {
                let [a, b, c] = [(); 3].map(|_| sample_uniform_point::<T>(rng));
                metrics_from_vertices(&a, &b, &c)
            }
            SampleKind::Dual => {
                let [a, b, c] = [(); 3].map(|_| sample_uniform_point::<T>(rng));
                dual_metrics_from_poles(&a, &b, &c)
            }
            SampleKind::PrimalGivenSide => {
                let (s, c) = kappa.sin_cos();
                let a = UnitVec3::from_array([T::one(), T::zero(), T::zero()]).expect("unit vector");
                let b = UnitVec3::from_array([c, s, T::zero()]).expect("unit vector");
                metrics_from_vertices(&a, &b, &sample_uniform_point(rng))
            }
            SampleKind::DualGivenAngle => {
                let side = T::PI() * rng.uniform::<T>();
                let angle = (T::one() - T::lit(2.0) * rng.uniform::<T>()).clamp_unit().acos();
                embed(&CoordTriple::new(CoordKind::Dual, side, angle, kappa))
            }
        };
        if let Ok(m) = m {
            return m;
        }
    }
}

fn region_coords<T: Real>(kind: SampleKind, m: &TriangleMetrics<T>) -> [T; 5] {
    let nan = T::nan();
    match kind {
        SampleKind::Primal | SampleKind::PrimalGivenSide => {
            let (t, r) = median_decompose(m).map(|d| (d.theta, d.rho)).unwrap_or((nan, nan));
            [m.alpha, m.b, m.beta, t, r]
        }
        SampleKind::Dual | SampleKind::DualGivenAngle => {
            let (r, t) = bisector_decompose(m).map(|d| (d.rho, d.theta)).unwrap_or((nan, nan));
            [m.c, m.beta, m.b, r, t]
        }
    }
}

/// `(u, v)` of a conditional kind's region, read from a sample's coordinates.
pub fn region_point<T: Real>(kind: ConditionalKind, coords: &[T; 5]) -> (T, T) {
    let [p, q, r, s, t] = *coords;
    match kind {
        ConditionalKind::AreaGivenSide => (p, q),
        ConditionalKind::PerimeterGivenSide => (q, p),
        ConditionalKind::AreaMedian => (s, t),
        ConditionalKind::PerimeterAngleCoords => (p, r),
        ConditionalKind::PerimeterGivenAngle => (p, q),
        ConditionalKind::AreaGivenAngle => (q, p),
        ConditionalKind::PerimeterBisector => (s, t),
        ConditionalKind::AreaSideCoords => (p, r),
    }
}

/// Counts samples whose position relative to the region boundary contradicts
/// their statistic: at most `limit` yet clearly outside, or above `limit` yet
/// clearly inside. Points within [`REGION_GUARD`] of the boundary, and the
/// rare sample whose cevian could not be formed, are not counted.
pub fn region_coverage<T: Real>(kind: ConditionalKind, kappa: T, limit: T, n: usize, rng: &RngStream) -> Result<usize> {
    let batch = sample_batch(SampleKind::for_conditional(kind), kappa, n, rng)?;
    region_violations(kind, &batch, limit)
}

/// [`region_coverage`] on an existing batch from the matching sampler.
pub fn region_violations<T: Real>(kind: ConditionalKind, batch: &SampleBatch<T>, limit: T) -> Result<usize> {
    if batch.kind != SampleKind::for_conditional(kind) {
        return Err(Error::InvalidArgument(format!(
            "{kind:?} needs a {:?} batch, got {:?}",
            SampleKind::for_conditional(kind),
            batch.kind
        )));
    }
    let kappa = batch
        .kappa
        .ok_or_else(|| Error::InvalidArgument("batch has no conditioning value".into()))?;
    let params = KernelParams::new(kind, limit, kappa)?;
    let guard = T::lit(REGION_GUARD);
    let count = batch
        .stats
        .par_iter()
        .zip(&batch.coords)
        .filter(|(stat, coords)| {
            let (u, v) = region_point(kind, coords);
            if u.is_nan() || v.is_nan() {
                return false;
            }
            let value = if kind.is_area() { stat.0 } else { stat.1 };
            let margin = params.margin(u, v);
            if value <= limit {
                margin < -guard
            } else {
                margin > guard
            }
        })
        .count();
    Ok(count)
}

/// Right-continuous empirical distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf<T> {
    sorted: Vec<T>,
}

impl<T: Real> EmpiricalCdf<T> {
    pub fn new(mut values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empirical distribution of no samples".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidArgument("NaN sample".into()));
        }
        values.par_sort_unstable_by(|a, b| a.partial_cmp(b).expect("no NaN"));
        Ok(Self { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    /// Fraction of samples `≤ x`.
    pub fn eval(&self, x: T) -> T {
        let rank = self.sorted.partition_point(|&v| v <= x);
        T::lit(rank as f64 / self.sorted.len() as f64)
    }
}

/// `max |F_n(x_i) − F(x_i)|` over the sample points `x_i`.
pub fn ks_distance<T: Real, F: Fn(T) -> T + Sync>(emp: &EmpiricalCdf<T>, analytic: F) -> T {
    let n = emp.sorted.len();
    let inv = T::one() / T::lit(n as f64);
    // rank of x_i among ties is the index past its last copy
    emp.sorted
        .par_iter()
        .enumerate()
        .filter(|&(i, &x)| i + 1 == n || emp.sorted[i + 1] > x)
        .map(|(i, &x)| (T::lit((i + 1) as f64) * inv - analytic(x)).abs())
        .reduce(T::zero, T::max)
}

/// `max |F_a(x) − F_b(x)|` over the pooled sample points.
pub fn ks_two_sample<T: Real>(a: &EmpiricalCdf<T>, b: &EmpiricalCdf<T>) -> T {
    let (na, nb) = (T::lit(a.len() as f64), T::lit(b.len() as f64));
    let (mut i, mut j) = (0usize, 0usize);
    let mut worst = T::zero();
    while i < a.sorted.len() || j < b.sorted.len() {
        let x = match (a.sorted.get(i), b.sorted.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => break,
        };
        while i < a.sorted.len() && a.sorted[i] <= x {
            i += 1;
        }
        while j < b.sorted.len() && b.sorted[j] <= x {
            j += 1;
        }
        worst = worst.max((T::lit(i as f64) / na - T::lit(j as f64) / nb).abs());
    }
    worst
}

/// One row of the batch summary CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary<T> {
    pub kind: SampleKind,
    pub kappa: Option<T>,
    pub n: usize,
    pub seed: u64,
    pub mean_sigma: T,
    pub mean_tau: T,
    pub ks_area: T,
    pub ks_perimeter: T,
}

pub const SUMMARY_HEADER: &str = "kind,kappa,n,seed,mean_sigma,mean_tau,ks_area,ks_perimeter";

impl<T: Real> BatchSummary<T> {
    pub fn csv_row(&self) -> String {
        let kappa = self.kappa.map(|k| format!("{:.16e}", k.as_f64())).unwrap_or_default();
        let mut row = String::new();
        let _ = write!(
            row,
            "{},{},{},{},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.kind.name(),
            kappa,
            self.n,
            self.seed,
            self.mean_sigma.as_f64(),
            self.mean_tau.as_f64(),
            self.ks_area.as_f64(),
            self.ks_perimeter.as_f64(),
        );
        row
    }
}

/// Means and KS distances of a batch against the exact distribution of its
/// kind. Dual batches are compared through `σ_dual ~ 2π − τ` and
/// `τ_dual ~ 2π − σ`; conditional batches against the single-integral
/// conditional distributions, tabulated on `intervals` segments.
pub fn summarize<T: Real>(batch: &SampleBatch<T>, intervals: usize) -> Result<BatchSummary<T>> {
    let n = T::lit(batch.len() as f64);
    let (sum_s, sum_t) = batch
        .stats
        .iter()
        .fold((T::zero(), T::zero()), |acc, s| (acc.0 + s.0, acc.1 + s.1));
    let areas = EmpiricalCdf::new(batch.areas())?;
    let perimeters = EmpiricalCdf::new(batch.perimeters())?;
    let two_pi = T::two_pi();
    let (ks_area, ks_perimeter) = match batch.kind {
        SampleKind::Primal => {
            let a = CdfTable::<T>::area(intervals)?;
            let p = CdfTable::<T>::perimeter(intervals)?;
            (
                ks_distance(&areas, |x| a.eval(x)),
                ks_distance(&perimeters, |x| p.eval(x)),
            )
        }
        SampleKind::Dual => {
            let a = CdfTable::<T>::area(intervals)?;
            let p = CdfTable::<T>::perimeter(intervals)?;
            (
                ks_distance(&areas, |x| T::one() - p.eval(two_pi - x)),
                ks_distance(&perimeters, |x| T::one() - a.eval(two_pi - x)),
            )
        }
        SampleKind::PrimalGivenSide | SampleKind::DualGivenAngle => {
            let kappa = batch.kappa.unwrap_or(T::zero());
            let (ka, kp) = if batch.kind == SampleKind::PrimalGivenSide {
                (ConditionalKind::AreaGivenSide, ConditionalKind::PerimeterGivenSide)
            } else {
                (ConditionalKind::AreaGivenAngle, ConditionalKind::PerimeterGivenAngle)
            };
            let a = CdfTable::from_fn(intervals, |x| conditional_cdf_with(ka, x, kappa, 1e-10))?;
            let p = CdfTable::from_fn(intervals, |x| conditional_cdf_with(kp, x, kappa, 1e-10))?;
            (
                ks_distance(&areas, |x| a.eval(x)),
                ks_distance(&perimeters, |x| p.eval(x)),
            )
        }
    };
    Ok(BatchSummary {
        kind: batch.kind,
        kappa: batch.kappa,
        n: batch.len(),
        seed: batch.seed,
        mean_sigma: sum_s / n,
        mean_tau: sum_t / n,
        ks_area,
        ks_perimeter,
    })
}
