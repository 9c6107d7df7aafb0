//! Tabulated curves and their CSV form.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DensityKind {
    AreaPdf,
    AreaCdf,
    PerimeterPdf,
    PerimeterCdf,
    Conditional,
}

/// Values of one function on an increasing grid inside `[0, 2π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve<T> {
    xs: Vec<T>,
    values: Vec<T>,
    kind: DensityKind,
}

impl<T: Real> DensityCurve<T> {
    pub fn new(xs: Vec<T>, values: Vec<T>, kind: DensityKind) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "{} grid points but {} values",
                xs.len(),
                values.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("grid is not strictly increasing".into()));
        }
        if xs.iter().any(|&x| !(x >= T::zero() && x <= T::two_pi())) {
            return Err(Error::InvalidArgument("grid leaves [0, 2π]".into()));
        }
        if let Some(v) = values.iter().find(|&&v| !(v >= T::lit(-1e-12))) {
            return Err(Error::InvalidArgument(format!("negative or NaN value {v}")));
        }
        Ok(Self { xs, values, kind })
    }

    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    /// `x,value` header and one row per point, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for (x, v) in self.xs.iter().zip(&self.values) {
            let _ = writeln!(out, "{:.16e},{:.16e}", x.as_f64(), v.as_f64());
        }
        out
    }

    pub fn from_csv(text: &str, kind: DensityKind) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("x,value") {
            return Err(Error::InvalidArgument("missing `x,value` header".into()));
        }
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = || Error::InvalidArgument(format!("malformed row {}: {line:?}", n + 2));
            let (x, v) = line.split_once(',').ok_or_else(bad)?;
            let x: f64 = x.trim().parse().map_err(|_| bad())?;
            let v: f64 = v.trim().parse().map_err(|_| bad())?;
            xs.push(T::lit(x));
            values.push(T::lit(v));
        }
        Self::new(xs, values, kind)
    }
}

/// Evaluates `f` on `xs` in parallel; output order follows `xs`.
pub fn tabulate<T, F>(kind: DensityKind, xs: Vec<T>, f: F) -> Result<DensityCurve<T>>
where
    T: Real,
    F: Fn(T) -> Result<T> + Sync,
{
    let values = xs.par_iter().map(|&x| f(x)).collect::<Result<Vec<T>>>()?;
    DensityCurve::new(xs, values, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::area_density;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| 0.1 + 6.0 * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let curve = tabulate(DensityKind::AreaPdf, grid(50), |x| Ok(area_density(x))).unwrap();
        let text = curve.to_csv();
        assert!(text.starts_with("x,value\n"));
        assert_eq!(text.lines().count(), 51);
        let back = DensityCurve::<f64>::from_csv(&text, DensityKind::AreaPdf).unwrap();
        assert_eq!(back, curve);
    }

    #[test]
    fn order_follows_grid() {
        let xs = grid(200);
        let curve = tabulate(DensityKind::Conditional, xs.clone(), |x| Ok(x * 0.1)).unwrap();
        for (x, v) in curve.xs().iter().zip(curve.values()) {
            assert_eq!(*v, x * 0.1);
        }
    }

    #[test]
    fn validation() {
        assert!(DensityCurve::new(vec![1.0, 1.0], vec![0.0, 0.0], DensityKind::AreaPdf).is_err());
        assert!(DensityCurve::new(vec![1.0, 7.0], vec![0.0, 0.0], DensityKind::AreaPdf).is_err());
        assert!(DensityCurve::new(vec![1.0, 2.0], vec![0.0, -1e-9], DensityKind::AreaPdf).is_err());
        assert!(DensityCurve::new(vec![1.0, 2.0], vec![0.0, -1e-13], DensityKind::AreaPdf).is_ok());
        assert!(DensityCurve::new(vec![1.0], vec![], DensityKind::AreaPdf).is_err());
        assert!(DensityCurve::<f64>::from_csv("x,y\n", DensityKind::AreaPdf).is_err());
    }
}
