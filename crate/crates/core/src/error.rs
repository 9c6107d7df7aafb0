use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(&'static str),
    #[error("degenerate dual triangle: {0}")]
    DegenerateDual(&'static str),
    #[error("no triangle satisfies the coordinate constraints")]
    NoSuchTriangle,
    #[error("complete elliptic integral of the first kind diverges at modulus 1")]
    Divergent,
    #[error("quadrature tolerance not met: best estimate {value:e} with error estimate {err_estimate:e} after {evaluations} evaluations")]
    ToleranceNotMet {
        value: f64,
        err_estimate: f64,
        evaluations: usize,
    },
    #[error("solved form left the domain of arccos: {0}")]
    OutOfDomain(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
