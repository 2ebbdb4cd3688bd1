use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parameter {lambda} lies outside the supported regime ({regime})")]
    UnsupportedRegime { lambda: f64, regime: &'static str },

    #[error("integrand is not finite at {location}")]
    NonFinite { location: f64 },

    #[error("{method} did not converge after {iterations} iterations")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
    },

    #[error("polynomial vanishes on the torus at node {location:?}; use the Jensen method")]
    TorusZero { location: Vec<f64> },

    #[error("all coefficients vanish at x = {0}")]
    ZeroFiber(f64),

    #[error("zero coordinate in evaluation point")]
    ZeroCoordinate,

    #[error("hypergeometric argument {0} outside the supported domain")]
    Hyp2F1Domain(f64),

    #[error("negative radicand at the midpoint of [{a}, {b}]")]
    NegativeRadicand { a: f64, b: f64 },

    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
