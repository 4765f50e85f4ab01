use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{sphere}: argument {x} outside the admissible range ({requirement})")]
    Precondition {
        sphere: &'static str,
        x: f64,
        requirement: String,
    },

    #[error("x = {x} lies outside the trace domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("trace domain does not cover the required interval [{lo}, {hi}]")]
    DomainMismatch { lo: f64, hi: f64 },

    #[error("traces use different layouts and cannot be combined")]
    LayoutMismatch,

    #[error("derivative order {0} refused (at most 4 supported)")]
    DerivativeOrder(usize),

    #[error("approximation did not converge; worst subinterval [{lo}, {hi}] with error {error:e}")]
    NotConverged { lo: f64, hi: f64, error: f64 },

    #[error("series did not reach tolerance within {depth} terms (eps = {epsilon}, last ratio {ratio:.6})")]
    DepthExceeded {
        depth: usize,
        epsilon: f64,
        ratio: f64,
    },

    #[error("tolerance {tol:e} is below the accumulated roundoff {floor:e} at eps = {epsilon}")]
    ToleranceFloor { tol: f64, floor: f64, epsilon: f64 },

    #[error("quadrature did not converge on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64 },

    #[error("correction iteration is not contracting (ratio {ratio:.3}); move the lower limit further from sqrt(eps)")]
    NotContracting { ratio: f64 },

    #[error("basis is ill-conditioned on the fit window (condition {condition:e}); widen the window")]
    IllConditioned { condition: f64 },

    #[error("{0}")]
    Unsupported(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
