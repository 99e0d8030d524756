use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("no real tunnel exit, over-the-barrier regime")]
    BarrierSuppression,

    #[error("time {0} lies outside the pulse window")]
    Window(C64),

    #[error("trajectory enters the core exclusion disk at t = {0}")]
    CoreProximity(C64),

    #[error("integrator step size underflow at t = {0}")]
    StepUnderflow(C64),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("saddle converged to the mirror branch (x = {x}, t = {t})")]
    WrongBranch { x: C64, t: C64 },

    #[error("degenerate Hessian (caustic)")]
    Caustic,

    #[error("peak not bracketed on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
