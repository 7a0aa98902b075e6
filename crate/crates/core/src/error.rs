use thiserror::Error;

/// Failures raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Engine constants violate `hbar > 0`, `mass > 0`, `v0 >= 0` or are not finite.
    #[error("invalid engine parameters: {0}")]
    InvalidParams(String),

    /// An argument fell outside the domain of the operation (non-positive length,
    /// bad level index, weight outside [0, 1], ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The two levels are degenerate at `l`, so the isotherm condition does not
    /// determine a weight.
    #[error("degenerate isotherm at L = {l}: levels 1 and 2 coincide")]
    DegenerateIsotherm { l: f64 },

    /// The isotherm weight solved at `l` lies outside [0, 1].
    #[error("isotherm weight w1 = {w1} at L = {l} is outside [0, 1]")]
    IsothermOutOfRange { l: f64, w1: f64 },

    /// Cycle geometry is infeasible.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Efficiency requested with a vanishing heat input.
    #[error("efficiency undefined: heat input {heat_input} is zero")]
    UndefinedEfficiency { heat_input: f64 },

    /// An iterative method hit its iteration budget.
    #[error("no convergence after {iterations} iterations (best estimate {best_estimate})")]
    NonConvergence { best_estimate: f64, iterations: usize },

    /// The integrand produced NaN or infinity.
    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    /// Root finder was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
