use thiserror::Error;

/// Errors surfaced by pivot evaluation, interval construction, and coverage
/// estimation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("probability {value} must lie strictly inside (0, 1)")]
    InvalidProbability { value: f64 },

    #[error("parameter {name} = {value} is invalid: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("no bracket for quantile p = {p} inside the support of '{name}'")]
    QuantileBracket { name: String, p: f64 },

    #[error(
        "cdf of '{name}' is not strictly increasing near w = {w} \
         (quantile at p = {p} is not unique)"
    )]
    CdfNotIncreasing { name: String, p: f64, w: f64 },

    #[error("empirical pivot needs at least {min} finite samples, got {got}")]
    InsufficientSamples { got: usize, min: usize },

    #[error("empirical pivot samples must all be finite")]
    NonFiniteSample,

    #[error(
        "posterior is degenerate: 1 - G(-t) = {tail:e} at t = {t}; \
         the data leave essentially no mass on the restricted parameter set"
    )]
    DegeneratePosterior { t: f64, tail: f64 },

    #[error("spent probability {alpha_x} lies outside [0, {alpha}]")]
    SpendingOutOfRange { alpha_x: f64, alpha: f64 },

    #[error(
        "infeasible pivot quantiles: lower limit {lower} < 0 violates \
         -gamma1 >= -t(x) (gamma1 = {gamma1}, t = {t})"
    )]
    InfeasibleQuantiles { lower: f64, gamma1: f64, t: f64 },

    #[error(
        "pivot quantile pair captures mass {delta} but the credibility \
         requirement demands {delta0} (difference beyond 1e-10)"
    )]
    QuantilePairMismatch { delta: f64, delta0: f64 },

    #[error("{op} requires a symmetric pivot distribution; '{name}' is not symmetric")]
    SymmetryRequired { op: &'static str, name: String },

    #[error("spending band is undefined at t = {t} < y0 = {y0}; the premise forces alpha(x) = alpha there")]
    BandBelowBoundary { t: f64, y0: f64 },

    #[error("validation grid must contain points on both sides of y0 = {y0}")]
    GridDoesNotSpanBoundary { y0: f64 },

    #[error("model '{name}' does not have constant a2(x); quadrature coverage is unavailable")]
    NonConstantScale { name: String },

    #[error(
        "spending function '{name}' fails admissibility at {failures} of {points} \
         grid points; the coverage guarantee would be void"
    )]
    SpendingRejected {
        name: String,
        failures: usize,
        points: usize,
    },

    #[error("unknown {what} label '{label}'")]
    UnknownLabel { what: &'static str, label: String },

    #[error("model '{name}' expects theta of dimension {expected}, got {got}")]
    ThetaDimension {
        name: String,
        expected: usize,
        got: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
