//! Distributions of the negated pivot.
//!
//! Everything downstream (posterior survival, interval bounds, spending
//! bands, coverage integrals) is expressed through the cdf `G`, the density
//! `g0` and the inverse cdf of `-T(X, theta)`. This module provides a small
//! catalog of analytic pivot distributions, an empirical variant built from
//! calibration draws, and a robust quantile solver shared by all of them.

use std::sync::{Arc, OnceLock};

use statrs::distribution::{Beta, Continuous, ContinuousCDF, Gamma, Normal, StudentsT};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Quantile iteration stops once the bracket width falls below
/// `QUANTILE_WIDTH_TOL * max(1, |w|)`.
const QUANTILE_WIDTH_TOL: f64 = 1e-13;
/// A cdf residual this small counts as converged outright.
const QUANTILE_P_TOL: f64 = 1e-14;
/// Residual left after x-space convergence that signals a cdf jump.
const CDF_DEFECT_TOL: f64 = 1e-9;
/// Number of nodes in the lazily built cdf table used to seed brackets.
const SEED_TABLE_NODES: usize = 2048;

/// Minimum number of draws accepted by [`make_empirical_pivot`].
pub const EMPIRICAL_MIN_SAMPLES: usize = 1000;

/// Distribution of the negated pivot `-T`.
///
/// Values are immutable after construction and cheap to clone; all methods
/// are pure, so a single instance can be shared freely across threads.
#[derive(Clone)]
pub struct PivotDistribution {
    inner: Arc<Inner>,
}

struct Inner {
    name: String,
    support: (f64, f64),
    symmetric: bool,
    kernel: Kernel,
    seed_table: OnceLock<SeedTable>,
}

/// Monotone (w, G(w)) pairs used to start quantile brackets.
struct SeedTable {
    ws: Vec<f64>,
    ps: Vec<f64>,
}

type DynFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

enum Kernel {
    /// N(0, sd^2).
    Normal {
        unit: Normal,
        sd: f64,
    },
    /// Student-t with `df` degrees of freedom, scaled by `scale`.
    StudentT {
        dist: StudentsT,
        scale: f64,
    },
    Logistic,
    Laplace,
    /// 1 - E with E ~ Exp(1): the pivot of the mean-centered exponential
    /// location family. Support (-inf, 1].
    ShiftedExponential,
    /// Exp(1) used directly as G. Support [0, inf).
    Exponential,
    /// -log V with V ~ Gamma(shape, 1): G(w) = 1 - F_Gamma(e^{-w}).
    NegLogGamma {
        shape: f64,
        gamma: Gamma,
    },
    /// -log V with V ~ Weibull(shape, 1): G(w) = exp(-e^{-shape w}).
    NegLogWeibull {
        shape: f64,
    },
    /// log(V1/V2) with Vi ~ Gamma(shape_i, 1); cdf via the regularized
    /// incomplete beta at s = 1/(1+e^{-w}).
    LogBetaPrime {
        a: f64,
        b: f64,
        beta: Beta,
    },
    Empirical(EmpiricalPivot),
    Custom {
        cdf: DynFn,
        density: DynFn,
        quantile: Option<DynFn>,
    },
}

impl PivotDistribution {
    fn build(
        name: impl Into<String>,
        support: (f64, f64),
        symmetric: bool,
        kernel: Kernel,
    ) -> Self {
        Self {
            inner: Arc::new(Inner {
                name: name.into(),
                support,
                symmetric,
                kernel,
                seed_table: OnceLock::new(),
            }),
        }
    }

    pub fn standard_normal() -> Self {
        Self::normal_scale(1.0).expect("unit scale is valid")
    }

    /// N(0, sd^2), e.g. the pivot of a weighted sum of independent normal
    /// location components.
    pub fn normal_scale(sd: f64) -> Result<Self> {
        ensure_positive("sd", sd)?;
        let unit = Normal::new(0.0, 1.0).expect("standard normal");
        Ok(Self::build(
            if sd == 1.0 {
                "normal".to_string()
            } else {
                format!("normal(sd={sd})")
            },
            (f64::NEG_INFINITY, f64::INFINITY),
            true,
            Kernel::Normal { unit, sd },
        ))
    }

    pub fn student_t(df: f64) -> Result<Self> {
        Self::scaled_student_t(df, 1.0)
    }

    pub fn scaled_student_t(df: f64, scale: f64) -> Result<Self> {
        ensure_positive("df", df)?;
        ensure_positive("scale", scale)?;
        let dist = StudentsT::new(0.0, 1.0, df).map_err(|_| Error::InvalidParameter {
            name: "df",
            value: df,
            constraint: "must be a valid Student-t degrees of freedom",
        })?;
        Ok(Self::build(
            if scale == 1.0 {
                format!("student-t({df})")
            } else {
                format!("student-t({df}, scale={scale})")
            },
            (f64::NEG_INFINITY, f64::INFINITY),
            true,
            Kernel::StudentT { dist, scale },
        ))
    }

    pub fn logistic() -> Self {
        Self::build(
            "logistic",
            (f64::NEG_INFINITY, f64::INFINITY),
            true,
            Kernel::Logistic,
        )
    }

    pub fn laplace() -> Self {
        Self::build(
            "laplace",
            (f64::NEG_INFINITY, f64::INFINITY),
            true,
            Kernel::Laplace,
        )
    }

    /// Pivot of the mean-centered exponential location family: the law of
    /// `1 - E` with `E ~ Exp(1)`. Asymmetric, support (-inf, 1].
    pub fn shifted_exponential() -> Self {
        Self::build(
            "shifted-exponential",
            (f64::NEG_INFINITY, 1.0),
            false,
            Kernel::ShiftedExponential,
        )
    }

    /// Exp(1) taken directly as G; handy asymmetric test pivot on [0, inf).
    pub fn exponential() -> Self {
        Self::build(
            "exponential",
            (0.0, f64::INFINITY),
            false,
            Kernel::Exponential,
        )
    }

    /// Law of `-log V`, `V ~ Gamma(shape, 1)`: the scale-family pivot.
    pub fn neg_log_gamma(shape: f64) -> Result<Self> {
        ensure_positive("shape", shape)?;
        let gamma = Gamma::new(shape, 1.0).map_err(|_| Error::InvalidParameter {
            name: "shape",
            value: shape,
            constraint: "must be a valid Gamma shape",
        })?;
        Ok(Self::build(
            format!("neg-log-gamma({shape})"),
            (f64::NEG_INFINITY, f64::INFINITY),
            false,
            Kernel::NegLogGamma { shape, gamma },
        ))
    }

    /// Law of `-log V`, `V ~ Weibull(shape, 1)`.
    pub fn neg_log_weibull(shape: f64) -> Result<Self> {
        ensure_positive("shape", shape)?;
        Ok(Self::build(
            format!("neg-log-weibull({shape})"),
            (f64::NEG_INFINITY, f64::INFINITY),
            false,
            Kernel::NegLogWeibull { shape },
        ))
    }

    /// Law of `log(V1/V2)` with independent `Vi ~ Gamma(shape_i, 1)`, the
    /// scale-ratio pivot. Exact cdf through the regularized incomplete beta.
    pub fn log_gamma_ratio(shape1: f64, shape2: f64) -> Result<Self> {
        ensure_positive("shape1", shape1)?;
        ensure_positive("shape2", shape2)?;
        let beta = Beta::new(shape1, shape2).map_err(|_| Error::InvalidParameter {
            name: "shape",
            value: shape1,
            constraint: "must be valid Beta shapes",
        })?;
        Ok(Self::build(
            format!("log-gamma-ratio({shape1}/{shape2})"),
            (f64::NEG_INFINITY, f64::INFINITY),
            shape1 == shape2,
            Kernel::LogBetaPrime {
                a: shape1,
                b: shape2,
                beta,
            },
        ))
    }

    /// Builds a pivot distribution from sorted calibration draws; see
    /// [`make_empirical_pivot`].
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        make_empirical_pivot(samples)
    }

    /// Wraps caller-supplied cdf/density (and optionally quantile) closures.
    ///
    /// The cdf must be continuous and strictly increasing on `support`;
    /// plateaus are reported as errors by the quantile solver rather than
    /// resolved arbitrarily.
    pub fn from_fns(
        name: impl Into<String>,
        support: (f64, f64),
        symmetric: bool,
        cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
        quantile: Option<DynFn>,
    ) -> Self {
        Self::build(
            name,
            support,
            symmetric,
            Kernel::Custom {
                cdf: Box::new(cdf),
                density: Box::new(density),
                quantile,
            },
        )
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    /// Interval on which `g0 > 0`; either end may be infinite.
    pub fn support(&self) -> (f64, f64) {
        self.inner.support
    }

    /// True iff `g0(w) = g0(-w)` for all `w`.
    pub fn is_symmetric(&self) -> bool {
        self.inner.symmetric
    }

    /// G(w).
    pub fn cdf(&self, w: f64) -> f64 {
        if w == f64::NEG_INFINITY {
            return 0.0;
        }
        if w == f64::INFINITY {
            return 1.0;
        }
        self.inner.kernel.cdf(w)
    }

    /// 1 - G(w), computed without cancellation where the kernel allows it.
    pub fn sf(&self, w: f64) -> f64 {
        if w == f64::NEG_INFINITY {
            return 1.0;
        }
        if w == f64::INFINITY {
            return 0.0;
        }
        self.inner.kernel.sf(w)
    }

    /// g0(w) = G'(w).
    pub fn density(&self, w: f64) -> f64 {
        self.inner.kernel.density(w)
    }

    /// G^{-1}(p); see [`quantile_solve`].
    pub fn quantile(&self, p: f64) -> Result<f64> {
        quantile_solve(self, p)
    }

    fn seed_table(&self) -> Option<&SeedTable> {
        // Empirical pivots invert directly and never reach the solver, and
        // building a table for them would just copy the sample grid.
        if matches!(self.inner.kernel, Kernel::Empirical(_)) {
            return None;
        }
        self.inner
            .seed_table
            .get_or_init(|| {
                let lo = self
                    .bracket_by_expansion(1e-9)
                    .and_then(|(a, b)| self.refine(1e-9, a, b))
                    .unwrap_or(self.inner.support.0.max(-1e12));
                let hi = self
                    .bracket_by_expansion(1.0 - 1e-9)
                    .and_then(|(a, b)| self.refine(1.0 - 1e-9, a, b))
                    .unwrap_or(self.inner.support.1.min(1e12));
                let n = SEED_TABLE_NODES;
                let step = (hi - lo) / (n - 1) as f64;
                let ws: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
                let ps: Vec<f64> = ws.iter().map(|&w| self.cdf(w)).collect();
                SeedTable { ws, ps }
            })
            .into()
    }

    /// Geometric bracket expansion from a support-informed starting point.
    fn bracket_by_expansion(&self, p: f64) -> Result<(f64, f64)> {
        let (slo, shi) = self.inner.support;
        let anchor = match (slo.is_finite(), shi.is_finite()) {
            (true, true) => 0.5 * (slo + shi),
            (true, false) => slo + 1.0,
            (false, true) => shi - 1.0,
            (false, false) => 0.0,
        };
        let lo = if slo.is_finite() {
            slo
        } else {
            let mut w = anchor - 1.0;
            let mut step = 1.0;
            while self.cdf(w) > p {
                step *= 2.0;
                w -= step;
                if !step.is_finite() {
                    return Err(Error::QuantileBracket {
                        name: self.inner.name.clone(),
                        p,
                    });
                }
            }
            w
        };
        let hi = if shi.is_finite() {
            shi
        } else {
            let mut w = anchor + 1.0;
            let mut step = 1.0;
            while self.cdf(w) < p {
                step *= 2.0;
                w += step;
                if !step.is_finite() {
                    return Err(Error::QuantileBracket {
                        name: self.inner.name.clone(),
                        p,
                    });
                }
            }
            w
        };
        Ok((lo, hi))
    }

    /// Narrow starting bracket from the seed table, falling back to
    /// expansion outside the tabulated range.
    fn seed_bracket(&self, p: f64) -> Result<(f64, f64)> {
        if let Some(table) = self.seed_table() {
            let ps = &table.ps;
            if p > ps[0] && p < ps[ps.len() - 1] {
                let idx = ps.partition_point(|&q| q < p);
                // ps[idx-1] < p <= ps[idx]
                return Ok((table.ws[idx - 1], table.ws[idx]));
            }
        }
        self.bracket_by_expansion(p)
    }

    /// Safeguarded Newton refinement inside a bracket; falls back to
    /// bisection whenever the Newton step leaves the bracket.
    fn refine(&self, p: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
        let mut x = 0.5 * (lo + hi);
        for _ in 0..220 {
            let fx = self.cdf(x) - p;
            if fx > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = self.density(x);
            if fx.abs() <= QUANTILE_P_TOL {
                if d > 0.0 {
                    return Ok(x);
                }
                return self.plateau_probe(p, x);
            }
            if hi - lo <= QUANTILE_WIDTH_TOL * x.abs().max(1.0) {
                return self.finish_converged(p, x, fx, d);
            }
            let newton = x - fx / d;
            x = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        let fx = self.cdf(x) - p;
        self.finish_converged(p, x, fx, self.density(x))
    }

    /// Distinguishes a locally flat cdf from a density underflow. Flatness
    /// on either side of `x` means the inverse at `p` is not unique.
    fn plateau_probe(&self, p: f64, x: f64) -> Result<f64> {
        let h = 1e-7 * x.abs().max(1.0);
        let here = self.cdf(x);
        if self.cdf(x + h) <= here || here <= self.cdf(x - h) {
            Err(Error::CdfNotIncreasing {
                name: self.inner.name.clone(),
                p,
                w: x,
            })
        } else {
            Ok(x)
        }
    }

    fn finish_converged(&self, p: f64, x: f64, fx: f64, d: f64) -> Result<f64> {
        // The bracket collapsed in x. A residual left at this point means G
        // jumps across p; a zero density with a locally flat cdf means a
        // plateau. Both break unique inversion.
        if fx.abs() > CDF_DEFECT_TOL {
            return Err(Error::CdfNotIncreasing {
                name: self.inner.name.clone(),
                p,
                w: x,
            });
        }
        if d <= 0.0 {
            return self.plateau_probe(p, x);
        }
        Ok(x)
    }
}

impl std::fmt::Debug for PivotDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PivotDistribution")
            .field("name", &self.inner.name)
            .field("support", &self.inner.support)
            .field("symmetric", &self.inner.symmetric)
            .finish()
    }
}

/// Inverts `G` at `p` by bracketing and bracketed Newton/bisection.
///
/// Returns `w` with either `|G(w) - p| <= 1e-12` or the final bracket width
/// below `1e-12 * max(1, |w|)`; closed-form kernels return their exact
/// inverse. Requires `p` strictly inside (0, 1).
pub fn quantile_solve(dist: &PivotDistribution, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability { value: p });
    }
    if let Some(q) = dist.inner.kernel.exact_quantile(p) {
        return Ok(q);
    }
    if let Kernel::Custom {
        quantile: Some(q), ..
    } = &dist.inner.kernel
    {
        let w = q(p);
        if (dist.cdf(w) - p).abs() <= 1e-12 {
            return Ok(w);
        }
        // Otherwise distrust the supplied inverse and solve from scratch.
    }
    let (lo, hi) = dist.seed_bracket(p)?;
    dist.refine(p, lo, hi)
}

/// Builds a [`PivotDistribution`] whose cdf and quantile are the
/// piecewise-linear interpolant between order statistics of `samples`.
///
/// The density is a centered finite-difference slope of that interpolant and
/// the symmetric flag is always false. At least [`EMPIRICAL_MIN_SAMPLES`]
/// finite draws are required.
pub fn make_empirical_pivot(samples: &[f64]) -> Result<PivotDistribution> {
    let emp = EmpiricalPivot::new(samples)?;
    let support = (emp.samples[0], emp.samples[emp.samples.len() - 1]);
    let n = emp.samples.len();
    Ok(PivotDistribution::build(
        format!("empirical(n={n})"),
        support,
        false,
        Kernel::Empirical(emp),
    ))
}

/// Sorted draws of `-T` with piecewise-linear cdf/quantile interpolation.
///
/// Plotting positions are `(i + 1/2)/n`; both maps extrapolate flat, clamped
/// to the first and last order statistic.
#[derive(Clone, Debug)]
pub struct EmpiricalPivot {
    samples: Vec<f64>,
    fd_step: f64,
}

impl EmpiricalPivot {
    fn new(samples: &[f64]) -> Result<Self> {
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteSample);
        }
        if samples.len() < EMPIRICAL_MIN_SAMPLES {
            return Err(Error::InsufficientSamples {
                got: samples.len(),
                min: EMPIRICAL_MIN_SAMPLES,
            });
        }
        let mut sorted = samples.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let span = sorted[sorted.len() - 1] - sorted[0];
        let fd_step = (span * 5e-4).max(f64::MIN_POSITIVE);
        Ok(Self {
            samples: sorted,
            fd_step,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn position(&self, idx: f64) -> f64 {
        (idx + 0.5) / self.samples.len() as f64
    }

    pub fn cdf(&self, w: f64) -> f64 {
        let s = &self.samples;
        let n = s.len();
        if w <= s[0] {
            return self.position(0.0);
        }
        if w >= s[n - 1] {
            return self.position((n - 1) as f64);
        }
        let lo = s.partition_point(|&x| x < w);
        let hi = s.partition_point(|&x| x <= w);
        if lo < hi {
            // w coincides with a (possibly tied) sample value: use the run
            // midpoint so the cdf stays single-valued.
            return self.position((lo + hi - 1) as f64 / 2.0);
        }
        // s[lo-1] < w < s[lo]
        let frac = (w - s[lo - 1]) / (s[lo] - s[lo - 1]);
        self.position((lo - 1) as f64 + frac)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        let s = &self.samples;
        let n = s.len();
        let u = p * n as f64 - 0.5;
        if u <= 0.0 {
            return s[0];
        }
        if u >= (n - 1) as f64 {
            return s[n - 1];
        }
        let k = u.floor() as usize;
        let frac = u - k as f64;
        s[k] + frac * (s[k + 1] - s[k])
    }

    pub fn density(&self, w: f64) -> f64 {
        let h = self.fd_step;
        ((self.cdf(w + h) - self.cdf(w - h)) / (2.0 * h)).max(0.0)
    }
}

impl Kernel {
    fn cdf(&self, w: f64) -> f64 {
        match self {
            Kernel::Normal { unit, sd } => unit.cdf(w / sd),
            Kernel::StudentT { dist, scale } => dist.cdf(w / scale),
            Kernel::Logistic => logistic_cdf(w),
            Kernel::Laplace => {
                if w < 0.0 {
                    0.5 * w.exp()
                } else {
                    1.0 - 0.5 * (-w).exp()
                }
            }
            Kernel::ShiftedExponential => {
                if w >= 1.0 {
                    1.0
                } else {
                    (w - 1.0).exp()
                }
            }
            Kernel::Exponential => {
                if w <= 0.0 {
                    0.0
                } else {
                    -(-w).exp_m1()
                }
            }
            Kernel::NegLogGamma { gamma, .. } => {
                let v = (-w).exp();
                if v.is_infinite() {
                    0.0
                } else {
                    gamma.sf(v)
                }
            }
            Kernel::NegLogWeibull { shape } => (-(-shape * w).exp()).exp(),
            Kernel::LogBetaPrime { beta, .. } => beta.cdf(logistic_cdf(w)),
            Kernel::Empirical(e) => e.cdf(w),
            Kernel::Custom { cdf, .. } => cdf(w),
        }
    }

    fn sf(&self, w: f64) -> f64 {
        match self {
            Kernel::Normal { unit, sd } => unit.sf(w / sd),
            Kernel::StudentT { dist, scale } => dist.sf(w / scale),
            Kernel::Logistic => logistic_cdf(-w),
            Kernel::Laplace => {
                if w < 0.0 {
                    1.0 - 0.5 * w.exp()
                } else {
                    0.5 * (-w).exp()
                }
            }
            Kernel::ShiftedExponential => {
                if w >= 1.0 {
                    0.0
                } else {
                    -(w - 1.0).exp_m1()
                }
            }
            Kernel::Exponential => {
                if w <= 0.0 {
                    1.0
                } else {
                    (-w).exp()
                }
            }
            Kernel::NegLogGamma { gamma, .. } => {
                let v = (-w).exp();
                if v.is_infinite() {
                    1.0
                } else {
                    gamma.cdf(v)
                }
            }
            Kernel::NegLogWeibull { shape } => -(-(-shape * w).exp()).exp_m1(),
            Kernel::LogBetaPrime { beta, .. } => beta.sf(logistic_cdf(w)),
            _ => 1.0 - self.cdf(w),
        }
    }

    fn density(&self, w: f64) -> f64 {
        match self {
            Kernel::Normal { unit, sd } => unit.pdf(w / sd) / sd,
            Kernel::StudentT { dist, scale } => dist.pdf(w / scale) / scale,
            Kernel::Logistic => {
                let e = (-w.abs()).exp();
                e / ((1.0 + e) * (1.0 + e))
            }
            Kernel::Laplace => 0.5 * (-w.abs()).exp(),
            Kernel::ShiftedExponential => {
                if w > 1.0 {
                    0.0
                } else {
                    (w - 1.0).exp()
                }
            }
            Kernel::Exponential => {
                if w < 0.0 {
                    0.0
                } else {
                    (-w).exp()
                }
            }
            Kernel::NegLogGamma { shape, .. } => (-shape * w - (-w).exp() - ln_gamma(*shape)).exp(),
            Kernel::NegLogWeibull { shape } => {
                let z = (-shape * w).exp();
                shape * z * (-z).exp()
            }
            Kernel::LogBetaPrime { a, b, .. } => {
                // g0(w) = s^a (1-s)^b / B(a, b) with s = logistic(w).
                let ln_s = -ln1p_exp(-w);
                let ln_1ms = -ln1p_exp(w);
                let lbeta = ln_gamma(*a) + ln_gamma(*b) - ln_gamma(a + b);
                (a * ln_s + b * ln_1ms - lbeta).exp()
            }
            Kernel::Empirical(e) => e.density(w),
            Kernel::Custom { density, .. } => density(w),
        }
    }

    /// Closed-form inverse where one exists.
    fn exact_quantile(&self, p: f64) -> Option<f64> {
        match self {
            Kernel::Logistic => Some((p / (1.0 - p)).ln()),
            Kernel::Laplace => Some(if p < 0.5 {
                (2.0 * p).ln()
            } else {
                -(2.0 * (1.0 - p)).ln()
            }),
            Kernel::ShiftedExponential => Some(1.0 + p.ln()),
            Kernel::Exponential => Some(-(-p).ln_1p()),
            Kernel::NegLogWeibull { shape } => Some(-(-p.ln()).ln() / shape),
            Kernel::NegLogGamma { shape, .. } if *shape == 1.0 => Some(-(-p.ln()).ln()),
            Kernel::Empirical(e) => Some(e.quantile(p)),
            _ => None,
        }
    }
}

fn logistic_cdf(w: f64) -> f64 {
    if w >= 0.0 {
        1.0 / (1.0 + (-w).exp())
    } else {
        let e = w.exp();
        e / (1.0 + e)
    }
}

/// ln(1 + e^x) without overflow.
fn ln1p_exp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            constraint: "must be finite and positive",
        })
    }
}
