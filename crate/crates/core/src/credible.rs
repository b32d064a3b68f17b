//! Credible intervals on the restricted parameter range and the spending
//! functions that generate them.
//!
//! With `t(x) = a1(x)/a2(x)` and `G` the cdf of the negated pivot, the
//! posterior survival function of `tau(theta)` under the truncated prior is
//!
//! ```text
//! P(tau >= y | x) = (1 - G((y - a1)/a2)) / (1 - G(-t)),   y >= 0.
//! ```
//!
//! A spending function assigns the upper-tail share `alpha(x)` of the
//! posterior deficit `alpha`; the interval bounds follow in closed form from
//! the quantiles of `G`. The admissibility validator checks the band that
//! makes the frequentist coverage of the resulting intervals exceed
//! `(1 - alpha)/(1 + alpha)` everywhere on the constrained range.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pivot::PivotDistribution;

/// 1 - G(-t) below this is treated as a degenerate posterior.
const DEGENERATE_TAIL: f64 = 1e-300;
/// Slack for the admissibility checks in [`validate_spending`].
const VALIDATION_TOL: f64 = 1e-12;
/// Allowed mismatch between a supplied quantile pair and the credibility
/// requirement in [`pivot_quantile_bounds`].
const QUANTILE_PAIR_TOL: f64 = 1e-10;

/// A credible interval `[lower, upper]` for `tau(theta)` together with the
/// credibility it carries and the upper-tail mass spent to place it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CredibleInterval {
    /// Lower limit; always `>= 0`, and exactly `0` iff the whole deficit is
    /// spent on the upper tail.
    pub lower: f64,
    /// Upper limit; `+inf` only when nothing is spent above and `G` has
    /// unbounded upper support.
    pub upper: f64,
    /// `1 - alpha`.
    pub credibility: f64,
    /// The `alpha(x)` that generated the interval.
    pub spent_upper: f64,
}

/// Maps the statistic `t(x)` to the upper-tail spend `alpha(x) in [0, alpha]`.
///
/// Every rule used here depends on `x` only through `t(x)`, and satisfies
/// `alpha(x) = alpha` for `t <= y0` (all mass spent above; lower limit 0).
/// Built-in rules keep a handle to the pivot distribution they were derived
/// from, so a constructed value is self-contained and shareable.
#[derive(Clone)]
pub struct SpendingFunction {
    alpha: f64,
    label: String,
    kind: SpendKind,
}

#[derive(Clone)]
enum SpendKind {
    EqualTails {
        pivot: PivotDistribution,
    },
    BandLower {
        pivot: PivotDistribution,
        y0: f64,
    },
    BandUpper {
        pivot: PivotDistribution,
        y0: f64,
    },
    Custom {
        rule: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl SpendingFunction {
    /// The G-equal-tails rule: `min(alpha, alpha/2 + G(-t)/(2(1 - G(-t))))`.
    ///
    /// Coincides with the symmetric-pivot HPD rule and always satisfies the
    /// admissibility band.
    pub fn equal_tails(alpha: f64, pivot: &PivotDistribution) -> Result<Self> {
        ensure_alpha(alpha)?;
        Ok(Self {
            alpha,
            label: "equal-tails".to_string(),
            kind: SpendKind::EqualTails {
                pivot: pivot.clone(),
            },
        })
    }

    /// Same rule as [`Self::equal_tails`], available only for symmetric
    /// unimodal pivots where it reproduces the HPD interval.
    pub fn hpd_symmetric(alpha: f64, pivot: &PivotDistribution) -> Result<Self> {
        ensure_alpha(alpha)?;
        if !pivot.is_symmetric() {
            return Err(Error::SymmetryRequired {
                op: "hpd-symmetric spending",
                name: pivot.name().to_string(),
            });
        }
        Ok(Self {
            alpha,
            label: "hpd-symmetric".to_string(),
            kind: SpendKind::EqualTails {
                pivot: pivot.clone(),
            },
        })
    }

    /// Lower edge of the admissibility band, extended by `alpha` on `t <= y0`.
    /// Pushes intervals as far up as the guarantee allows.
    pub fn band_lower(alpha: f64, pivot: &PivotDistribution) -> Result<Self> {
        ensure_alpha(alpha)?;
        let y0 = y_boundary(alpha, pivot)?;
        Ok(Self {
            alpha,
            label: "band-lower".to_string(),
            kind: SpendKind::BandLower {
                pivot: pivot.clone(),
                y0,
            },
        })
    }

    /// Upper edge of the admissibility band, extended by `alpha` on `t <= y0`.
    /// Pushes intervals as far down as the guarantee allows.
    pub fn band_upper(alpha: f64, pivot: &PivotDistribution) -> Result<Self> {
        ensure_alpha(alpha)?;
        let y0 = y_boundary(alpha, pivot)?;
        Ok(Self {
            alpha,
            label: "band-upper".to_string(),
            kind: SpendKind::BandUpper {
                pivot: pivot.clone(),
                y0,
            },
        })
    }

    /// Arbitrary rule `t -> alpha(x)`; the output is clamped to `[0, alpha]`.
    pub fn custom(
        alpha: f64,
        label: impl Into<String>,
        rule: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        ensure_alpha(alpha)?;
        Ok(Self {
            alpha,
            label: label.into(),
            kind: SpendKind::Custom {
                rule: Arc::new(rule),
            },
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn name(&self) -> &str {
        &self.label
    }

    /// Evaluates `alpha(x)` at `t`.
    pub fn spend(&self, t: f64) -> f64 {
        let gmt = match &self.kind {
            SpendKind::EqualTails { pivot }
            | SpendKind::BandLower { pivot, .. }
            | SpendKind::BandUpper { pivot, .. } => pivot.cdf(-t),
            SpendKind::Custom { .. } => f64::NAN,
        };
        self.spend_given_gmt(t, gmt)
    }

    /// Same as [`Self::spend`] with `G(-t)` already in hand; built-in rules
    /// depend on `t` only through it.
    pub(crate) fn spend_given_gmt(&self, t: f64, gmt: f64) -> f64 {
        let raw = match &self.kind {
            SpendKind::EqualTails { .. } => equal_tails_from_gmt(self.alpha, gmt),
            SpendKind::BandLower { y0, .. } => {
                if t <= *y0 {
                    self.alpha
                } else {
                    band_from_gmt(self.alpha, gmt).0
                }
            }
            SpendKind::BandUpper { y0, .. } => {
                if t <= *y0 {
                    self.alpha
                } else {
                    band_from_gmt(self.alpha, gmt).1
                }
            }
            SpendKind::Custom { rule } => rule(t),
        };
        raw.clamp(0.0, self.alpha)
    }
}

impl std::fmt::Debug for SpendingFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpendingFunction")
            .field("alpha", &self.alpha)
            .field("name", &self.label)
            .finish()
    }
}

/// Posterior survival probability `P(tau(theta) >= y | x)` under the
/// truncated prior: `(1 - G((y - a1)/a2)) / (1 - G(-a1/a2))`.
///
/// Equals 1 at `y = 0` and is nonincreasing in `y`.
pub fn posterior_survival(y: f64, a1: f64, a2: f64, pivot: &PivotDistribution) -> Result<f64> {
    ensure_positive_scale(a2)?;
    if y.is_nan() || y < 0.0 {
        return Err(Error::InvalidParameter {
            name: "y",
            value: y,
            constraint: "must be nonnegative",
        });
    }
    let t = a1 / a2;
    let tail = pivot.sf(-t);
    if tail < DEGENERATE_TAIL {
        return Err(Error::DegeneratePosterior { t, tail });
    }
    Ok(pivot.sf((y - a1) / a2) / tail)
}

/// The boundary statistic `y0 = -G^{-1}(alpha / (1 + alpha))`.
///
/// For `t(x) <= y0` the admissible spending is pinned at `alpha` and the
/// interval's lower limit sits at 0.
pub fn y_boundary(alpha: f64, pivot: &PivotDistribution) -> Result<f64> {
    ensure_alpha(alpha)?;
    Ok(-pivot.quantile(alpha / (1.0 + alpha))?)
}

/// The G-mass `(1 - alpha)(1 - G(-t))` the interval must capture between
/// its pivot quantiles.
pub fn delta0(t: f64, alpha: f64, pivot: &PivotDistribution) -> Result<f64> {
    ensure_alpha(alpha)?;
    Ok((1.0 - alpha) * pivot.sf(-t))
}

/// Interval bounds for a given spent upper mass `alpha_x in [0, alpha]`:
///
/// ```text
/// lower = a1 + a2 G^{-1}( G(-t) + (alpha - alpha_x)(1 - G(-t)) )
/// upper = a1 + a2 G^{-1}( 1 - alpha_x (1 - G(-t)) )
/// ```
///
/// `alpha_x = alpha` collapses the lower argument to `G(-t)` and the lower
/// limit to exactly 0.
pub fn bounds_from_spending(
    a1: f64,
    a2: f64,
    alpha: f64,
    alpha_x: f64,
    pivot: &PivotDistribution,
) -> Result<CredibleInterval> {
    ensure_positive_scale(a2)?;
    ensure_alpha(alpha)?;
    let t = a1 / a2;
    bounds_with_gmt(a1, a2, alpha, alpha_x, pivot.cdf(-t), pivot)
}

/// Hot-path variant of [`bounds_from_spending`] with `G(-t)` precomputed.
pub(crate) fn bounds_with_gmt(
    a1: f64,
    a2: f64,
    alpha: f64,
    alpha_x: f64,
    gmt: f64,
    pivot: &PivotDistribution,
) -> Result<CredibleInterval> {
    if !(0.0..=alpha).contains(&alpha_x) {
        return Err(Error::SpendingOutOfRange { alpha_x, alpha });
    }
    let tail = 1.0 - gmt;
    if tail < DEGENERATE_TAIL {
        return Err(Error::DegeneratePosterior { t: a1 / a2, tail });
    }
    let lower = if alpha_x >= alpha {
        0.0
    } else {
        let q = gmt + (alpha - alpha_x) * tail;
        (a1 + a2 * pivot.quantile(q)?).max(0.0)
    };
    let upper_q = 1.0 - alpha_x * tail;
    let upper = if upper_q >= 1.0 {
        a1 + a2 * pivot.support().1
    } else {
        a1 + a2 * pivot.quantile(upper_q)?
    };
    Ok(CredibleInterval {
        lower,
        upper,
        credibility: 1.0 - alpha,
        spent_upper: alpha_x,
    })
}

/// The G-equal-tails spending rule evaluated at `t`.
pub fn equal_tails_spending(t: f64, alpha: f64, pivot: &PivotDistribution) -> Result<f64> {
    ensure_alpha(alpha)?;
    Ok(equal_tails_from_gmt(alpha, pivot.cdf(-t)))
}

fn equal_tails_from_gmt(alpha: f64, gmt: f64) -> f64 {
    let tail = 1.0 - gmt;
    // gmt >= alpha/(1+alpha) already forces the min to alpha, so a vanishing
    // tail never has to be divided by.
    if tail < DEGENERATE_TAIL {
        return alpha;
    }
    (alpha / 2.0 + gmt / (2.0 * tail)).min(alpha)
}

/// The equal-tails pivot quantile pair `(gamma1, gamma2)` of the
/// credibility mass `delta0(t)`: `-gamma1 = G^{-1}((1 - d0)/2)`,
/// `gamma2 = G^{-1}((1 + d0)/2)`.
pub fn equal_tails_gammas(
    a1: f64,
    a2: f64,
    alpha: f64,
    pivot: &PivotDistribution,
) -> Result<(f64, f64)> {
    ensure_positive_scale(a2)?;
    let d0 = delta0(a1 / a2, alpha, pivot)?;
    let gamma1 = -pivot.quantile((1.0 - d0) / 2.0)?;
    let gamma2 = pivot.quantile((1.0 + d0) / 2.0)?;
    Ok((gamma1, gamma2))
}

/// Interval `[a1 - a2 gamma1, a1 + a2 gamma2]` from a pivot quantile pair
/// capturing mass `G(gamma2) - G(-gamma1) = delta0(t)`.
///
/// Only defined while the lower limit stays nonnegative; the feasibility
/// constraint is `-gamma1 >= -t(x)`.
pub fn pivot_quantile_bounds(
    a1: f64,
    a2: f64,
    alpha: f64,
    gamma1: f64,
    gamma2: f64,
    pivot: &PivotDistribution,
) -> Result<CredibleInterval> {
    ensure_positive_scale(a2)?;
    ensure_alpha(alpha)?;
    let t = a1 / a2;
    let tail = pivot.sf(-t);
    if tail < DEGENERATE_TAIL {
        return Err(Error::DegeneratePosterior { t, tail });
    }
    let d0 = (1.0 - alpha) * tail;
    let captured = pivot.cdf(gamma2) - pivot.cdf(-gamma1);
    if (captured - d0).abs() > QUANTILE_PAIR_TOL {
        return Err(Error::QuantilePairMismatch {
            delta: captured,
            delta0: d0,
        });
    }
    let lower = a1 - a2 * gamma1;
    if lower < 0.0 {
        return Err(Error::InfeasibleQuantiles { lower, gamma1, t });
    }
    let upper = a1 + a2 * gamma2;
    Ok(CredibleInterval {
        lower,
        upper,
        credibility: 1.0 - alpha,
        spent_upper: pivot.sf(gamma2) / tail,
    })
}

/// HPD interval for symmetric unimodal pivots:
///
/// ```text
/// lower = max(0, a1 + a2 G^{-1}((1 - (1-alpha) G(t)) / 2))
/// upper = a1 + a2 max(G^{-1}(1 - alpha G(t)), G^{-1}((1 + (1-alpha) G(t)) / 2))
/// ```
///
/// The one-sided branch `G^{-1}(1 - alpha G(t))` is the larger exactly when
/// `t <= y0` (lower limit clipped to 0) and the two-sided branch takes over
/// beyond; selecting the larger is what keeps the posterior mass at
/// `1 - alpha` in both regimes. Coincides with the equal-tails interval;
/// rejected for asymmetric pivots, whose HPD region these formulas do not
/// describe.
pub fn hpd_symmetric_bounds(
    a1: f64,
    a2: f64,
    alpha: f64,
    pivot: &PivotDistribution,
) -> Result<CredibleInterval> {
    ensure_positive_scale(a2)?;
    ensure_alpha(alpha)?;
    if !pivot.is_symmetric() {
        return Err(Error::SymmetryRequired {
            op: "hpd_symmetric_bounds",
            name: pivot.name().to_string(),
        });
    }
    let t = a1 / a2;
    let gt = pivot.cdf(t);
    let lower = (a1 + a2 * pivot.quantile((1.0 - (1.0 - alpha) * gt) / 2.0)?).max(0.0);
    let cap = 1.0 - alpha * gt;
    let u1 = if cap >= 1.0 {
        pivot.support().1
    } else {
        pivot.quantile(cap)?
    };
    let u2 = pivot.quantile((1.0 + (1.0 - alpha) * gt) / 2.0)?;
    let upper = a1 + a2 * u1.max(u2);
    let spent = posterior_survival(upper.max(0.0), a1, a2, pivot)?;
    Ok(CredibleInterval {
        lower,
        upper,
        credibility: 1.0 - alpha,
        spent_upper: spent,
    })
}

/// The admissibility band `(alpha1(t), alpha2(t))` for `t >= y0`:
///
/// ```text
/// alpha1 = ((1-alpha) G(-t) + alpha^2/(1+alpha)) / (1 - G(-t))
/// alpha2 = (alpha/(1+alpha)) / (1 - G(-t))
/// ```
///
/// Both ends equal `alpha` at `t = y0`; spending inside the band keeps the
/// frequentist coverage above `(1-alpha)/(1+alpha)`.
pub fn spending_band(t: f64, alpha: f64, pivot: &PivotDistribution) -> Result<(f64, f64)> {
    ensure_alpha(alpha)?;
    let y0 = y_boundary(alpha, pivot)?;
    if t < y0 {
        return Err(Error::BandBelowBoundary { t, y0 });
    }
    Ok(band_from_gmt(alpha, pivot.cdf(-t)))
}

fn band_from_gmt(alpha: f64, gmt: f64) -> (f64, f64) {
    let tail = 1.0 - gmt;
    let lo = ((1.0 - alpha) * gmt + alpha * alpha / (1.0 + alpha)) / tail;
    let hi = (alpha / (1.0 + alpha)) / tail;
    (lo, hi)
}

/// Outcome of checking one grid point in [`validate_spending`].
#[derive(Debug, Clone, Copy)]
pub struct ValidationPoint {
    pub t: f64,
    /// The rule's value at `t`.
    pub alpha_x: f64,
    /// Admissible range at `t`; degenerate `(alpha, alpha)` left of `y0`.
    pub band: (f64, f64),
    pub pass: bool,
}

/// Per-point admissibility results and the overall verdict.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub alpha: f64,
    pub y_boundary: f64,
    pub points: Vec<ValidationPoint>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| !p.pass).count()
    }
}

/// Checks a spending rule against the premise (`alpha(x) = alpha` for
/// `t <= y0`) and the admissibility band (for `t >= y0`) over `grid`.
///
/// Violations become report entries, not errors; the grid must contain
/// points on both sides of `y0`.
pub fn validate_spending(
    spending: &SpendingFunction,
    pivot: &PivotDistribution,
    grid: &[f64],
) -> Result<ValidationReport> {
    let alpha = spending.alpha();
    let y0 = y_boundary(alpha, pivot)?;
    if !grid.iter().any(|&t| t < y0) || !grid.iter().any(|&t| t > y0) {
        return Err(Error::GridDoesNotSpanBoundary { y0 });
    }
    let points: Vec<ValidationPoint> = grid
        .iter()
        .map(|&t| {
            let alpha_x = spending.spend(t);
            let band = if t <= y0 {
                (alpha, alpha)
            } else {
                band_from_gmt(alpha, pivot.cdf(-t))
            };
            let pass = alpha_x >= band.0 - VALIDATION_TOL && alpha_x <= band.1 + VALIDATION_TOL;
            ValidationPoint {
                t,
                alpha_x,
                band,
                pass,
            }
        })
        .collect();
    let passed = points.iter().all(|p| p.pass);
    Ok(ValidationReport {
        alpha,
        y_boundary: y0,
        points,
        passed,
    })
}

/// A default validation grid: dense around `y0`, with far points on both
/// sides so tail behaviour is exercised too.
pub fn default_validation_grid(alpha: f64, pivot: &PivotDistribution) -> Result<Vec<f64>> {
    let y0 = y_boundary(alpha, pivot)?;
    let qlo = pivot.quantile(1e-4)?;
    let qhi = pivot.quantile(1.0 - 1e-4)?;
    let width = (qhi - qlo).max(1e-6);
    let mut grid = Vec::with_capacity(208);
    for i in 0..60 {
        grid.push(y0 - 2.0 * width + 2.0 * width * i as f64 / 60.0);
    }
    for i in 0..=140 {
        grid.push(y0 + 4.0 * width * i as f64 / 140.0);
    }
    for k in [8.0, 16.0, 64.0] {
        grid.push(y0 + k * width);
    }
    Ok(grid)
}

fn ensure_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            constraint: "must lie strictly inside (0, 1)",
        })
    }
}

fn ensure_positive_scale(a2: f64) -> Result<()> {
    if a2.is_finite() && a2 > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "a2",
            value: a2,
            constraint: "must be finite and positive",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pivot::PivotDistribution;
    use crate::testoracle;
    use approx::assert_abs_diff_eq;

    fn normal() -> PivotDistribution {
        PivotDistribution::standard_normal()
    }

    fn exp_g() -> PivotDistribution {
        PivotDistribution::exponential()
    }

    /// Posterior mass of `[lower, upper]` under the survival function.
    fn interval_mass(iv: &CredibleInterval, a1: f64, a2: f64, g: &PivotDistribution) -> f64 {
        let lo = posterior_survival(iv.lower, a1, a2, g).unwrap();
        let hi = if iv.upper.is_finite() {
            posterior_survival(iv.upper, a1, a2, g).unwrap()
        } else {
            0.0
        };
        lo - hi
    }

    #[test]
    fn survival_is_one_at_zero() {
        for (a1, a2) in [(1.0, 1.0), (-2.5, 0.7), (4.0, 3.0)] {
            let s = posterior_survival(0.0, a1, a2, &normal()).unwrap();
            assert_eq!(s, 1.0);
        }
    }

    #[test]
    fn survival_normal_example() {
        let s = posterior_survival(1.0, 1.0, 1.0, &normal()).unwrap();
        let expected = (1.0 - testoracle::normal_cdf(0.0)) / (1.0 - testoracle::normal_cdf(-1.0));
        assert_abs_diff_eq!(s, expected, epsilon = 1e-7);
        assert_abs_diff_eq!(s, 0.5942867, epsilon = 1e-6);
    }

    #[test]
    fn survival_exponential_example() {
        let s = posterior_survival(1.0, 0.0, 1.0, &exp_g()).unwrap();
        assert_abs_diff_eq!(s, (-1.0f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn y_boundary_examples() {
        let y0 = y_boundary(0.05, &normal()).unwrap();
        assert_abs_diff_eq!(y0, -testoracle::normal_quantile(1.0 / 21.0), epsilon = 1e-7);
        assert_abs_diff_eq!(y0, 1.6684, epsilon = 5e-4);

        // alpha -> 1 pushes y0 to the symmetric pivot's median, 0.
        let near_one = y_boundary(0.999_999, &normal()).unwrap();
        assert!(near_one.abs() < 1e-4);

        let y0_exp = y_boundary(0.05, &exp_g()).unwrap();
        assert_abs_diff_eq!(y0_exp, -(21.0f64 / 20.0).ln(), epsilon = 1e-9);
        assert_abs_diff_eq!(y0_exp, -0.04879, epsilon = 1e-5);
    }

    #[test]
    fn delta0_examples() {
        // G(-t) = 0.2 at alpha = 0.1 gives 0.9 * 0.8 exactly. A constant cdf
        // is not a distribution, but delta0 only reads it pointwise.
        let g = PivotDistribution::from_fns(
            "const-gmt",
            (f64::NEG_INFINITY, f64::INFINITY),
            false,
            |_| 0.2,
            |_| 0.0,
            None,
        );
        assert_abs_diff_eq!(delta0(0.0, 0.1, &g).unwrap(), 0.72, epsilon = 1e-15);

        assert_abs_diff_eq!(delta0(1e9, 0.3, &normal()).unwrap(), 0.7, epsilon = 1e-12);

        let d = delta0(2.0, 0.05, &normal()).unwrap();
        let expected = 0.95 * (1.0 - testoracle::normal_cdf(-2.0));
        assert_abs_diff_eq!(d, expected, epsilon = 1e-7);
        assert_abs_diff_eq!(d, 0.928387, epsilon = 1e-6);
    }

    #[test]
    fn full_spend_pins_lower_at_zero() {
        for (a1, a2) in [(2.0, 1.0), (-1.0, 0.5), (0.3, 2.0)] {
            let iv = bounds_from_spending(a1, a2, 0.05, 0.05, &normal()).unwrap();
            assert_eq!(iv.lower, 0.0);
            assert!(iv.upper > 0.0);
        }
    }

    #[test]
    fn survival_is_nonincreasing_in_y() {
        for g in [normal(), exp_g(), PivotDistribution::neg_log_gamma(2.0).unwrap()] {
            let (a1, a2) = (1.1, 0.7);
            let mut prev = f64::INFINITY;
            for i in 0..=60 {
                let y = 6.0 * i as f64 / 60.0;
                let s = posterior_survival(y, a1, a2, &g).unwrap();
                assert!(s <= prev + 1e-15, "{} at y={y}", g.name());
                prev = s;
            }
        }
    }

    #[test]
    fn zero_spend_pushes_upper_to_the_support_end() {
        // alpha_x = 0 places the whole deficit below: the upper limit runs
        // to +inf for unbounded pivots and to the support end otherwise.
        let iv = bounds_from_spending(1.0, 2.0, 0.05, 0.0, &normal()).unwrap();
        assert!(iv.upper.is_infinite() && iv.upper > 0.0);
        assert!(iv.lower > 0.0);

        let shifted = PivotDistribution::shifted_exponential();
        let iv = bounds_from_spending(0.5, 2.0, 0.05, 0.0, &shifted).unwrap();
        assert_abs_diff_eq!(iv.upper, 0.5 + 2.0 * 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bounds_normal_example() {
        let alpha = 0.05;
        let ax = equal_tails_spending(2.0, alpha, &normal()).unwrap();
        assert_abs_diff_eq!(ax, 0.036640, epsilon = 1e-6);
        let iv = bounds_from_spending(2.0, 1.0, alpha, ax, &normal()).unwrap();
        assert_abs_diff_eq!(iv.lower, 0.1984271, epsilon = 1e-4);
        assert_abs_diff_eq!(iv.upper, 3.8015729, epsilon = 1e-4);
        // Same interval through the pivot-quantile route.
        let (g1, g2) = equal_tails_gammas(2.0, 1.0, alpha, &normal()).unwrap();
        let via_quantiles = pivot_quantile_bounds(2.0, 1.0, alpha, g1, g2, &normal()).unwrap();
        assert_abs_diff_eq!(iv.lower, via_quantiles.lower, epsilon = 1e-9);
        assert_abs_diff_eq!(iv.upper, via_quantiles.upper, epsilon = 1e-9);
    }

    #[test]
    fn bounds_match_direct_survival_inversion() {
        // Invert the posterior survival function numerically and compare.
        let g = exp_g();
        let (a1, a2, alpha, ax) = (1.0, 1.0, 0.1, 0.05);
        let iv = bounds_from_spending(a1, a2, alpha, ax, &g).unwrap();

        let invert = |target: f64| {
            let (mut lo, mut hi) = (0.0, 60.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if posterior_survival(mid, a1, a2, &g).unwrap() > target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let upper_oracle = invert(ax);
        let lower_oracle = invert(1.0 - (alpha - ax));
        assert_abs_diff_eq!(iv.upper, upper_oracle, epsilon = 1e-9);
        assert_abs_diff_eq!(iv.lower, lower_oracle, epsilon = 1e-9);
    }

    #[test]
    fn bounds_posterior_identities() {
        let g = normal();
        let (a1, a2, alpha, ax) = (1.3, 0.8, 0.1, 0.04);
        let iv = bounds_from_spending(a1, a2, alpha, ax, &g).unwrap();
        assert_abs_diff_eq!(
            posterior_survival(iv.upper, a1, a2, &g).unwrap(),
            ax,
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(
            1.0 - posterior_survival(iv.lower, a1, a2, &g).unwrap(),
            alpha - ax,
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(interval_mass(&iv, a1, a2, &g), 1.0 - alpha, epsilon = 1e-8);
    }

    #[test]
    fn bounds_rejects_out_of_range_spend() {
        assert!(matches!(
            bounds_from_spending(1.0, 1.0, 0.05, 0.06, &normal()),
            Err(Error::SpendingOutOfRange { .. })
        ));
        assert!(matches!(
            bounds_from_spending(1.0, 1.0, 0.05, -0.01, &normal()),
            Err(Error::SpendingOutOfRange { .. })
        ));
    }

    #[test]
    fn equal_tails_examples() {
        let alpha = 0.05;
        let g = normal();
        let y0 = y_boundary(alpha, &g).unwrap();
        assert_abs_diff_eq!(
            equal_tails_spending(y0, alpha, &g).unwrap(),
            alpha,
            epsilon = 1e-12
        );
        // Premise region: exactly alpha.
        assert_eq!(equal_tails_spending(y0 - 1.0, alpha, &g).unwrap(), alpha);
        // Far right limit: alpha / 2.
        assert_abs_diff_eq!(
            equal_tails_spending(1e9, alpha, &g).unwrap(),
            alpha / 2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            equal_tails_spending(2.0, alpha, &g).unwrap(),
            0.036640,
            epsilon = 1e-6
        );
    }

    #[test]
    fn pivot_quantile_route_equals_spending_route_asymmetric() {
        let g = PivotDistribution::neg_log_gamma(2.0).unwrap();
        let (a1, a2, alpha) = (3.0, 1.0, 0.05);
        let ax = equal_tails_spending(a1 / a2, alpha, &g).unwrap();
        let via_spending = bounds_from_spending(a1, a2, alpha, ax, &g).unwrap();
        let (g1, g2) = equal_tails_gammas(a1, a2, alpha, &g).unwrap();
        let via_quantiles = pivot_quantile_bounds(a1, a2, alpha, g1, g2, &g).unwrap();
        assert_abs_diff_eq!(via_spending.lower, via_quantiles.lower, epsilon = 1e-9);
        assert_abs_diff_eq!(via_spending.upper, via_quantiles.upper, epsilon = 1e-9);
    }

    #[test]
    fn pivot_quantile_bounds_infeasible_at_origin() {
        // t = 0 on a symmetric pivot: the equal-tails pair would push the
        // lower limit negative, which the feasibility constraint forbids.
        let g = normal();
        let alpha = 0.05;
        let d0 = delta0(0.0, alpha, &g).unwrap();
        let g1 = -g.quantile((1.0 - d0) / 2.0).unwrap();
        let g2 = g.quantile((1.0 + d0) / 2.0).unwrap();
        assert!(matches!(
            pivot_quantile_bounds(0.0, 1.0, alpha, g1, g2, &g),
            Err(Error::InfeasibleQuantiles { .. })
        ));
    }

    #[test]
    fn pivot_quantile_bounds_rejects_wrong_mass() {
        let g = normal();
        assert!(matches!(
            pivot_quantile_bounds(2.0, 1.0, 0.05, 1.0, 1.0, &g),
            Err(Error::QuantilePairMismatch { .. })
        ));
    }

    #[test]
    fn hpd_matches_equal_tails_under_symmetry() {
        let g = normal();
        let alpha = 0.05;
        for a1 in [2.0, 0.5, -0.7, 4.2] {
            let hpd = hpd_symmetric_bounds(a1, 1.0, alpha, &g).unwrap();
            let ax = equal_tails_spending(a1, alpha, &g).unwrap();
            let eqt = bounds_from_spending(a1, 1.0, alpha, ax, &g).unwrap();
            assert_abs_diff_eq!(hpd.lower, eqt.lower, epsilon = 1e-9);
            assert_abs_diff_eq!(hpd.upper, eqt.upper, epsilon = 1e-9);
        }
    }

    #[test]
    fn hpd_at_origin_is_one_sided() {
        let iv = hpd_symmetric_bounds(0.0, 1.0, 0.05, &normal()).unwrap();
        assert_eq!(iv.lower, 0.0);
        assert_abs_diff_eq!(iv.upper, 1.959964, epsilon = 1e-5);
        assert_abs_diff_eq!(iv.upper, testoracle::normal_quantile(0.975), epsilon = 1e-7);
    }

    #[test]
    fn hpd_rejects_asymmetric_pivot() {
        assert!(matches!(
            hpd_symmetric_bounds(1.0, 1.0, 0.05, &exp_g()),
            Err(Error::SymmetryRequired { .. })
        ));
    }

    #[test]
    fn band_examples() {
        let alpha = 0.05;
        let g = normal();
        let y0 = y_boundary(alpha, &g).unwrap();
        let (lo, hi) = spending_band(y0, alpha, &g).unwrap();
        assert_abs_diff_eq!(lo, alpha, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, alpha, epsilon = 1e-12);

        let (lo, hi) = spending_band(1e9, alpha, &g).unwrap();
        assert_abs_diff_eq!(lo, alpha * alpha / (1.0 + alpha), epsilon = 1e-12);
        assert_abs_diff_eq!(hi, alpha / (1.0 + alpha), epsilon = 1e-12);

        let (lo, hi) = spending_band(2.0, alpha, &g).unwrap();
        assert_abs_diff_eq!(lo, 0.024552, epsilon = 1e-6);
        assert_abs_diff_eq!(hi, 0.048728, epsilon = 1e-6);
        let eqt = equal_tails_spending(2.0, alpha, &g).unwrap();
        assert!(lo <= eqt && eqt <= hi);

        assert!(matches!(
            spending_band(y0 - 0.5, alpha, &g),
            Err(Error::BandBelowBoundary { .. })
        ));
    }

    #[test]
    fn validator_accepts_admissible_rules_and_rejects_halving() {
        for g in [
            normal(),
            exp_g(),
            PivotDistribution::neg_log_gamma(2.0).unwrap(),
        ] {
            let alpha = 0.1;
            let grid = default_validation_grid(alpha, &g).unwrap();
            for spending in [
                SpendingFunction::equal_tails(alpha, &g).unwrap(),
                SpendingFunction::band_lower(alpha, &g).unwrap(),
                SpendingFunction::band_upper(alpha, &g).unwrap(),
            ] {
                let report = validate_spending(&spending, &g, &grid).unwrap();
                assert!(
                    report.passed,
                    "{} rejected on {}: {} failures",
                    spending.name(),
                    g.name(),
                    report.failures()
                );
            }
            let constant = SpendingFunction::custom(alpha, "halved", move |_| alpha / 2.0).unwrap();
            let report = validate_spending(&constant, &g, &grid).unwrap();
            assert!(!report.passed);
            // It must fail everywhere left of y0 (premise) and near y0 on
            // the right (band lower edge approaches alpha there).
            assert!(report
                .points
                .iter()
                .filter(|p| p.t < report.y_boundary)
                .all(|p| !p.pass));
        }
    }

    #[test]
    fn validator_requires_spanning_grid() {
        let g = normal();
        let s = SpendingFunction::equal_tails(0.05, &g).unwrap();
        assert!(matches!(
            validate_spending(&s, &g, &[100.0, 200.0]),
            Err(Error::GridDoesNotSpanBoundary { .. })
        ));
    }

    #[test]
    fn intervals_contain_baseline() {
        // Any admissible spending yields an interval containing
        // [max(0, a1 + a2 G^{-1}(alpha/(1+alpha))), a1 + a2 G^{-1}(1/(1+alpha))].
        for g in [normal(), PivotDistribution::neg_log_gamma(2.0).unwrap()] {
            let alpha = 0.1;
            let l1q = g.quantile(alpha / (1.0 + alpha)).unwrap();
            let u1q = g.quantile(1.0 / (1.0 + alpha)).unwrap();
            for spending in [
                SpendingFunction::equal_tails(alpha, &g).unwrap(),
                SpendingFunction::band_lower(alpha, &g).unwrap(),
                SpendingFunction::band_upper(alpha, &g).unwrap(),
            ] {
                for a1 in [-1.0, 0.0, 0.8, 2.4, 6.0] {
                    let a2 = 1.3;
                    let ax = spending.spend(a1 / a2);
                    let iv = bounds_from_spending(a1, a2, alpha, ax, &g).unwrap();
                    let l1 = (a1 + a2 * l1q).max(0.0);
                    let u1 = a1 + a2 * u1q;
                    assert!(
                        iv.lower <= l1 + 1e-9 && iv.upper >= u1 - 1e-9,
                        "{} on {} at a1={a1}: [{}, {}] vs baseline [{l1}, {u1}]",
                        spending.name(),
                        g.name(),
                        iv.lower,
                        iv.upper
                    );
                }
            }
        }
    }
}
