//! Concrete pivotal model families.
//!
//! Each model bundles the statistic maps `a1`, `a2`, the target `tau`, a
//! sampler of the observation given `theta`, and the pivot distribution `G`
//! of `-T(X, theta) = (tau(theta) - a1(X)) / a2(X)`. The pivotal property
//! itself is checked empirically through [`PivotModel::ks_check`].
//!
//! Families:
//!
//! - location: `X = theta + Z`, `tau = theta >= 0`;
//! - scale: `X = theta V`, `tau = log(theta) - log(a) >= 0` (a power-family
//!   observable `Y` with `Y = e^X` reduces to this after taking logs);
//! - location-scale (normal): `tau = mu >= 0` from `n` draws, Student pivot;
//! - linear combination of location components, `tau = sum w_i theta_i >= 0`;
//! - homogeneous-scale linear combination with a chi-scaled denominator;
//! - scale ratio of two Gamma components, `tau = log(theta2/theta1) >= 0`;
//! - normal quantile `tau = mu + eta sigma >= 0`, calibrated empirically.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::pivot::{make_empirical_pivot, PivotDistribution};

/// The statistics `(a1(x), a2(x))` that enter the interval construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotStats {
    pub a1: f64,
    pub a2: f64,
}

impl PivotStats {
    pub fn t(&self) -> f64 {
        self.a1 / self.a2
    }
}

/// Model parameter vector; the layout is model-specific and documented on
/// each constructor.
#[derive(Debug, Clone, PartialEq)]
pub struct Theta(pub Vec<f64>);

/// Location families with a catalog pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocationFamily {
    Normal,
    Laplace,
    Logistic,
    /// Exponential shifted to mean zero: f0(z) = e^{-(z+1)} on z >= -1.
    ShiftedExponential,
}

impl LocationFamily {
    pub fn label(&self) -> &'static str {
        match self {
            LocationFamily::Normal => "normal",
            LocationFamily::Laplace => "laplace",
            LocationFamily::Logistic => "logistic",
            LocationFamily::ShiftedExponential => "shifted-exponential",
        }
    }

    fn pivot(&self) -> PivotDistribution {
        match self {
            LocationFamily::Normal => PivotDistribution::standard_normal(),
            LocationFamily::Laplace => PivotDistribution::laplace(),
            LocationFamily::Logistic => PivotDistribution::logistic(),
            LocationFamily::ShiftedExponential => PivotDistribution::shifted_exponential(),
        }
    }

    /// Draws `W ~ G`; the observation is `X = theta - W`.
    fn sample_pivot<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            LocationFamily::Normal => rng.sample(StandardNormal),
            LocationFamily::Laplace => {
                let u: f64 = rng.random();
                if u < 0.5 {
                    (2.0 * u).max(f64::MIN_POSITIVE).ln()
                } else {
                    -(2.0 * (1.0 - u)).max(f64::MIN_POSITIVE).ln()
                }
            }
            LocationFamily::Logistic => {
                let u: f64 = rng.random();
                let u = u.clamp(f64::MIN_POSITIVE, 1.0 - 1e-16);
                (u / (1.0 - u)).ln()
            }
            LocationFamily::ShiftedExponential => 1.0 - rng.sample::<f64, _>(Exp1),
        }
    }
}

impl std::str::FromStr for LocationFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" => Ok(LocationFamily::Normal),
            "laplace" => Ok(LocationFamily::Laplace),
            "logistic" => Ok(LocationFamily::Logistic),
            "shifted-exponential" | "expshift" => Ok(LocationFamily::ShiftedExponential),
            other => Err(Error::UnknownLabel {
                what: "location family",
                label: other.to_string(),
            }),
        }
    }
}

/// Positive observables for the scale family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleFamily {
    Gamma,
    Weibull,
    Exponential,
}

impl ScaleFamily {
    pub fn label(&self) -> &'static str {
        match self {
            ScaleFamily::Gamma => "gamma",
            ScaleFamily::Weibull => "weibull",
            ScaleFamily::Exponential => "exponential",
        }
    }
}

impl std::str::FromStr for ScaleFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(ScaleFamily::Gamma),
            "weibull" => Ok(ScaleFamily::Weibull),
            "exponential" => Ok(ScaleFamily::Exponential),
            other => Err(Error::UnknownLabel {
                what: "scale family",
                label: other.to_string(),
            }),
        }
    }
}

enum ModelKind {
    Location {
        family: LocationFamily,
    },
    Scale {
        lower: f64,
        ln_lower: f64,
        sampler: rand_distr::Gamma<f64>,
        weibull: Option<rand_distr::Weibull<f64>>,
    },
    LocationScale {
        n: usize,
    },
    LinearCombination {
        family: LocationFamily,
        weights: Vec<f64>,
    },
    HomogeneousScale {
        weights: Vec<f64>,
        df: usize,
        chi_sampler: rand_distr::Gamma<f64>,
    },
    ScaleRatio {
        sampler1: rand_distr::Gamma<f64>,
        sampler2: rand_distr::Gamma<f64>,
    },
    Quantile {
        eta: f64,
        n: usize,
    },
}

/// A pivotal model: sampler, statistic maps, target, and pivot distribution.
///
/// Values are immutable; `sample*` methods take the random stream explicitly
/// so concurrent sweeps can hand each task its own stream.
pub struct PivotModel {
    name: String,
    pivot: PivotDistribution,
    kind: ModelKind,
}

impl PivotModel {
    /// Single location parameter: `X = theta + Z` with `Z ~ f0`,
    /// `tau(theta) = theta >= 0`. `theta = [theta]`.
    ///
    /// Lower bounds `theta >= a` (or upper bounds via reflection) reduce to
    /// this by shifting the data.
    pub fn location(family: LocationFamily) -> Self {
        Self {
            name: format!("location-{}", family.label()),
            pivot: family.pivot(),
            kind: ModelKind::Location { family },
        }
    }

    /// Lower-bounded scale parameter: `X = theta V` with `V ~ f1`,
    /// `tau(theta) = log(theta) - log(a) >= 0`, i.e. `theta >= a`.
    /// `theta = [theta]`.
    ///
    /// The pivot is the law of `-log V`, so `G(w) = 1 - F_f1(e^{-w})`.
    pub fn scale(family: ScaleFamily, shape: f64, lower: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 0.0) {
            return Err(Error::InvalidParameter {
                name: "shape",
                value: shape,
                constraint: "must be finite and positive",
            });
        }
        if !(lower.is_finite() && lower > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lower",
                value: lower,
                constraint: "must be finite and positive",
            });
        }
        if family == ScaleFamily::Exponential && shape != 1.0 {
            return Err(Error::InvalidParameter {
                name: "shape",
                value: shape,
                constraint: "exponential scale family has fixed shape 1",
            });
        }
        let pivot = match family {
            ScaleFamily::Gamma | ScaleFamily::Exponential => {
                PivotDistribution::neg_log_gamma(shape)?
            }
            ScaleFamily::Weibull => PivotDistribution::neg_log_weibull(shape)?,
        };
        let gamma_shape = if family == ScaleFamily::Weibull {
            1.0
        } else {
            shape
        };
        let sampler = rand_distr::Gamma::new(gamma_shape, 1.0).expect("validated shape");
        let weibull = match family {
            ScaleFamily::Weibull => {
                Some(rand_distr::Weibull::new(1.0, shape).expect("validated shape"))
            }
            _ => None,
        };
        Ok(Self {
            name: format!("scale-{}(shape={shape}, a={lower})", family.label()),
            pivot,
            kind: ModelKind::Scale {
                lower,
                ln_lower: lower.ln(),
                sampler,
                weibull,
            },
        })
    }

    /// Normal location-scale: observation `(mean, sd)` of `n` draws from
    /// `N(mu, sigma^2)`, `tau = mu >= 0`, `a1 = mean`, `a2 = sd / sqrt(n)`,
    /// Student-t(n-1) pivot. `theta = [mu, sigma]`.
    pub fn location_scale_normal(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                constraint: "needs at least two draws to estimate the scale",
            });
        }
        Ok(Self {
            name: format!("location-scale-normal(n={n})"),
            pivot: PivotDistribution::student_t((n - 1) as f64)?,
            kind: ModelKind::LocationScale { n },
        })
    }

    /// Linear combination of independent normal location components:
    /// `tau = sum w_i theta_i >= 0` (order constraints like
    /// `theta1 - theta2 >= 0` are the weights `(1, -1)`).
    /// `theta = [theta_1, ..., theta_p]`.
    pub fn linear_combination_normal(weights: &[f64]) -> Result<Self> {
        check_weights(weights)?;
        let scale = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        Ok(Self {
            name: format!("lincomb-normal(p={})", weights.len()),
            pivot: PivotDistribution::normal_scale(scale)?,
            kind: ModelKind::LinearCombination {
                family: LocationFamily::Normal,
                weights: weights.to_vec(),
            },
        })
    }

    /// Linear combination of non-normal location components; the pivot is
    /// calibrated empirically from `calibration_draws` draws of
    /// `sum w_i W_i`.
    pub fn linear_combination_empirical<R: Rng + ?Sized>(
        family: LocationFamily,
        weights: &[f64],
        calibration_draws: usize,
        rng: &mut R,
    ) -> Result<Self> {
        check_weights(weights)?;
        let draws: Vec<f64> = (0..calibration_draws)
            .map(|_| {
                weights
                    .iter()
                    .map(|w| w * family.sample_pivot(rng))
                    .sum::<f64>()
            })
            .collect();
        Ok(Self {
            name: format!("lincomb-{}(p={})", family.label(), weights.len()),
            pivot: make_empirical_pivot(&draws)?,
            kind: ModelKind::LinearCombination {
                family,
                weights: weights.to_vec(),
            },
        })
    }

    /// Linear combination of normal location components sharing an unknown
    /// scale: the denominator observation is `sigma * sqrt(chi2_df / df)`,
    /// giving a scaled Student pivot. `theta = [theta_1..theta_p, sigma]`.
    pub fn homogeneous_scale_normal(weights: &[f64], n: usize) -> Result<Self> {
        check_weights(weights)?;
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                constraint: "needs at least two pseudo-draws for the scale",
            });
        }
        let df = n - 1;
        let scale = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        let chi_sampler =
            rand_distr::Gamma::new(df as f64 / 2.0, 2.0).expect("df >= 1 is a valid shape");
        Ok(Self {
            name: format!("homoscale-normal(p={}, n={n})", weights.len()),
            pivot: PivotDistribution::scaled_student_t(df as f64, scale)?,
            kind: ModelKind::HomogeneousScale {
                weights: weights.to_vec(),
                df,
                chi_sampler,
            },
        })
    }

    /// Ratio of two Gamma scale parameters constrained by
    /// `theta2 / theta1 >= 1`: `tau = log(theta2) - log(theta1)`,
    /// `a1 = log(x2) - log(x1)`, pivot `log(V1 / V2)`. `theta = [theta1, theta2]`.
    pub fn scale_ratio(shape1: f64, shape2: f64) -> Result<Self> {
        for (name, v) in [("shape1", shape1), ("shape2", shape2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    constraint: "must be finite and positive",
                });
            }
        }
        Ok(Self {
            name: format!("scale-ratio-gamma({shape1}/{shape2})"),
            pivot: PivotDistribution::log_gamma_ratio(shape1, shape2)?,
            kind: ModelKind::ScaleRatio {
                sampler1: rand_distr::Gamma::new(shape1, 1.0).expect("validated"),
                sampler2: rand_distr::Gamma::new(shape2, 1.0).expect("validated"),
            },
        })
    }

    /// Normal quantile `tau = mu + eta sigma >= 0` from `n` draws;
    /// `a1 = mean`, `a2 = sd / sqrt(n)`. The pivot (a rescaled noncentral
    /// Student law) is calibrated empirically at `(mu, sigma) = (0, 1)`,
    /// which pivotal invariance makes representative. `theta = [mu, sigma]`.
    pub fn quantile_normal<R: Rng + ?Sized>(
        eta: f64,
        n: usize,
        calibration_draws: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                constraint: "needs at least two draws to estimate the scale",
            });
        }
        if !eta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: eta,
                constraint: "must be finite",
            });
        }
        let tau0 = eta; // tau at (mu, sigma) = (0, 1)
        let draws: Vec<f64> = (0..calibration_draws)
            .map(|_| {
                let (mean, sd) = normal_mean_sd(0.0, 1.0, n, rng);
                (tau0 - mean) / (sd / (n as f64).sqrt())
            })
            .collect();
        Ok(Self {
            name: format!("quantile-normal(eta={eta}, n={n})"),
            pivot: make_empirical_pivot(&draws)?,
            kind: ModelKind::Quantile { eta, n },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pivot(&self) -> &PivotDistribution {
        &self.pivot
    }

    /// The constrained target `tau(theta)`.
    pub fn tau(&self, theta: &Theta) -> Result<f64> {
        let v = &theta.0;
        self.check_theta(theta)?;
        Ok(match &self.kind {
            ModelKind::Location { .. } => v[0],
            ModelKind::Scale { ln_lower, .. } => v[0].ln() - ln_lower,
            ModelKind::LocationScale { .. } => v[0],
            ModelKind::LinearCombination { weights, .. } => dot(weights, v),
            ModelKind::HomogeneousScale { weights, .. } => dot(weights, &v[..weights.len()]),
            ModelKind::ScaleRatio { .. } => v[1].ln() - v[0].ln(),
            ModelKind::Quantile { eta, .. } => v[0] + eta * v[1],
        })
    }

    /// A canonical representative `theta` with `tau(theta) = value`.
    ///
    /// Pivotal invariance makes coverage independent of which representative
    /// is chosen; the KS self-check exercises that.
    pub fn theta_from_tau(&self, value: f64) -> Theta {
        Theta(match &self.kind {
            ModelKind::Location { .. } => vec![value],
            ModelKind::Scale { lower, .. } => vec![lower * value.exp()],
            ModelKind::LocationScale { .. } => vec![value, 1.0],
            ModelKind::LinearCombination { weights, .. } => {
                let norm2: f64 = weights.iter().map(|w| w * w).sum();
                weights.iter().map(|w| value * w / norm2).collect()
            }
            ModelKind::HomogeneousScale { weights, .. } => {
                let norm2: f64 = weights.iter().map(|w| w * w).sum();
                let mut theta: Vec<f64> = weights.iter().map(|w| value * w / norm2).collect();
                theta.push(1.0);
                theta
            }
            ModelKind::ScaleRatio { .. } => vec![1.0, value.exp()],
            ModelKind::Quantile { eta, .. } => vec![value - eta, 1.0],
        })
    }

    /// Dimension of `theta` for this model.
    pub fn theta_dim(&self) -> usize {
        match &self.kind {
            ModelKind::Location { .. } | ModelKind::Scale { .. } => 1,
            ModelKind::LocationScale { .. } | ModelKind::Quantile { .. } => 2,
            ModelKind::LinearCombination { weights, .. } => weights.len(),
            ModelKind::HomogeneousScale { weights, .. } => weights.len() + 1,
            ModelKind::ScaleRatio { .. } => 2,
        }
    }

    /// Draws one raw observation `X ~ f(.; theta)`.
    pub fn sample<R: Rng + ?Sized>(&self, theta: &Theta, rng: &mut R) -> Result<Vec<f64>> {
        self.check_theta(theta)?;
        let v = &theta.0;
        Ok(match &self.kind {
            ModelKind::Location { family } => vec![v[0] - family.sample_pivot(rng)],
            ModelKind::Scale {
                sampler, weibull, ..
            } => {
                vec![v[0] * sample_scale_component(sampler, weibull, rng)]
            }
            ModelKind::LocationScale { n } => {
                let (mean, sd) = normal_mean_sd(v[0], v[1], *n, rng);
                vec![mean, sd]
            }
            ModelKind::LinearCombination { family, weights } => weights
                .iter()
                .zip(v)
                .map(|(_, th)| th - family.sample_pivot(rng))
                .collect(),
            ModelKind::HomogeneousScale {
                weights,
                df,
                chi_sampler,
            } => {
                let sigma = v[weights.len()];
                let mut obs: Vec<f64> = v[..weights.len()]
                    .iter()
                    .map(|th| th + sigma * rng.sample::<f64, _>(StandardNormal))
                    .collect();
                let chi2 = rng.sample::<f64, _>(chi_sampler);
                obs.push(sigma * (chi2 / *df as f64).sqrt());
                obs
            }
            ModelKind::ScaleRatio {
                sampler1, sampler2, ..
            } => {
                vec![
                    v[0] * rng.sample::<f64, _>(sampler1),
                    v[1] * rng.sample::<f64, _>(sampler2),
                ]
            }
            ModelKind::Quantile { n, .. } => {
                let (mean, sd) = normal_mean_sd(v[0], v[1], *n, rng);
                vec![mean, sd]
            }
        })
    }

    /// Reduces a raw observation to `(a1, a2)`.
    pub fn observe(&self, obs: &[f64]) -> Result<PivotStats> {
        let stats = match &self.kind {
            ModelKind::Location { .. } => {
                expect_obs_len(obs, 1, &self.name)?;
                PivotStats {
                    a1: obs[0],
                    a2: 1.0,
                }
            }
            ModelKind::Scale { ln_lower, .. } => {
                expect_obs_len(obs, 1, &self.name)?;
                if obs[0] <= 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "x",
                        value: obs[0],
                        constraint: "scale observations must be positive",
                    });
                }
                PivotStats {
                    a1: obs[0].ln() - ln_lower,
                    a2: 1.0,
                }
            }
            ModelKind::LocationScale { n } => {
                expect_obs_len(obs, 2, &self.name)?;
                PivotStats {
                    a1: obs[0],
                    a2: obs[1] / (*n as f64).sqrt(),
                }
            }
            ModelKind::LinearCombination { weights, .. } => {
                expect_obs_len(obs, weights.len(), &self.name)?;
                PivotStats {
                    a1: dot(weights, obs),
                    a2: 1.0,
                }
            }
            ModelKind::HomogeneousScale { weights, .. } => {
                expect_obs_len(obs, weights.len() + 1, &self.name)?;
                PivotStats {
                    a1: dot(weights, &obs[..weights.len()]),
                    a2: obs[weights.len()],
                }
            }
            ModelKind::ScaleRatio { .. } => {
                expect_obs_len(obs, 2, &self.name)?;
                if obs[0] <= 0.0 || obs[1] <= 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "x",
                        value: obs[0].min(obs[1]),
                        constraint: "scale observations must be positive",
                    });
                }
                PivotStats {
                    a1: obs[1].ln() - obs[0].ln(),
                    a2: 1.0,
                }
            }
            ModelKind::Quantile { n, .. } => {
                expect_obs_len(obs, 2, &self.name)?;
                PivotStats {
                    a1: obs[0],
                    a2: obs[1] / (*n as f64).sqrt(),
                }
            }
        };
        if stats.a2.is_nan() || stats.a2 <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "a2",
                value: stats.a2,
                constraint: "a2(x) must be positive",
            });
        }
        Ok(stats)
    }

    /// Draws an observation and reduces it, without materializing the raw
    /// observation vector. The sampling path is identical to
    /// [`Self::sample`] followed by [`Self::observe`].
    pub fn sample_stats<R: Rng + ?Sized>(&self, theta: &Theta, rng: &mut R) -> Result<PivotStats> {
        let v = &theta.0;
        let stats = match &self.kind {
            ModelKind::Location { family } => PivotStats {
                a1: v[0] - family.sample_pivot(rng),
                a2: 1.0,
            },
            ModelKind::Scale {
                ln_lower,
                sampler,
                weibull,
                ..
            } => PivotStats {
                a1: (v[0] * sample_scale_component(sampler, weibull, rng)).ln() - ln_lower,
                a2: 1.0,
            },
            ModelKind::LocationScale { n } => {
                let (mean, sd) = normal_mean_sd(v[0], v[1], *n, rng);
                PivotStats {
                    a1: mean,
                    a2: sd / (*n as f64).sqrt(),
                }
            }
            ModelKind::LinearCombination { family, weights } => PivotStats {
                a1: weights
                    .iter()
                    .zip(v)
                    .map(|(w, th)| w * (th - family.sample_pivot(rng)))
                    .sum(),
                a2: 1.0,
            },
            ModelKind::HomogeneousScale {
                weights,
                df,
                chi_sampler,
            } => {
                let sigma = v[weights.len()];
                let a1 = weights
                    .iter()
                    .zip(v)
                    .map(|(w, th)| w * (th + sigma * rng.sample::<f64, _>(StandardNormal)))
                    .sum();
                let chi2 = rng.sample::<f64, _>(chi_sampler);
                PivotStats {
                    a1,
                    a2: sigma * (chi2 / *df as f64).sqrt(),
                }
            }
            ModelKind::ScaleRatio {
                sampler1, sampler2, ..
            } => {
                let x1 = v[0] * rng.sample::<f64, _>(sampler1);
                let x2 = v[1] * rng.sample::<f64, _>(sampler2);
                PivotStats {
                    a1: x2.ln() - x1.ln(),
                    a2: 1.0,
                }
            }
            ModelKind::Quantile { n, .. } => {
                let (mean, sd) = normal_mean_sd(v[0], v[1], *n, rng);
                PivotStats {
                    a1: mean,
                    a2: sd / (*n as f64).sqrt(),
                }
            }
        };
        debug_assert!(stats.a2 > 0.0);
        Ok(stats)
    }

    /// `Some(c)` when `a2(x)` is the constant `c`, enabling quadrature
    /// coverage.
    pub fn constant_scale(&self) -> Option<f64> {
        match &self.kind {
            ModelKind::Location { .. }
            | ModelKind::Scale { .. }
            | ModelKind::LinearCombination { .. }
            | ModelKind::ScaleRatio { .. } => Some(1.0),
            _ => None,
        }
    }

    fn check_theta(&self, theta: &Theta) -> Result<()> {
        let expected = self.theta_dim();
        if theta.0.len() != expected {
            return Err(Error::ThetaDimension {
                name: self.name.clone(),
                expected,
                got: theta.0.len(),
            });
        }
        Ok(())
    }

    /// Kolmogorov-Smirnov distance between `n` fresh draws of
    /// `-T(X, theta) = (tau(theta) - a1) / a2` and the model's pivot cdf.
    ///
    /// The pivotal property says the result does not depend on `theta`.
    pub fn ks_check<R: Rng + ?Sized>(
        &self,
        theta: &Theta,
        n: usize,
        rng: &mut R,
    ) -> Result<KsCheck> {
        let tau = self.tau(theta)?;
        let mut draws = Vec::with_capacity(n);
        for _ in 0..n {
            let s = self.sample_stats(theta, rng)?;
            draws.push((tau - s.a1) / s.a2);
        }
        draws.sort_unstable_by(f64::total_cmp);
        let nf = n as f64;
        let mut statistic: f64 = 0.0;
        for (i, &w) in draws.iter().enumerate() {
            let f = self.pivot.cdf(w);
            let upper = (i + 1) as f64 / nf - f;
            let lower = f - i as f64 / nf;
            statistic = statistic.max(upper.max(lower));
        }
        Ok(KsCheck { statistic, n })
    }
}

impl std::fmt::Debug for PivotModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PivotModel")
            .field("name", &self.name)
            .field("pivot", &self.pivot)
            .finish()
    }
}

/// Result of a pivotal self-check.
#[derive(Debug, Clone, Copy)]
pub struct KsCheck {
    pub statistic: f64,
    pub n: usize,
}

impl KsCheck {
    /// Comfort threshold ~= 1.9 / sqrt(n): 0.006 at n = 1e5.
    pub fn threshold(&self) -> f64 {
        1.9 / (self.n as f64).sqrt()
    }

    pub fn passes(&self) -> bool {
        self.statistic <= self.threshold()
    }
}

fn sample_scale_component<R: Rng + ?Sized>(
    gamma: &rand_distr::Gamma<f64>,
    weibull: &Option<rand_distr::Weibull<f64>>,
    rng: &mut R,
) -> f64 {
    match weibull {
        Some(w) => rng.sample::<f64, _>(w),
        None => rng.sample::<f64, _>(gamma),
    }
}

fn expect_obs_len(obs: &[f64], expected: usize, _model: &str) -> Result<()> {
    if obs.len() != expected {
        return Err(Error::InvalidParameter {
            name: "observation",
            value: obs.len() as f64,
            constraint: "unexpected observation dimension for this model",
        });
    }
    Ok(())
}

/// Sample mean and standard deviation (n-1 divisor) of `n` normal draws.
fn normal_mean_sd<R: Rng + ?Sized>(mu: f64, sigma: f64, n: usize, rng: &mut R) -> (f64, f64) {
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..n {
        let x: f64 = mu + sigma * rng.sample::<f64, _>(StandardNormal);
        sum += x;
        sumsq += x * x;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sumsq - nf * mean * mean) / (nf - 1.0)).max(f64::MIN_POSITIVE);
    (mean, var.sqrt())
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "weights",
            value: weights.len() as f64,
            constraint: "needs at least two components",
        });
    }
    if weights.iter().any(|w| !w.is_finite()) || weights.iter().all(|&w| w == 0.0) {
        return Err(Error::InvalidParameter {
            name: "weights",
            value: 0.0,
            constraint: "must be finite and not all zero",
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credible::posterior_survival;
    use crate::testoracle;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn location_pivots_are_centered() {
        for family in [
            LocationFamily::Normal,
            LocationFamily::Laplace,
            LocationFamily::Logistic,
        ] {
            let model = PivotModel::location(family);
            assert_abs_diff_eq!(model.pivot().cdf(0.0), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn location_ks_checks_pass() {
        for (seed, family) in [
            (101, LocationFamily::Normal),
            (102, LocationFamily::Laplace),
            (103, LocationFamily::Logistic),
            (104, LocationFamily::ShiftedExponential),
        ] {
            let model = PivotModel::location(family);
            for theta in [0.0, 2.7] {
                let ks = model
                    .ks_check(&Theta(vec![theta]), 100_000, &mut rng(seed))
                    .unwrap();
                assert!(
                    ks.statistic <= 0.006,
                    "{} at theta={theta}: KS = {}",
                    model.name(),
                    ks.statistic
                );
            }
        }
    }

    #[test]
    fn unknown_labels_are_rejected() {
        assert!(matches!(
            "cauchy".parse::<LocationFamily>(),
            Err(Error::UnknownLabel { .. })
        ));
        assert!(matches!(
            "pareto".parse::<ScaleFamily>(),
            Err(Error::UnknownLabel { .. })
        ));
    }

    #[test]
    fn scale_model_cdf_values() {
        let exp = PivotModel::scale(ScaleFamily::Exponential, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(exp.pivot().cdf(0.0), (-1.0f64).exp(), epsilon = 1e-12);

        let gamma2 = PivotModel::scale(ScaleFamily::Gamma, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            gamma2.pivot().cdf(0.0),
            testoracle::gamma2_sf(1.0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn scale_model_boundary_theta() {
        let model = PivotModel::scale(ScaleFamily::Gamma, 2.0, 2.5).unwrap();
        let theta = model.theta_from_tau(0.0);
        assert_abs_diff_eq!(theta.0[0], 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(model.tau(&theta).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn scale_model_rejects_bad_parameters() {
        assert!(PivotModel::scale(ScaleFamily::Gamma, -1.0, 1.0).is_err());
        assert!(PivotModel::scale(ScaleFamily::Gamma, 2.0, 0.0).is_err());
        assert!(PivotModel::scale(ScaleFamily::Exponential, 2.0, 1.0).is_err());
    }

    #[test]
    fn scale_ks_checks_pass() {
        for (seed, model) in [
            (
                111,
                PivotModel::scale(ScaleFamily::Gamma, 2.0, 1.0).unwrap(),
            ),
            (
                112,
                PivotModel::scale(ScaleFamily::Weibull, 1.7, 1.0).unwrap(),
            ),
            (
                113,
                PivotModel::scale(ScaleFamily::Exponential, 1.0, 2.0).unwrap(),
            ),
        ] {
            for tau in [0.0, 1.4] {
                let theta = model.theta_from_tau(tau);
                let ks = model.ks_check(&theta, 100_000, &mut rng(seed)).unwrap();
                assert!(
                    ks.statistic <= 0.006,
                    "{} at tau={tau}: KS = {}",
                    model.name(),
                    ks.statistic
                );
            }
        }
    }

    #[test]
    fn location_scale_small_n_is_cauchy() {
        let model = PivotModel::location_scale_normal(2).unwrap();
        assert_abs_diff_eq!(model.pivot().cdf(0.0), 0.5, epsilon = 1e-12);
        // t(1) cdf closed form.
        assert_abs_diff_eq!(model.pivot().cdf(1.0), 0.75, epsilon = 1e-10);
        assert!(PivotModel::location_scale_normal(1).is_err());
    }

    #[test]
    fn location_scale_ks_scale_invariant() {
        let model = PivotModel::location_scale_normal(10).unwrap();
        // sigma = 1 and sigma = 3 must both match t(9).
        for (seed, sigma) in [(121, 1.0), (122, 3.0)] {
            let ks = model
                .ks_check(&Theta(vec![0.0, sigma]), 100_000, &mut rng(seed))
                .unwrap();
            assert!(
                ks.statistic <= 0.006,
                "sigma={sigma}: KS = {}",
                ks.statistic
            );
        }
    }

    #[test]
    fn lincomb_normal_scales_quantiles() {
        let model = PivotModel::linear_combination_normal(&[1.0, -1.0]).unwrap();
        assert_abs_diff_eq!(model.pivot().cdf(0.0), 0.5, epsilon = 1e-12);
        let q = model.pivot().quantile(0.975).unwrap();
        assert_abs_diff_eq!(q, 2.771808, epsilon = 1e-4);
        assert_abs_diff_eq!(
            q,
            testoracle::normal_quantile(0.975) * std::f64::consts::SQRT_2,
            epsilon = 1e-6
        );
        assert!(PivotModel::linear_combination_normal(&[0.0, 0.0]).is_err());
        assert!(PivotModel::linear_combination_normal(&[1.0]).is_err());
    }

    #[test]
    fn lincomb_empirical_ks_passes() {
        let mut r = rng(131);
        let model = PivotModel::linear_combination_empirical(
            LocationFamily::ShiftedExponential,
            &[1.0, 1.0, 1.0],
            1_000_000,
            &mut r,
        )
        .unwrap();
        assert!(!model.pivot().is_symmetric());
        let theta = model.theta_from_tau(0.9);
        let ks = model.ks_check(&theta, 100_000, &mut r).unwrap();
        assert!(ks.statistic <= 0.006, "KS = {}", ks.statistic);
    }

    #[test]
    fn scale_ratio_symmetry_and_mass() {
        let eq = PivotModel::scale_ratio(1.0, 1.0).unwrap();
        assert!(eq.pivot().is_symmetric());
        assert_abs_diff_eq!(eq.pivot().cdf(0.0), 0.5, epsilon = 1e-12);

        let model = PivotModel::scale_ratio(2.0, 1.0).unwrap();
        // Monte Carlo oracle for P(V1 <= V2), V1 ~ Gamma(2), V2 ~ Exp(1).
        let mut r = rng(141);
        let g1 = rand_distr::Gamma::new(2.0, 1.0).unwrap();
        let g2 = rand_distr::Gamma::new(1.0, 1.0).unwrap();
        let n = 1_000_000;
        let hits = (0..n)
            .filter(|_| r.sample::<f64, _>(&g1) <= r.sample::<f64, _>(&g2))
            .count();
        let mc = hits as f64 / n as f64;
        assert!(
            (model.pivot().cdf(0.0) - mc).abs() < 0.002,
            "analytic {} vs MC {mc}",
            model.pivot().cdf(0.0)
        );

        let ks = model
            .ks_check(&model.theta_from_tau(0.7), 100_000, &mut r)
            .unwrap();
        assert!(ks.statistic <= 0.006, "KS = {}", ks.statistic);
        assert!(PivotModel::scale_ratio(0.0, 1.0).is_err());
    }

    #[test]
    fn quantile_model_reduces_to_location_scale_at_eta_zero() {
        let mut r = rng(151);
        let model = PivotModel::quantile_normal(0.0, 6, 1_000_000, &mut r).unwrap();
        let student = PivotDistribution::student_t(5.0).unwrap();
        // KS distance between the calibrated pivot and t(5) on a quantile grid.
        let mut worst: f64 = 0.0;
        for i in 1..200 {
            let p = i as f64 / 200.0;
            let w = model.pivot().quantile(p).unwrap();
            worst = worst.max((student.cdf(w) - p).abs());
        }
        assert!(worst <= 0.006, "distance to t(5): {worst}");
    }

    #[test]
    fn quantile_model_is_asymmetric_for_nonzero_eta() {
        let mut r = rng(152);
        let model = PivotModel::quantile_normal(1.0, 5, 200_000, &mut r).unwrap();
        assert!(!model.pivot().is_symmetric());
        let g = model.pivot();
        // Symmetry identity fails visibly.
        let residual = (g.cdf(-1.0) - (1.0 - g.cdf(1.0))).abs();
        assert!(residual > 1e-3, "residual {residual}");
        let ks = model
            .ks_check(&model.theta_from_tau(0.5), 100_000, &mut r)
            .unwrap();
        assert!(ks.statistic <= 0.006, "KS = {}", ks.statistic);
        assert!(PivotModel::quantile_normal(1.0, 1, 10_000, &mut r).is_err());
    }

    #[test]
    fn homoscale_ks_passes() {
        let model = PivotModel::homogeneous_scale_normal(&[1.0, -1.0], 8).unwrap();
        let ks = model
            .ks_check(&model.theta_from_tau(1.1), 100_000, &mut rng(161))
            .unwrap();
        assert!(ks.statistic <= 0.006, "KS = {}", ks.statistic);
        assert!(model.constant_scale().is_none());
    }

    #[test]
    fn theta_from_tau_round_trips() {
        let mut r = rng(171);
        let models = [
            PivotModel::location(LocationFamily::Normal),
            PivotModel::scale(ScaleFamily::Gamma, 2.0, 2.5).unwrap(),
            PivotModel::location_scale_normal(10).unwrap(),
            PivotModel::linear_combination_normal(&[1.0, -1.0]).unwrap(),
            PivotModel::homogeneous_scale_normal(&[2.0, 1.0], 5).unwrap(),
            PivotModel::scale_ratio(2.0, 1.0).unwrap(),
            PivotModel::quantile_normal(0.5, 5, 10_000, &mut r).unwrap(),
        ];
        for model in &models {
            for v in [0.0, 0.3, 1.0, 2.2, 4.8] {
                let theta = model.theta_from_tau(v);
                assert_abs_diff_eq!(model.tau(&theta).unwrap(), v, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn flat_prior_location_posterior_matches_pivot_survival() {
        // Far from the constraint the truncation is inert and the posterior
        // survival reduces to the pivot's.
        let model = PivotModel::location(LocationFamily::Normal);
        let a1 = 50.0;
        for y in [48.0, 50.0, 52.5] {
            let s = posterior_survival(y, a1, 1.0, model.pivot()).unwrap();
            assert_abs_diff_eq!(s, model.pivot().sf(y - a1), epsilon = 1e-9);
        }
    }

    #[test]
    fn observe_matches_sample_stats_layout() {
        let mut r = rng(181);
        let models = [
            PivotModel::location(LocationFamily::ShiftedExponential),
            PivotModel::scale(ScaleFamily::Gamma, 2.0, 1.0).unwrap(),
            PivotModel::location_scale_normal(7).unwrap(),
            PivotModel::linear_combination_normal(&[1.0, -1.0, 0.5]).unwrap(),
            PivotModel::homogeneous_scale_normal(&[1.0, 1.0], 4).unwrap(),
            PivotModel::scale_ratio(1.0, 2.0).unwrap(),
        ];
        for model in &models {
            let theta = model.theta_from_tau(0.8);
            let obs = model.sample(&theta, &mut r).unwrap();
            let stats = model.observe(&obs).unwrap();
            assert!(stats.a2 > 0.0);
            assert!(stats.a1.is_finite());
        }
    }

    #[test]
    fn theta_dimension_is_enforced() {
        let model = PivotModel::location_scale_normal(5).unwrap();
        assert!(matches!(
            model.tau(&Theta(vec![1.0])),
            Err(Error::ThetaDimension { .. })
        ));
    }
}
