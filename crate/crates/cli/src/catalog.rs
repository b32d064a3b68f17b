//! Maps model and spending labels from the command line onto library
//! constructors.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use bounded_credible::credible::SpendingFunction;
use bounded_credible::models::{LocationFamily, PivotModel, ScaleFamily};
use bounded_credible::pivot::PivotDistribution;

use crate::config::RunConfig;

/// Stream reserved for pivot calibration so it never collides with the
/// sweep streams derived from grid/chunk indices.
const CALIBRATION_STREAM: u64 = u64::MAX;

pub const MODEL_LABELS: &[&str] = &[
    "location-normal",
    "location-laplace",
    "location-logistic",
    "location-expshift",
    "scale-gamma",
    "scale-weibull",
    "scale-exponential",
    "location-scale-normal",
    "lincomb-normal",
    "lincomb-expshift",
    "homoscale-normal",
    "scale-ratio-gamma",
    "quantile-normal",
];

pub fn build_model(config: &RunConfig) -> Result<PivotModel, bounded_credible::Error> {
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    rng.set_stream(CALIBRATION_STREAM);
    match config.model.as_str() {
        "location-normal" => Ok(PivotModel::location(LocationFamily::Normal)),
        "location-laplace" => Ok(PivotModel::location(LocationFamily::Laplace)),
        "location-logistic" => Ok(PivotModel::location(LocationFamily::Logistic)),
        "location-expshift" => Ok(PivotModel::location(LocationFamily::ShiftedExponential)),
        "scale-gamma" => PivotModel::scale(ScaleFamily::Gamma, config.shape, config.bound),
        "scale-weibull" => PivotModel::scale(ScaleFamily::Weibull, config.shape, config.bound),
        "scale-exponential" => {
            PivotModel::scale(ScaleFamily::Exponential, config.shape, config.bound)
        }
        "location-scale-normal" => PivotModel::location_scale_normal(config.n),
        "lincomb-normal" => PivotModel::linear_combination_normal(&config.weights),
        "lincomb-expshift" => PivotModel::linear_combination_empirical(
            LocationFamily::ShiftedExponential,
            &config.weights,
            config.calibration,
            &mut rng,
        ),
        "homoscale-normal" => PivotModel::homogeneous_scale_normal(&config.weights, config.n),
        "scale-ratio-gamma" => PivotModel::scale_ratio(config.shape, config.shape2),
        "quantile-normal" => {
            PivotModel::quantile_normal(config.eta, config.n, config.calibration, &mut rng)
        }
        other => Err(bounded_credible::Error::UnknownLabel {
            what: "model",
            label: other.to_string(),
        }),
    }
}

pub fn build_spending(
    config: &RunConfig,
    pivot: &PivotDistribution,
) -> Result<SpendingFunction, bounded_credible::Error> {
    let alpha = config.alpha;
    match config.spending.as_str() {
        "equal-tails" => SpendingFunction::equal_tails(alpha, pivot),
        "hpd-symmetric" => SpendingFunction::hpd_symmetric(alpha, pivot),
        "band-lower" => SpendingFunction::band_lower(alpha, pivot),
        "band-upper" => SpendingFunction::band_upper(alpha, pivot),
        other => {
            if let Some(value) = other.strip_prefix("constant:") {
                let level: f64 =
                    value
                        .parse()
                        .map_err(|_| bounded_credible::Error::UnknownLabel {
                            what: "spending",
                            label: other.to_string(),
                        })?;
                SpendingFunction::custom(alpha, other, move |_| level)
            } else {
                Err(bounded_credible::Error::UnknownLabel {
                    what: "spending",
                    label: other.to_string(),
                })
            }
        }
    }
}
