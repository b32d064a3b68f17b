//! `credible`: compute one interval, sweep frequentist coverage, or validate
//! a spending rule, with reproducible CSV/TSV output.

mod catalog;
mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use bounded_credible::coverage::{theta_sweep, MIN_QUADRATURE_NODES};
use bounded_credible::credible::{
    bounds_from_spending, default_validation_grid, delta0, hpd_symmetric_bounds, validate_spending,
    y_boundary,
};
use bounded_credible::report::{format_sig, INTERVAL_HEADER};

use config::{CommandKind, CommonArgs, FileConfig, OutputFormat, RunConfig};

const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Relative output paths are resolved against this directory when set.
const OUT_DIR_ENV: &str = "CREDIBLE_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "credible",
    version,
    about = "Credible intervals for lower-bounded parameters with a frequentist coverage floor"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one credible interval from an observation.
    Interval {
        #[command(flatten)]
        common: CommonArgs,
        /// Observation, comma-separated in the model's raw layout
        /// (e.g. one value for location models, "mean,sd" for
        /// location-scale-normal).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<f64>>,
    },
    /// Estimate frequentist coverage over a tau grid.
    Coverage {
        #[command(flatten)]
        common: CommonArgs,
        /// Left end of the tau grid.
        #[arg(long)]
        tau_min: Option<f64>,
        /// Right end of the tau grid.
        #[arg(long)]
        tau_max: Option<f64>,
        /// Number of grid points.
        #[arg(long)]
        grid: Option<usize>,
        /// Monte Carlo replicates per grid point (>= 10000).
        #[arg(long)]
        reps: Option<usize>,
        /// Quadrature nodes for constant-a2 models (>= 100000).
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Check a spending rule against the admissibility band.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
        /// Left end of the t grid (defaults to an automatic grid).
        #[arg(long)]
        t_min: Option<f64>,
        /// Right end of the t grid.
        #[arg(long)]
        t_max: Option<f64>,
        /// Number of t grid points.
        #[arg(long)]
        t_points: Option<usize>,
    },
}

enum CliError {
    Usage(String),
    Failure(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(err: anyhow::Error) -> Self {
        CliError::Failure(err)
    }
}

/// Construction-time errors are usage errors (bad labels or parameters);
/// everything else is a runtime failure.
fn usage(err: bounded_credible::Error) -> CliError {
    let mut msg = err.to_string();
    if matches!(
        err,
        bounded_credible::Error::UnknownLabel { what: "model", .. }
    ) {
        msg.push_str("\nknown models: ");
        msg.push_str(&catalog::MODEL_LABELS.join(", "));
    }
    CliError::Usage(msg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Interval { common, x } => {
            let config = resolve(CommandKind::Interval, common, |file, cfg| {
                cfg.x = x.clone().or(file.x.clone()).unwrap_or_default();
            })?;
            run_interval(&config)
        }
        Command::Coverage {
            common,
            tau_min,
            tau_max,
            grid,
            reps,
            nodes,
        } => {
            let config = resolve(CommandKind::Coverage, common, |file, cfg| {
                cfg.tau_min = tau_min.or(file.tau_min).unwrap_or(0.0);
                if let Some(t) = tau_max.or(file.tau_max) {
                    cfg.tau_max = t;
                }
                cfg.grid = grid.or(file.grid).unwrap_or(51);
                cfg.reps = reps.or(file.reps).unwrap_or(100_000);
                cfg.nodes = nodes.or(file.nodes).unwrap_or(200_000);
            })?;
            run_coverage(&config)
        }
        Command::Validate {
            common,
            t_min,
            t_max,
            t_points,
        } => {
            let config = resolve(CommandKind::Validate, common, |file, cfg| {
                cfg.t_min = t_min.or(file.t_min);
                cfg.t_max = t_max.or(file.t_max);
                cfg.t_points = t_points.or(file.t_points).unwrap_or(201);
            })?;
            run_validate(&config)
        }
    }
}

/// Layers defaults, then the config file, then flags, into a [`RunConfig`].
fn resolve(
    command: CommandKind,
    common: CommonArgs,
    extra: impl FnOnce(&FileConfig, &mut RunConfig),
) -> Result<RunConfig, CliError> {
    let file: FileConfig = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))
                .map_err(CliError::Failure)?;
            toml::from_str(&text)
                .map_err(|e| CliError::Usage(format!("config file {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let format = match common
        .format
        .or(file.format.clone())
        .unwrap_or_else(|| "csv".to_string())
        .as_str()
    {
        "csv" => OutputFormat::Csv,
        "tsv" => OutputFormat::Tsv,
        other => return Err(CliError::Usage(format!("unknown output format '{other}'"))),
    };
    let mut config = RunConfig {
        command,
        model: common
            .model
            .or(file.model.clone())
            .ok_or_else(|| CliError::Usage("missing --model".to_string()))?,
        alpha: common.alpha.or(file.alpha).unwrap_or(0.05),
        spending: common
            .spending
            .or(file.spending.clone())
            .unwrap_or_else(|| "equal-tails".to_string()),
        shape: common.shape.or(file.shape).unwrap_or(1.0),
        shape2: common.shape2.or(file.shape2).unwrap_or(1.0),
        bound: common.bound.or(file.bound).unwrap_or(1.0),
        n: common.n.or(file.n).unwrap_or(10),
        eta: common.eta.or(file.eta).unwrap_or(0.0),
        weights: common
            .weights
            .or(file.weights.clone())
            .unwrap_or_else(|| vec![1.0, -1.0]),
        calibration: common.calibration.or(file.calibration).unwrap_or(1_000_000),
        seed: common.seed.or(file.seed).unwrap_or(0),
        out: common.out.or(file.out.clone()),
        format,
        x: Vec::new(),
        tau_min: 0.0,
        tau_max: f64::NAN,
        grid: 51,
        reps: 100_000,
        nodes: 200_000.max(MIN_QUADRATURE_NODES),
        t_min: None,
        t_max: None,
        t_points: 201,
    };
    extra(&file, &mut config);
    Ok(config)
}

fn run_interval(config: &RunConfig) -> Result<ExitCode, CliError> {
    let model = catalog::build_model(config).map_err(usage)?;
    let spending = catalog::build_spending(config, model.pivot()).map_err(usage)?;
    if config.x.is_empty() {
        return Err(CliError::Usage(
            "interval needs an observation: --x <values>".to_string(),
        ));
    }
    let stats = model.observe(&config.x).map_err(usage)?;
    let pivot = model.pivot();
    let alpha = config.alpha;
    let t = stats.t();
    let interval = if config.spending == "hpd-symmetric" {
        hpd_symmetric_bounds(stats.a1, stats.a2, alpha, pivot)
            .map_err(|e| CliError::Failure(e.into()))?
    } else {
        let alpha_x = spending.spend(t);
        bounds_from_spending(stats.a1, stats.a2, alpha, alpha_x, pivot)
            .map_err(|e| CliError::Failure(e.into()))?
    };
    let y0 = y_boundary(alpha, pivot).map_err(|e| CliError::Failure(e.into()))?;
    let d0 = delta0(t, alpha, pivot).map_err(|e| CliError::Failure(e.into()))?;

    println!("l = {}", format_sig(interval.lower));
    println!("u = {}", format_sig(interval.upper));
    println!("alpha_x = {}", format_sig(interval.spent_upper));
    println!("t = {}", format_sig(t));
    println!("y0 = {}", format_sig(y0));
    println!("delta0 = {}", format_sig(d0));

    let delim = config.format.delimiter();
    let header = INTERVAL_HEADER.replace(',', &delim.to_string());
    let row = [
        format_sig(interval.lower),
        format_sig(interval.upper),
        format_sig(interval.spent_upper),
        format_sig(t),
        format_sig(y0),
        format_sig(d0),
    ]
    .join(&delim.to_string());
    println!("{header}");
    println!("{row}");

    if config.out.is_some() {
        let body = format!("{header}\n{row}\n");
        write_output(config, &body)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_coverage(config: &RunConfig) -> Result<ExitCode, CliError> {
    if !config.tau_max.is_finite() && config.grid >= 2 {
        return Err(CliError::Usage(
            "coverage needs --tau-max (or a 1-point grid)".to_string(),
        ));
    }
    let model = catalog::build_model(config).map_err(usage)?;
    let spending = catalog::build_spending(config, model.pivot()).map_err(usage)?;
    let report = theta_sweep(
        &model,
        &spending,
        config.alpha,
        config.tau_min,
        config.tau_max,
        config.grid,
        config.reps,
        config.seed,
    )
    .map_err(|e| CliError::Failure(e.into()))?;
    let body = report.to_delimited(config.format.delimiter());
    write_output(config, &body)?;
    Ok(if report.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_validate(config: &RunConfig) -> Result<ExitCode, CliError> {
    let model = catalog::build_model(config).map_err(usage)?;
    let pivot = model.pivot();
    let spending = catalog::build_spending(config, pivot).map_err(usage)?;
    let grid = match (config.t_min, config.t_max) {
        (Some(lo), Some(hi)) if config.t_points >= 2 && hi > lo => (0..config.t_points)
            .map(|i| lo + (hi - lo) * i as f64 / (config.t_points - 1) as f64)
            .collect(),
        (None, None) => {
            default_validation_grid(config.alpha, pivot).map_err(|e| CliError::Failure(e.into()))?
        }
        _ => {
            return Err(CliError::Usage(
                "validate needs both --t-min and --t-max (with --t-points >= 2), or neither"
                    .to_string(),
            ))
        }
    };
    let report =
        validate_spending(&spending, pivot, &grid).map_err(|e| CliError::Failure(e.into()))?;
    let body = report.to_delimited(config.format.delimiter());
    write_output(config, &body)?;
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Prepends the reproducibility comment and writes to the configured
/// destination (stdout when no --out was given).
fn write_output(config: &RunConfig, body: &str) -> Result<(), CliError> {
    let comment = format!(
        "# credible {VERSION} config={:016x} seed={}\n",
        config.fingerprint(),
        config.seed
    );
    match &config.out {
        Some(path) => {
            let path = resolve_out_path(path);
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)
                        .with_context(|| format!("creating {}", parent.display()))
                        .map_err(CliError::Failure)?;
                }
            }
            fs::write(&path, format!("{comment}{body}"))
                .with_context(|| format!("writing {}", path.display()))
                .map_err(CliError::Failure)?;
        }
        None => {
            print!("{comment}{body}");
        }
    }
    Ok(())
}

fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}
