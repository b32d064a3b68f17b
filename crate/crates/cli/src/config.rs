//! Run configuration: flag parsing, config-file merging, and the canonical
//! fingerprint recorded in output headers.

use std::path::PathBuf;

use clap::Args;
use serde::Deserialize;

use bounded_credible::report::format_sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Interval,
    Coverage,
    Validate,
}

impl CommandKind {
    pub fn label(&self) -> &'static str {
        match self {
            CommandKind::Interval => "interval",
            CommandKind::Coverage => "coverage",
            CommandKind::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Tsv,
}

impl OutputFormat {
    pub fn delimiter(&self) -> char {
        match self {
            OutputFormat::Csv => ',',
            OutputFormat::Tsv => '\t',
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Tsv => "tsv",
        }
    }
}

/// Flags shared by every subcommand. All values are optional here so a
/// config file can supply them; flags override the file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Plain-text (TOML) config file with the same field names, underscored.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Model label, e.g. location-normal, scale-gamma, location-scale-normal.
    #[arg(long)]
    pub model: Option<String>,

    /// Credibility deficit alpha in (0, 1).
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Spending rule: equal-tails | hpd-symmetric | band-lower | band-upper
    /// | constant:<value>.
    #[arg(long)]
    pub spending: Option<String>,

    /// Shape parameter (scale families; first shape of scale-ratio-gamma).
    #[arg(long)]
    pub shape: Option<f64>,

    /// Second shape parameter of scale-ratio-gamma.
    #[arg(long)]
    pub shape2: Option<f64>,

    /// Scale lower bound a (theta >= a) for scale families.
    #[arg(long)]
    pub bound: Option<f64>,

    /// Sample size n for location-scale-normal, quantile-normal,
    /// homoscale-normal.
    #[arg(long)]
    pub n: Option<usize>,

    /// Quantile offset eta for quantile-normal (tau = mu + eta sigma).
    #[arg(long)]
    pub eta: Option<f64>,

    /// Comma-separated weights for lincomb-* and homoscale-normal.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weights: Option<Vec<f64>>,

    /// Calibration draws for empirically calibrated pivots.
    #[arg(long)]
    pub calibration: Option<usize>,

    /// Master seed for every random stream.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output file; relative paths land in $CREDIBLE_OUT_DIR if set.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format: csv | tsv.
    #[arg(long)]
    pub format: Option<String>,
}

/// The same field names, as an optional config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub alpha: Option<f64>,
    pub spending: Option<String>,
    pub shape: Option<f64>,
    pub shape2: Option<f64>,
    pub bound: Option<f64>,
    pub n: Option<usize>,
    pub eta: Option<f64>,
    pub weights: Option<Vec<f64>>,
    pub calibration: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub x: Option<Vec<f64>>,
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub grid: Option<usize>,
    pub reps: Option<usize>,
    pub nodes: Option<usize>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_points: Option<usize>,
}

/// Fully resolved configuration for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub model: String,
    pub alpha: f64,
    pub spending: String,
    pub shape: f64,
    pub shape2: f64,
    pub bound: f64,
    pub n: usize,
    pub eta: f64,
    pub weights: Vec<f64>,
    pub calibration: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Observation for `interval`, in the model's raw layout.
    pub x: Vec<f64>,
    pub tau_min: f64,
    pub tau_max: f64,
    pub grid: usize,
    pub reps: usize,
    pub nodes: usize,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_points: usize,
}

impl RunConfig {
    /// Canonical key=value rendering of everything that determines the run's
    /// numbers. The output path is deliberately excluded: identical runs
    /// must produce identical bytes wherever they are written.
    pub fn canonical_string(&self) -> String {
        let weights: Vec<String> = self.weights.iter().map(|w| format_sig(*w)).collect();
        let x: Vec<String> = self.x.iter().map(|v| format_sig(*v)).collect();
        format!(
            "command={};model={};alpha={};spending={};shape={};shape2={};bound={};n={};eta={};\
             weights={};calibration={};seed={};format={};x={};tau_min={};tau_max={};grid={};\
             reps={};nodes={};t_min={};t_max={};t_points={}",
            self.command.label(),
            self.model,
            format_sig(self.alpha),
            self.spending,
            format_sig(self.shape),
            format_sig(self.shape2),
            format_sig(self.bound),
            self.n,
            format_sig(self.eta),
            weights.join(" "),
            self.calibration,
            self.seed,
            self.format.label(),
            x.join(" "),
            format_sig(self.tau_min),
            format_sig(self.tau_max),
            self.grid,
            self.reps,
            self.nodes,
            self.t_min.map(format_sig).unwrap_or_default(),
            self.t_max.map(format_sig).unwrap_or_default(),
            self.t_points,
        )
    }

    pub fn fingerprint(&self) -> u64 {
        fnv1a64(self.canonical_string().as_bytes())
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
