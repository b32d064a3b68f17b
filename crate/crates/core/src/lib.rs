//! Bayesian credible intervals for lower-bounded parametric functions.
//!
//! Given a pivotal model `T(X, theta) = (a1(X) - tau(theta)) / a2(X)` with
//! `a2 > 0`, the constraint `tau(theta) >= 0`, and the truncated right-Haar
//! prior, this crate constructs `(1 - alpha)` credible intervals through
//! *spending functions* (the allocation of the missing posterior mass above
//! and below the interval), checks spending functions against the
//! admissibility band that guarantees frequentist coverage above
//! `(1 - alpha) / (1 + alpha)`, and certifies that guarantee empirically by
//! Monte Carlo and deterministic quadrature over a catalog of location,
//! scale, location-scale, and derived model families.
//!
//! The pieces:
//!
//! - [`pivot`]: distributions of the negated pivot `-T` (cdf, density,
//!   robust quantile inversion, empirical pivots from calibration draws);
//! - [`credible`]: posterior survival function, spending functions,
//!   interval constructions, and the admissibility validator;
//! - [`models`]: concrete pivotal model families with samplers and
//!   Kolmogorov-Smirnov self-checks;
//! - [`coverage`]: coverage estimation by Monte Carlo and quadrature,
//!   grid sweeps, and pass/fail reports against the coverage bound;
//! - [`report`]: plain-text (CSV/TSV) rendering of reports.

pub mod coverage;
pub mod credible;
mod error;
pub mod models;
pub mod pivot;
pub mod report;

pub use error::{Error, Result};
