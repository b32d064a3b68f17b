//! Delimited-text rendering of coverage and validation reports.
//!
//! One interchange format: RFC-4180-style rows, `.` decimal separator,
//! floats at 12 significant digits, headers bit-exact so downstream tooling
//! can key on them.

use crate::coverage::CoverageReport;
use crate::credible::ValidationReport;

pub const COVERAGE_HEADER: &str = "tau,estimate,std_error,quadrature,bound,pass";
pub const COVERAGE_SUMMARY_HEADER: &str = "min_coverage,bound,verdict";
pub const VALIDATION_HEADER: &str = "t,alpha_x,band_lo,band_hi,pass";
pub const INTERVAL_HEADER: &str = "l,u,alpha_x,t,y0,delta0";

/// Formats with exactly 12 significant digits, deterministically.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{x:.11e}")
}

fn join(fields: &[String], delimiter: char) -> String {
    fields.join(&delimiter.to_string())
}

impl CoverageReport {
    /// Rows under [`COVERAGE_HEADER`], then the summary block under
    /// [`COVERAGE_SUMMARY_HEADER`].
    pub fn to_delimited(&self, delimiter: char) -> String {
        let mut out = String::new();
        out.push_str(&COVERAGE_HEADER.replace(',', &delimiter.to_string()));
        out.push('\n');
        for i in 0..self.tau_grid.len() {
            let quad = self
                .quadrature
                .as_ref()
                .map(|qs| format_sig(qs[i]))
                .unwrap_or_default();
            let row = [
                format_sig(self.tau_grid[i]),
                format_sig(self.estimates[i]),
                format_sig(self.std_errors[i]),
                quad,
                format_sig(self.bound),
                self.point_pass(i).to_string(),
            ];
            out.push_str(&join(&row, delimiter));
            out.push('\n');
        }
        out.push_str(&COVERAGE_SUMMARY_HEADER.replace(',', &delimiter.to_string()));
        out.push('\n');
        let summary = [
            format_sig(self.min_coverage),
            format_sig(self.bound),
            if self.verdict { "pass" } else { "fail" }.to_string(),
        ];
        out.push_str(&join(&summary, delimiter));
        out.push('\n');
        out
    }
}

impl ValidationReport {
    /// Rows under [`VALIDATION_HEADER`].
    pub fn to_delimited(&self, delimiter: char) -> String {
        let mut out = String::new();
        out.push_str(&VALIDATION_HEADER.replace(',', &delimiter.to_string()));
        out.push('\n');
        for p in &self.points {
            let row = [
                format_sig(p.t),
                format_sig(p.alpha_x),
                format_sig(p.band.0),
                format_sig(p.band.1),
                p.pass.to_string(),
            ];
            out.push_str(&join(&row, delimiter));
            out.push('\n');
        }
        out
    }
}
