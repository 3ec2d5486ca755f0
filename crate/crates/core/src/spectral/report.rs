use std::fmt::Write as _;

use super::CorrectionReport;
use crate::chebpoly::{fmt_real, fmt_real_array, uniform_grid};

/// Grid used for the bound summary of a report document.
const SUMMARY_GRID: usize = 10_000;

/// Correction report as a TOML document.
///
/// Besides the raw vectors it records the largest value of the pointwise
/// bound over `[a, 1]`, sampled on a 10 000-point grid.
pub fn correction_report_document(report: &CorrectionReport, a: f64) -> String {
    let bound_max = uniform_grid(a, 1.0, SUMMARY_GRID)
        .into_iter()
        .map(|x| report.bound_at(x))
        .fold(0.0, f64::max);
    let mut out = String::new();
    let _ = writeln!(out, "k_eff = {}", report.k_eff());
    let _ = writeln!(out, "n_terms = {}", report.correction.len());
    let _ = writeln!(out, "gram_condition = {}", fmt_real(report.gram_condition));
    let _ = writeln!(
        out,
        "lambda_basis_norm = {}",
        fmt_real(report.lambda_basis_norm)
    );
    let _ = writeln!(out, "alpha_norm = {}", fmt_real(report.alpha_norm()));
    let _ = writeln!(out, "base_eps = {}", fmt_real(report.base_eps));
    let _ = writeln!(out, "post_residual = {}", fmt_real(report.post_residual));
    let _ = writeln!(out, "bound_max = {}", fmt_real(bound_max));
    fmt_real_array(&mut out, "targets", &report.targets);
    fmt_real_array(&mut out, "residuals", &report.residuals);
    fmt_real_array(&mut out, "alpha", &report.alpha);
    fmt_real_array(&mut out, "correction", &report.correction);
    out
}
