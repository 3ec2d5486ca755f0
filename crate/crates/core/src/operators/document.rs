//! Text format for exported spectra.
//!
//! ```toml
//! kind = "poisson1d"
//! normalization = "max-eigenvalue"
//! size = 4
//! scale = 9.0450849718747364e1
//! kappa = 9.4721359549995787e0
//! merge_tol = 1.0000000000000001e-9
//! values = [
//!     1.0557280900008412e-1,
//!     ...
//! ]
//! ```
//!
//! Only `values` is required; `merge_tol` defaults to `1e-9`.

use std::fmt::Write as _;

use serde::Deserialize;

use super::{Normalization, OperatorKind, OperatorModel};
use crate::chebpoly::{fmt_real, fmt_real_array, parse_toml};
use crate::error::Result;
use crate::spectral::{merge_duplicates, Spectrum, DEFAULT_MERGE_TOL};

/// A parsed spectrum document.
#[derive(Clone, Debug)]
pub struct SpectrumDocument {
    pub kind: Option<OperatorKind>,
    pub normalization: Option<Normalization>,
    pub size: Option<usize>,
    pub scale: Option<f64>,
    pub kappa: Option<f64>,
    pub spectrum: Spectrum,
}

/// Exports the normalized spectrum of `op`.
pub fn spectrum_document(op: &OperatorModel, merge_tol: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind = \"{}\"", op.kind());
    let _ = writeln!(out, "normalization = \"{}\"", op.normalization());
    let _ = writeln!(out, "size = {}", op.size());
    let _ = writeln!(out, "scale = {}", fmt_real(op.scale()));
    let _ = writeln!(out, "kappa = {}", fmt_real(op.kappa()));
    let _ = writeln!(out, "merge_tol = {}", fmt_real(merge_tol));
    fmt_real_array(&mut out, "values", op.eigenvalues());
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrum {
    kind: Option<OperatorKind>,
    normalization: Option<Normalization>,
    size: Option<usize>,
    scale: Option<f64>,
    kappa: Option<f64>,
    merge_tol: Option<f64>,
    values: Vec<f64>,
}

pub fn spectrum_from_document(text: &str) -> Result<SpectrumDocument> {
    let raw: RawSpectrum = parse_toml(text)?;
    let spectrum = merge_duplicates(&raw.values, raw.merge_tol.unwrap_or(DEFAULT_MERGE_TOL))?;
    Ok(SpectrumDocument {
        kind: raw.kind,
        normalization: raw.normalization,
        size: raw.size,
        scale: raw.scale,
        kappa: raw.kappa,
        spectrum,
    })
}
