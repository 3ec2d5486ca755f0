//! Text interchange format for polynomials.
//!
//! A polynomial document is a small TOML table:
//!
//! ```toml
//! basis = "odd-chebyshev"
//! label = "mang"
//! degree = 27
//! a = 1.0000000000000001e-1
//! eps_target = 2.0000000000000001e-1
//! tau = 8.5120011214141123e0
//! coeffs = [
//!     3.4470542120001458e0,
//!     -3.1219958513355467e0,
//! ]
//! ```
//!
//! Reals are written with 17 significant digits so that every coefficient
//! survives a round trip bit for bit. `label`, `eps_target`, `tau` and
//! `degree` are optional when reading; a missing label reads as `external`.

use std::fmt::Write as _;

use serde::Deserialize;

use super::{Label, OddChebyshevPoly};
use crate::error::{Error, Result};

pub const BASIS: &str = "odd-chebyshev";

/// Formats a real with 17 significant digits.
pub(crate) fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn fmt_real_array(out: &mut String, key: &str, values: &[f64]) {
    let _ = writeln!(out, "{key} = [");
    for v in values {
        let _ = writeln!(out, "    {},", fmt_real(*v));
    }
    let _ = writeln!(out, "]");
}

pub fn to_document(p: &OddChebyshevPoly) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "basis = \"{BASIS}\"");
    let _ = writeln!(out, "label = \"{}\"", p.label());
    let _ = writeln!(out, "degree = {}", p.degree());
    let _ = writeln!(out, "a = {}", fmt_real(p.a()));
    if let Some(eps) = p.eps_target() {
        let _ = writeln!(out, "eps_target = {}", fmt_real(eps));
    }
    if let Some(tau) = p.tau() {
        let _ = writeln!(out, "tau = {}", fmt_real(tau));
    }
    fmt_real_array(&mut out, "coeffs", p.coeffs());
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoly {
    basis: String,
    label: Option<Label>,
    degree: Option<usize>,
    a: f64,
    eps_target: Option<f64>,
    tau: Option<f64>,
    coeffs: Vec<f64>,
}

pub fn from_document(text: &str) -> Result<OddChebyshevPoly> {
    let raw: RawPoly = parse_toml(text)?;
    if raw.basis != BASIS {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("unsupported basis {:?}, expected {BASIS:?}", raw.basis),
        });
    }
    let mut p = OddChebyshevPoly::new(raw.coeffs, raw.a, raw.label.unwrap_or(Label::External))?;
    if let Some(d) = raw.degree {
        if d != p.degree() {
            return Err(Error::invalid(format!(
                "document declares degree {d} but carries {} coefficients (degree {})",
                p.n_terms(),
                p.degree()
            )));
        }
    }
    if let Some(eps) = raw.eps_target {
        p = p.with_eps_target(eps);
    }
    if let Some(tau) = raw.tau {
        p = p.with_tau(tau);
    }
    Ok(p)
}

/// Deserializes TOML, turning byte spans into line/column positions.
pub(crate) fn parse_toml<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        let (line, column) = line_col(text, offset);
        Error::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let upto = &text[..offset.min(text.len())];
    let line = upto.matches('\n').count() + 1;
    let column = upto.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}
