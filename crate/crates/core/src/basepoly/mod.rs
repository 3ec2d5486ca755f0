//! Base polynomials approximating `1/x` on `[a, 1]`, before any spectral
//! information is used.
//!
//! Two constructions are provided, each with a search for the smallest odd
//! degree that meets a target accuracy `ε`:
//!
//! * [`remez`]: the minimax polynomial of `|x·p(x) - 1|` by Remez exchange.
//! * [`mang`]: a least-squares fit over a uniform grid in `θ = arccos x`.

mod mang;
mod remez;

pub use mang::{default_theta_grid, mang, mang_min_degree};
pub use remez::{remez, remez_min_degree, RemezState};

use crate::chebpoly::{error_profile, OddChebyshevPoly, DEFAULT_GRID};
use crate::error::{Error, Result};

/// Largest number of odd terms a degree search will try.
pub const MAX_TERMS: usize = 4096;

/// Condition number `κ` and target accuracy `ε`; the interval is `[1/κ, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxSpec {
    kappa: f64,
    eps: f64,
}

impl ApproxSpec {
    pub fn new(kappa: f64, eps: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 1.0) {
            return Err(Error::invalid(format!("kappa must be > 1, got {kappa}")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
        }
        Ok(Self { kappa, eps })
    }

    /// Spec for the interval `[a, 1]`.
    pub fn from_lower_edge(a: f64, eps: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::invalid(format!(
                "lower edge must lie in (0, 1), got {a}"
            )));
        }
        Self::new(1.0 / a, eps)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn a(&self) -> f64 {
        1.0 / self.kappa
    }
}

/// Smallest `n` (odd degree `2n - 1`) for which `build(n)` certifies `≤ ε` on
/// the default grid. Doubles `n` until the target is met, then bisects.
pub(crate) fn min_terms_search(
    eps: f64,
    mut build: impl FnMut(usize) -> Result<OddChebyshevPoly>,
) -> Result<OddChebyshevPoly> {
    let mut certify = |n: usize| -> Result<Option<OddChebyshevPoly>> {
        let p = build(n)?;
        let ok = error_profile(&p, DEFAULT_GRID).max_residual <= eps;
        Ok(ok.then_some(p))
    };

    let mut lo = 0;
    let mut hi = 1;
    let mut best = loop {
        if let Some(p) = certify(hi)? {
            break p;
        }
        lo = hi;
        hi *= 2;
        if hi > MAX_TERMS {
            return Err(Error::DegreeSearchExhausted {
                max_degree: 2 * MAX_TERMS - 1,
                eps,
            });
        }
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match certify(mid)? {
            Some(p) => {
                hi = mid;
                best = p;
            }
            None => lo = mid,
        }
    }
    Ok(best)
}
