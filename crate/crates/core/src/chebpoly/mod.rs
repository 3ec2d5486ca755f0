//! Odd polynomials in the Chebyshev basis, `p(x) = Σ_j c_j · T_{2j+1}(x)`.
//!
//! The coefficients always describe the unnormalized approximant `p̂ ≈ 1/x`.
//! The subnormalization factor `τ = max_{[a,1]} |p̂|` is stored next to them,
//! so accuracy is measured on `p̂` while `p̂/τ` is what a QSVT circuit would
//! implement.

mod document;

pub(crate) use document::{fmt_real, fmt_real_array, parse_toml};
pub use document::{from_document, to_document};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of samples on `[a, 1]` for τ and residual certificates.
pub const DEFAULT_GRID: usize = 10_000;
const MIN_GRID: usize = 1_000;

/// Where a polynomial came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    Remez,
    Mang,
    Spectral,
    SpectralCorrected,
    External,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Remez => "remez",
            Label::Mang => "mang",
            Label::Spectral => "spectral",
            Label::SpectralCorrected => "spectral-corrected",
            Label::External => "external",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OddChebyshevPoly {
    coeffs: Vec<f64>,
    a: f64,
    eps_target: Option<f64>,
    tau: Option<f64>,
    label: Label,
}

impl OddChebyshevPoly {
    pub fn new(coeffs: Vec<f64>, a: f64, label: Label) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid(
                "a polynomial needs at least one coefficient",
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::invalid(format!(
                "lower edge a = {a} is not in (0, 1]"
            )));
        }
        Ok(Self {
            coeffs,
            a,
            eps_target: None,
            tau: None,
            label,
        })
    }

    pub fn with_eps_target(mut self, eps: f64) -> Self {
        self.eps_target = Some(eps);
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.label = label;
        self
    }

    /// Recomputes τ on the default grid.
    pub fn with_computed_tau(mut self) -> Self {
        self.tau = Some(compute_tau(&self, DEFAULT_GRID));
        self
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn eps_target(&self) -> Option<f64> {
        self.eps_target
    }

    pub fn tau(&self) -> Option<f64> {
        self.tau
    }

    /// τ if already known, otherwise computed on the default grid.
    pub fn tau_or_compute(&self) -> f64 {
        self.tau.unwrap_or_else(|| compute_tau(self, DEFAULT_GRID))
    }

    pub fn label(&self) -> Label {
        self.label
    }

    /// Number of odd basis terms `n`.
    pub fn n_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Polynomial degree `2n - 1`.
    pub fn degree(&self) -> usize {
        2 * self.coeffs.len() - 1
    }

    /// `p(x)` for `x ∈ [-1, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::Domain { x });
        }
        Ok(self.value(x))
    }

    /// `p(x)` without the domain check.
    pub fn value(&self, x: f64) -> f64 {
        clenshaw_odd(&self.coeffs, x)
    }

    /// Signed weighted error `x·p(x) - 1`.
    pub fn residual(&self, x: f64) -> f64 {
        x * self.value(x) - 1.0
    }

    /// Coefficients of `p̂/τ`, the bounded polynomial a circuit would use.
    pub fn normalized_coeffs(&self) -> Vec<f64> {
        let tau = self.tau_or_compute();
        self.coeffs.iter().map(|c| c / tau).collect()
    }

    /// `c·p`, with τ scaled to match.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
            tau: self.tau.map(|t| t * c.abs()),
            ..self.clone()
        }
    }
}

/// Clenshaw summation of `Σ c_j T_{2j+1}(x)` in the variable `2·T_2(x)`.
///
/// Only `x²` enters the recurrence, so `p(-x) = -p(x)` holds bit for bit.
pub fn clenshaw_odd(coeffs: &[f64], x: f64) -> f64 {
    let m = 4.0 * x * x - 2.0;
    let (mut y1, mut y2) = (0.0, 0.0);
    for &c in coeffs.iter().rev() {
        let y0 = c + m * y1 - y2;
        y2 = y1;
        y1 = y0;
    }
    // y1 = y_0, y2 = y_1
    x * (y1 - y2)
}

/// `(T_1(x), T_3(x), …, T_{2n-1}(x))`.
pub fn odd_basis(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let two_t2 = 4.0 * x * x - 2.0;
    out.push(x);
    if n > 1 {
        out.push(x * (4.0 * x * x - 3.0));
    }
    for j in 2..n {
        let next = two_t2 * out[j - 1] - out[j - 2];
        out.push(next);
    }
    out
}

/// `density` equispaced points covering `[lo, hi]` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, density: usize) -> Vec<f64> {
    if density <= 1 || lo == hi {
        return vec![lo];
    }
    let step = (hi - lo) / (density - 1) as f64;
    (0..density)
        .map(|i| {
            if i == density - 1 {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

/// Subnormalization factor `τ = max_{x∈[a,1]} |p(x)|`.
///
/// Odd symmetry makes `[-1, -a]` redundant. The maximum is located on a dense
/// grid and polished by golden-section search over the neighbouring cells.
pub fn compute_tau(p: &OddChebyshevPoly, grid_density: usize) -> f64 {
    let grid = uniform_grid(p.a, 1.0, grid_density.max(MIN_GRID));
    let f = |x: f64| p.value(x).abs();
    let (best, best_val) = grid
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, f(x)))
        .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (_, refined) = golden_max(f, lo, hi, 1e-15);
    best_val.max(refined)
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    if hi <= lo {
        return (lo, f(lo));
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= tol * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Pointwise accuracy certificate on `[a, 1]`.
#[derive(Clone, Debug)]
pub struct ErrorProfile {
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

impl ErrorProfile {
    /// Location of the largest residual.
    pub fn argmax(&self) -> f64 {
        let i = self
            .residuals
            .iter()
            .enumerate()
            .fold(
                (0, -1.0),
                |acc, (i, &r)| if r > acc.1 { (i, r) } else { acc },
            )
            .0;
        self.grid[i]
    }
}

/// `|x·p(x) - 1|` sampled on `grid_density` points of `[a, 1]`.
pub fn error_profile(p: &OddChebyshevPoly, grid_density: usize) -> ErrorProfile {
    let grid = uniform_grid(p.a, 1.0, grid_density.max(MIN_GRID));
    let residuals: Vec<f64> = grid.iter().map(|&x| p.residual(x).abs()).collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    ErrorProfile {
        grid,
        residuals,
        max_residual,
    }
}

/// Continuous maximum of `|x·p(x) - 1|` on `[a, 1]`: the grid maximum
/// polished by golden-section search.
pub fn max_residual(p: &OddChebyshevPoly, grid_density: usize) -> f64 {
    let prof = error_profile(p, grid_density);
    let g = &prof.grid;
    let best = prof
        .residuals
        .iter()
        .enumerate()
        .fold(
            (0, -1.0),
            |acc, (i, &r)| if r > acc.1 { (i, r) } else { acc },
        )
        .0;
    let lo = g[best.saturating_sub(1)];
    let hi = g[(best + 1).min(g.len() - 1)];
    let (_, refined) = golden_max(|x| p.residual(x).abs(), lo, hi, 1e-15);
    prof.max_residual.max(refined)
}
