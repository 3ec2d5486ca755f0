//! Least-squares approximation of `1/x` on a uniform `θ` grid, `x = cos θ`.
//!
//! Each sample contributes the row `cos((2j+1)θ_i)` with right-hand side
//! `1/cos θ_i`, which is the residual `x·p(x) - 1` weighted by `1/x`. The fit
//! is solved through [`lstsq`](crate::numerics::lstsq).

use super::{min_terms_search, ApproxSpec};
use crate::chebpoly::{Label, OddChebyshevPoly};
use crate::error::{Error, Result};
use crate::numerics::{lstsq, DenseMatrix};

/// Default number of `θ` samples for an `n_terms` fit.
pub fn default_theta_grid(n_terms: usize) -> usize {
    (4 * n_terms).max(2000)
}

/// Least-squares polynomial with `n_terms` odd terms on `theta_grid` samples
/// of `[0, arccos a]`.
pub fn mang(spec: &ApproxSpec, n_terms: usize, theta_grid: usize) -> Result<OddChebyshevPoly> {
    if n_terms == 0 {
        return Err(Error::invalid("mang needs at least one term"));
    }
    if theta_grid < n_terms {
        return Err(Error::invalid(format!(
            "theta grid of {theta_grid} samples cannot determine {n_terms} coefficients"
        )));
    }
    let theta_max = spec.a().acos();
    let thetas: Vec<f64> = if theta_grid == 1 {
        vec![0.0]
    } else {
        (0..theta_grid)
            .map(|i| theta_max * i as f64 / (theta_grid - 1) as f64)
            .collect()
    };
    let m = DenseMatrix::from_fn(thetas.len(), n_terms, |i, j| {
        ((2 * j + 1) as f64 * thetas[i]).cos()
    });
    let rhs: Vec<f64> = thetas.iter().map(|t| 1.0 / t.cos()).collect();
    let coeffs = lstsq(&m, &rhs)?;
    Ok(OddChebyshevPoly::new(coeffs, spec.a(), Label::Mang)?
        .with_eps_target(spec.eps())
        .with_computed_tau())
}

/// Smallest odd degree whose dense-grid maximum residual is at most `ε`.
pub fn mang_min_degree(spec: &ApproxSpec) -> Result<OddChebyshevPoly> {
    min_terms_search(spec.eps(), |n| mang(spec, n, default_theta_grid(n)))
}
