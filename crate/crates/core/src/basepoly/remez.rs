//! Minimax approximation of `1/x` by Remez exchange.
//!
//! The error `e(x) = x·p(x) - 1` lives in an `n`-dimensional space of even
//! polynomials, so the best approximation equioscillates at `n + 1` points of
//! `[a, 1]`. Each iteration solves the levelled system on the current
//! reference and replaces the whole reference by the alternating extrema of
//! the new error curve.

use super::{min_terms_search, ApproxSpec};
use crate::chebpoly::{clenshaw_odd, golden_max, odd_basis, Label, OddChebyshevPoly};
use crate::error::{Error, Result};
use crate::numerics::{svd, DenseMatrix};

const MAX_ITERATIONS: usize = 100;
const CONVERGENCE_TOL: f64 = 1e-6;
const ILL_CONDITIONED: f64 = 1e14;

/// Equioscillation certificate of a Remez run.
#[derive(Clone, Debug)]
pub struct RemezState {
    /// Final reference set, strictly increasing in `[a, 1]`.
    pub reference: Vec<f64>,
    /// Levelled error `h` of the last reference system.
    pub levelled_error: f64,
    /// Largest `|x·p(x) - 1|` found on `[a, 1]`.
    pub max_error: f64,
    pub iterations: usize,
    /// Number of sign alternations of the error across the reference plus one.
    pub alternations: usize,
    /// Condition number of the last reference system.
    pub condition_estimate: f64,
}

/// Best approximation in the span of `T_1, T_3, …, T_{2n-1}`.
pub fn remez(spec: &ApproxSpec, n_terms: usize) -> Result<(OddChebyshevPoly, RemezState)> {
    if n_terms == 0 {
        return Err(Error::invalid("remez needs at least one term"));
    }
    let a = spec.a();
    let m = n_terms + 1;
    let theta_max = a.acos();

    // Points equispaced in θ cluster towards x = a like the extrema do.
    let mut reference: Vec<f64> = (0..m)
        .map(|i| (theta_max * (m - 1 - i) as f64 / (m - 1) as f64).cos())
        .collect();
    reference[0] = a;
    reference[m - 1] = 1.0;

    let grid = theta_grid(a, (40 * m).max(4000));
    let mut last_h = f64::NAN;
    for it in 1..=MAX_ITERATIONS {
        let (coeffs, h, cond) = solve_reference(&reference, n_terms)?;
        last_h = h;
        let err = |x: f64| x * clenshaw_odd(&coeffs, x) - 1.0;
        let extrema = alternating_extrema(&grid, &err);
        let emax = extrema.iter().map(|&(_, e)| e.abs()).fold(0.0, f64::max);

        let converged = if h.abs() < f64::EPSILON {
            emax < 1e-14
        } else {
            (emax - h.abs()) / h.abs() < CONVERGENCE_TOL
        };
        if converged {
            if cond > ILL_CONDITIONED {
                log::warn!(
                    "Remez reference system is ill-conditioned (cond {cond:.2e}) at {n_terms} terms; \
                     accuracy may be limited by double precision"
                );
            }
            let alternations = 1 + reference
                .windows(2)
                .filter(|w| err(w[0]).signum() != err(w[1]).signum())
                .count();
            let state = RemezState {
                reference,
                levelled_error: h,
                max_error: emax,
                iterations: it,
                alternations,
                condition_estimate: cond,
            };
            let p = OddChebyshevPoly::new(coeffs, a, Label::Remez)?
                .with_eps_target(spec.eps())
                .with_computed_tau();
            return Ok((p, state));
        }

        reference = if extrema.len() >= m {
            trim_to(extrema, m)
        } else {
            single_exchange(&reference, &extrema, &err)
        };
    }
    Err(Error::RemezNoConvergence {
        iterations: MAX_ITERATIONS,
        last_h,
    })
}

/// Smallest odd degree whose minimax error is at most `ε`.
pub fn remez_min_degree(spec: &ApproxSpec) -> Result<OddChebyshevPoly> {
    min_terms_search(spec.eps(), |n| remez(spec, n).map(|(p, _)| p))
}

/// Solves `x_i p(x_i) + (-1)^i h = 1` for the coefficients and `h`.
fn solve_reference(reference: &[f64], n: usize) -> Result<(Vec<f64>, f64, f64)> {
    let m = reference.len();
    let mut sys = DenseMatrix::zeros(m, m);
    for (i, &x) in reference.iter().enumerate() {
        for (j, t) in odd_basis(x, n).into_iter().enumerate() {
            sys[(i, j)] = x * t;
        }
        sys[(i, n)] = if i % 2 == 0 { 1.0 } else { -1.0 };
    }
    let dec = svd(&sys)?;
    let cond = dec.condition();
    let sol = dec.solve(&vec![1.0; m], 0.0)?;
    Ok((sol[..n].to_vec(), sol[n], cond))
}

/// Points of `[a, 1]` equispaced in `θ = arccos x`, ascending in `x`.
fn theta_grid(a: f64, size: usize) -> Vec<f64> {
    let theta_max = a.acos();
    let mut g: Vec<f64> = (0..size)
        .map(|i| (theta_max * (size - 1 - i) as f64 / (size - 1) as f64).cos())
        .collect();
    g[0] = a;
    g[size - 1] = 1.0;
    g
}

/// One extremum per maximal run of constant sign, polished by golden section.
fn alternating_extrema(grid: &[f64], err: &impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let values: Vec<f64> = grid.iter().map(|&x| err(x)).collect();
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut run_best: Option<usize> = None;
    let mut run_sign = 0.0;
    let flush = |best: usize, out: &mut Vec<(f64, f64)>| {
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(grid.len() - 1)];
        let (x, _) = golden_max(|x| err(x).abs(), lo, hi, 1e-15);
        let (x, e) = if err(x).abs() >= values[best].abs() {
            (x, err(x))
        } else {
            (grid[best], values[best])
        };
        out.push((x, e));
    };
    for (i, &v) in values.iter().enumerate() {
        let s = if v >= 0.0 { 1.0 } else { -1.0 };
        match run_best {
            Some(b) if s == run_sign => {
                if v.abs() > values[b].abs() {
                    run_best = Some(i);
                }
            }
            Some(b) => {
                flush(b, &mut out);
                run_best = Some(i);
                run_sign = s;
            }
            None => {
                run_best = Some(i);
                run_sign = s;
            }
        }
    }
    if let Some(b) = run_best {
        flush(b, &mut out);
    }
    out
}

/// Drops end extrema, smaller first, until `m` remain.
fn trim_to(mut extrema: Vec<(f64, f64)>, m: usize) -> Vec<f64> {
    let mut start = 0;
    let mut end = extrema.len();
    while end - start > m {
        if extrema[start].1.abs() <= extrema[end - 1].1.abs() {
            start += 1;
        } else {
            end -= 1;
        }
    }
    extrema.truncate(end);
    extrema.drain(..start);
    extrema.into_iter().map(|(x, _)| x).collect()
}

/// Classical exchange of one reference point for the global extremum.
fn single_exchange(
    reference: &[f64],
    extrema: &[(f64, f64)],
    err: &impl Fn(f64) -> f64,
) -> Vec<f64> {
    let mut r = reference.to_vec();
    let Some(&(xn, en)) = extrema
        .iter()
        .max_by(|p, q| p.1.abs().total_cmp(&q.1.abs()))
    else {
        return r;
    };
    let m = r.len();
    let sn = en.signum();
    let j = r.partition_point(|&x| x < xn);
    if j == 0 {
        if err(r[0]).signum() == sn {
            r[0] = xn;
        } else {
            r.pop();
            r.insert(0, xn);
        }
    } else if j == m {
        if err(r[m - 1]).signum() == sn {
            r[m - 1] = xn;
        } else {
            r.remove(0);
            r.push(xn);
        }
    } else if err(r[j - 1]).signum() == sn {
        r[j - 1] = xn;
    } else {
        r[j] = xn;
    }
    r
}
