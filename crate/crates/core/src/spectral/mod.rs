//! Interpolation of `1/λ` at known eigenvalues.
//!
//! [`pure_spectral`] builds the minimum-norm polynomial that is exact at every
//! eigenvalue and ignores the rest of `[a, 1]`. [`spectral_correct`] instead
//! adds the minimum-norm coefficient change to a base polynomial that makes it
//! exact at `K` chosen eigenvalues, keeping the degree. Nearly equal targets
//! are merged first so that the constraint system stays well posed.

mod report;

pub use report::correction_report_document;

use crate::chebpoly::{
    clenshaw_odd, max_residual, odd_basis, Label, OddChebyshevPoly, DEFAULT_GRID,
};
use crate::error::{Error, Result};
use crate::numerics::{norm2, pinv_solve, svd, DenseMatrix, DEFAULT_REL_CUTOFF};

pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

/// Largest residual a pure spectral polynomial may leave at an eigenvalue.
pub const INTERPOLATION_TOL: f64 = 1e-10;

/// Sorted normalized eigenvalues with their merged representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    merge_tol: f64,
    representatives: Vec<f64>,
}

impl Spectrum {
    /// Sorts `values` and merges clusters closer than `merge_tol`.
    pub fn new(values: Vec<f64>, merge_tol: f64) -> Result<Self> {
        merge_duplicates(&values, merge_tol)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn merge_tol(&self) -> f64 {
        self.merge_tol
    }

    pub fn representatives(&self) -> &[f64] {
        &self.representatives
    }

    pub fn k_eff(&self) -> usize {
        self.representatives.len()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// The `k` smallest eigenvalues, re-merged with the same tolerance.
    pub fn smallest(&self, k: usize) -> Result<Spectrum> {
        if k == 0 || k > self.len() {
            return Err(Error::invalid(format!(
                "cannot take {k} of {} eigenvalues",
                self.len()
            )));
        }
        merge_duplicates(&self.values[..k], self.merge_tol)
    }
}

/// Greedy left-to-right clustering of the sorted eigenvalues; each cluster
/// is represented by its first member.
pub fn merge_duplicates(eigs: &[f64], merge_tol: f64) -> Result<Spectrum> {
    if eigs.is_empty() {
        return Err(Error::invalid("spectrum is empty"));
    }
    if !(merge_tol >= 0.0 && merge_tol.is_finite()) {
        return Err(Error::invalid(format!(
            "merge tolerance must be >= 0, got {merge_tol}"
        )));
    }
    if let Some(&bad) = eigs.iter().find(|&&l| !(l > 0.0 && l <= 1.0)) {
        return Err(Error::invalid(format!(
            "eigenvalue {bad} lies outside (0, 1]; normalize the spectrum first"
        )));
    }
    let mut values = eigs.to_vec();
    values.sort_by(f64::total_cmp);
    let mut representatives = vec![values[0]];
    for &v in &values[1..] {
        let rep = representatives[representatives.len() - 1];
        if v > rep && v - rep >= merge_tol {
            representatives.push(v);
        }
    }
    Ok(Spectrum {
        values,
        merge_tol,
        representatives,
    })
}

/// The constraint matrix `Λ B` with rows `λ_k T_{2j+1}(λ_k)`.
pub fn lambda_basis(targets: &[f64], n_terms: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(targets.len(), n_terms);
    for (i, &l) in targets.iter().enumerate() {
        for (j, t) in odd_basis(l, n_terms).into_iter().enumerate() {
            m[(i, j)] = l * t;
        }
    }
    m
}

/// Minimum-norm polynomial with `⌈n_factor·N⌉` terms interpolating `1/λ` at
/// all `N` eigenvalues.
pub fn pure_spectral(spectrum: &Spectrum, n_factor: f64) -> Result<OddChebyshevPoly> {
    if !(n_factor.is_finite() && n_factor >= 1.0) {
        return Err(Error::invalid(format!(
            "n_factor must be at least 1, got {n_factor}"
        )));
    }
    let n = (n_factor * spectrum.len() as f64).ceil() as usize;
    if n == 0 {
        return Err(Error::invalid(
            "pure spectral polynomial needs at least one term",
        ));
    }
    let lb = lambda_basis(spectrum.values(), n);
    let coeffs = pinv_solve(&lb, &vec![1.0; spectrum.len()], DEFAULT_REL_CUTOFF)?;
    let p = OddChebyshevPoly::new(coeffs, spectrum.min(), Label::Spectral)?;
    let worst = eig_residual(&p, spectrum, Subset::All);
    if !(worst <= INTERPOLATION_TOL) {
        return Err(Error::Infeasible {
            n_terms: n,
            max_residual: worst,
        });
    }
    Ok(p.with_computed_tau())
}

/// Eigenvalues over which [`eig_residual`] is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subset {
    All,
    /// The `K` smallest eigenvalues, i.e. the default correction targets.
    Smallest(usize),
}

/// `max_k |λ_k p(λ_k) - 1|` over the chosen eigenvalues.
pub fn eig_residual(p: &OddChebyshevPoly, spectrum: &Spectrum, subset: Subset) -> f64 {
    let vals = match subset {
        Subset::All => spectrum.values(),
        Subset::Smallest(k) => &spectrum.values()[..k.min(spectrum.len())],
    };
    max_abs_residual(p, vals)
}

fn max_abs_residual(p: &OddChebyshevPoly, values: &[f64]) -> f64 {
    values
        .iter()
        .map(|&l| p.residual(l).abs())
        .fold(0.0, f64::max)
}

/// Everything needed to audit one spectral correction.
#[derive(Clone, Debug)]
pub struct CorrectionReport {
    /// Merged target eigenvalues.
    pub targets: Vec<f64>,
    /// `1 - λ_k p_0(λ_k)` before correction.
    pub residuals: Vec<f64>,
    /// Gram-system multipliers.
    pub alpha: Vec<f64>,
    /// Coefficients added to the base polynomial.
    pub correction: Vec<f64>,
    pub gram_condition: f64,
    /// `‖Λ_K B_K‖₂`.
    pub lambda_basis_norm: f64,
    /// Continuous maximum residual of the base polynomial.
    pub base_eps: f64,
    /// `max_k |λ_k p_SC(λ_k) - 1|` after correction.
    pub post_residual: f64,
}

impl CorrectionReport {
    pub fn k_eff(&self) -> usize {
        self.targets.len()
    }

    pub fn alpha_norm(&self) -> f64 {
        norm2(&self.alpha)
    }

    /// Pointwise bound `ε + ‖Λ_K B_K‖₂ ‖α‖₂ ‖T(x)‖₂` on `|x p_SC(x) - 1|`.
    pub fn bound_at(&self, x: f64) -> f64 {
        self.base_eps
            + self.lambda_basis_norm
                * self.alpha_norm()
                * norm2(&odd_basis(x, self.correction.len()))
    }
}

/// Pointwise bound on the corrected residual at `x`, computed from scratch.
pub fn prop1_bound(
    p0_eps: f64,
    targets: &[f64],
    alpha: &[f64],
    n_terms: usize,
    x: f64,
) -> Result<f64> {
    if alpha.iter().all(|&a| a == 0.0) {
        return Ok(p0_eps);
    }
    let norm = svd(&lambda_basis(targets, n_terms))?.sigma_max();
    Ok(p0_eps + norm * norm2(alpha) * norm2(&odd_basis(x, n_terms)))
}

/// Corrects `p0` at the `k` smallest eigenvalues of `spectrum`.
pub fn spectral_correct(
    p0: &OddChebyshevPoly,
    spectrum: &Spectrum,
    k: usize,
) -> Result<(OddChebyshevPoly, CorrectionReport)> {
    let targets = spectrum.smallest(k)?;
    correct_at(p0, targets.representatives())
}

/// Corrects `p0` at an explicit list of targets, merged with `merge_tol`.
pub fn spectral_correct_at(
    p0: &OddChebyshevPoly,
    targets: &[f64],
    merge_tol: f64,
) -> Result<(OddChebyshevPoly, CorrectionReport)> {
    let merged = merge_duplicates(targets, merge_tol)?;
    correct_at(p0, merged.representatives())
}

fn correct_at(
    p0: &OddChebyshevPoly,
    targets: &[f64],
) -> Result<(OddChebyshevPoly, CorrectionReport)> {
    let n0 = p0.n_terms();
    if targets.len() > n0 {
        return Err(Error::TooManyTargets {
            k_eff: targets.len(),
            n_terms: n0,
        });
    }
    let lb = lambda_basis(targets, n0);
    let gram = svd(&lb.gram_rows())?;
    let residuals: Vec<f64> = targets.iter().map(|&l| -p0.residual(l)).collect();

    let mut alpha = gram.solve(&residuals, DEFAULT_REL_CUTOFF)?;
    let mut coeffs: Vec<f64> = p0.coeffs().to_vec();
    add_correction(&mut coeffs, &lb, &alpha)?;

    // One refinement pass against the Gram system's squared conditioning.
    // The update stays in the row space of Λ B, so the total change is still
    // the minimum-norm one.
    let r2: Vec<f64> = targets
        .iter()
        .map(|&l| 1.0 - l * clenshaw_odd(&coeffs, l))
        .collect();
    if r2.iter().any(|&r| r != 0.0) {
        let a2 = gram.solve(&r2, DEFAULT_REL_CUTOFF)?;
        add_correction(&mut coeffs, &lb, &a2)?;
        for (a, b) in alpha.iter_mut().zip(&a2) {
            *a += b;
        }
    }

    let correction: Vec<f64> = coeffs
        .iter()
        .zip(p0.coeffs())
        .map(|(c, c0)| c - c0)
        .collect();
    let mut p = OddChebyshevPoly::new(coeffs, p0.a(), Label::SpectralCorrected)?;
    if let Some(eps) = p0.eps_target() {
        p = p.with_eps_target(eps);
    }
    let p = p.with_computed_tau();
    let post_residual = max_abs_residual(&p, targets);
    if post_residual > 1e-12 {
        log::warn!(
            "corrected residual {post_residual:e} exceeds 1e-12 at {} targets",
            targets.len()
        );
    }
    let report = CorrectionReport {
        targets: targets.to_vec(),
        residuals,
        alpha,
        correction,
        gram_condition: gram.condition(),
        lambda_basis_norm: gram.sigma_max().sqrt(),
        base_eps: max_residual(p0, DEFAULT_GRID),
        post_residual,
    };
    Ok((p, report))
}

fn add_correction(coeffs: &mut [f64], lb: &DenseMatrix, alpha: &[f64]) -> Result<()> {
    let delta = lb.matvec_t(alpha)?;
    for (c, d) in coeffs.iter_mut().zip(delta) {
        *c += d;
    }
    Ok(())
}
