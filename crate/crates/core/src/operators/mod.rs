//! Model problems: finite-difference Poisson operators with closed-form
//! eigenpairs, explicit diagonal or dense SPD matrices, and load vectors.
//!
//! Every [`OperatorModel`] acts as the normalized operator `A/s`, where the
//! scale `s` is either the largest eigenvalue or the stencil bound `4/h²`
//! (1D) / `8/h²` (2D), so its spectrum lies in `(0, 1]`.

mod document;

pub use document::{spectrum_document, spectrum_from_document, SpectrumDocument};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{dot, norm2, svd, DenseMatrix, LinearOperator};
use crate::spectral::{merge_duplicates, Spectrum};

/// How the raw operator is scaled into `(0, 1]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Divide by the largest eigenvalue, so the top of the spectrum is 1.
    #[default]
    MaxEigenvalue,
    /// Divide by the Gershgorin bound of the stencil.
    StencilBound,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::MaxEigenvalue => "max-eigenvalue",
            Normalization::StencilBound => "stencil-bound",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max-eigenvalue" => Ok(Normalization::MaxEigenvalue),
            "stencil-bound" => Ok(Normalization::StencilBound),
            _ => Err(Error::invalid(format!(
                "unknown normalization {s:?} (expected max-eigenvalue or stencil-bound)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Poisson1d,
    Poisson2d,
    Diagonal,
    Dense,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorKind::Poisson1d => "poisson1d",
            OperatorKind::Poisson2d => "poisson2d",
            OperatorKind::Diagonal => "diagonal",
            OperatorKind::Dense => "dense",
        })
    }
}

#[derive(Clone, Debug)]
enum Action {
    Stencil1d { n: usize, inv_h2: f64 },
    Stencil2d { n1: usize, inv_h2: f64 },
    Diagonal(Vec<f64>),
    Dense(DenseMatrix),
}

/// Symmetric positive definite operator with known eigenpairs.
#[derive(Clone, Debug)]
pub struct OperatorModel {
    kind: OperatorKind,
    normalization: Normalization,
    action: Action,
    scale: f64,
    /// Normalized eigenvalues, ascending.
    eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    eigenvectors: DenseMatrix,
}

impl OperatorModel {
    /// `(2, -1)` stencil on `n` interior nodes of `[0, 1]`, scaled by `1/h²`.
    pub fn poisson1d(n: usize, normalization: Normalization) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("poisson1d needs at least one node"));
        }
        let h = 1.0 / (n + 1) as f64;
        let inv_h2 = 1.0 / (h * h);
        let raw = poisson1d_eigenvalues(n);
        let scale = match normalization {
            Normalization::MaxEigenvalue => raw[n - 1],
            Normalization::StencilBound => 4.0 * inv_h2,
        };
        let vecs = sine_modes(n);
        Ok(Self {
            kind: OperatorKind::Poisson1d,
            normalization,
            action: Action::Stencil1d { n, inv_h2 },
            scale,
            eigenvalues: raw.iter().map(|l| l / scale).collect(),
            eigenvectors: vecs,
        })
    }

    /// 5-point Laplacian on an `n1 x n1` interior grid, row-major numbering.
    pub fn poisson2d(n1: usize, normalization: Normalization) -> Result<Self> {
        if n1 == 0 {
            return Err(Error::invalid("poisson2d needs at least one node per side"));
        }
        let h = 1.0 / (n1 + 1) as f64;
        let inv_h2 = 1.0 / (h * h);
        let raw1 = poisson1d_eigenvalues(n1);
        let modes = sine_modes(n1);

        let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n1 * n1);
        for j in 0..n1 {
            for k in 0..n1 {
                pairs.push((raw1[j] + raw1[k], j, k));
            }
        }
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
        let scale = match normalization {
            Normalization::MaxEigenvalue => pairs[pairs.len() - 1].0,
            Normalization::StencilBound => 8.0 * inv_h2,
        };
        let n = n1 * n1;
        let vecs = DenseMatrix::from_fn(n, n, |row, col| {
            let (_, j, k) = pairs[col];
            modes[(row / n1, j)] * modes[(row % n1, k)]
        });
        Ok(Self {
            kind: OperatorKind::Poisson2d,
            normalization,
            action: Action::Stencil2d { n1, inv_h2 },
            scale,
            eigenvalues: pairs.iter().map(|p| p.0 / scale).collect(),
            eigenvectors: vecs,
        })
    }

    /// `diag(values)` scaled by its largest entry.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        if values.is_empty() || values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::invalid(
                "diagonal operator needs positive finite entries",
            ));
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let scale = values[order[order.len() - 1]];
        let n = values.len();
        Ok(Self {
            kind: OperatorKind::Diagonal,
            normalization: Normalization::MaxEigenvalue,
            action: Action::Diagonal(values.to_vec()),
            scale,
            eigenvalues: order.iter().map(|&i| values[i] / scale).collect(),
            eigenvectors: DenseMatrix::from_fn(n, n, |r, c| if r == order[c] { 1.0 } else { 0.0 }),
        })
    }

    /// Explicit symmetric positive definite matrix, scaled by its largest
    /// eigenvalue. Eigenpairs come from a singular value decomposition.
    pub fn dense(m: DenseMatrix) -> Result<Self> {
        let n = m.rows();
        if n == 0 || m.cols() != n {
            return Err(Error::dims(format!(
                "dense operator must be square, got {}x{}",
                n,
                m.cols()
            )));
        }
        let asym = m.max_abs_diff(&m.transpose());
        if asym > 1e-12 * m.frobenius_norm().max(1.0) {
            return Err(Error::invalid(format!(
                "matrix is not symmetric (max |A - Aᵀ| = {asym:e})"
            )));
        }
        let dec = svd(&m)?;
        for l in 0..n {
            let v = dec.v.column(l);
            let mv = m.matvec(&v)?;
            if !(dot(&v, &mv) > 0.0) || dec.sigma[l] == 0.0 {
                return Err(Error::invalid("matrix is not positive definite"));
            }
        }
        let scale = dec.sigma[0];
        // Singular values come out descending; reverse to ascending.
        let eigenvalues: Vec<f64> = dec.sigma.iter().rev().map(|s| s / scale).collect();
        let eigenvectors = DenseMatrix::from_fn(n, n, |r, c| dec.v[(r, n - 1 - c)]);
        Ok(Self {
            kind: OperatorKind::Dense,
            normalization: Normalization::MaxEigenvalue,
            action: Action::Dense(m),
            scale,
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Grid size per side for Poisson operators, otherwise the dimension.
    pub fn size(&self) -> usize {
        match &self.action {
            Action::Stencil2d { n1, .. } => *n1,
            _ => self.eigenvalues.len(),
        }
    }

    /// Divisor applied to the raw operator.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `λ_max / λ_min`, independent of the normalization.
    pub fn kappa(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1] / self.eigenvalues[0]
    }

    /// Smallest normalized eigenvalue.
    pub fn lower_edge(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Normalized eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns, matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &DenseMatrix {
        &self.eigenvectors
    }

    pub fn spectrum(&self, merge_tol: f64) -> Result<Spectrum> {
        merge_duplicates(&self.eigenvalues, merge_tol)
    }

    /// `Σ_k f(λ_k) (v_kᵀ b) v_k`.
    pub fn apply_function(&self, b: &[f64], f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        let coef = self.eigenvectors.matvec_t(b)?;
        let scaled: Vec<f64> = coef
            .iter()
            .zip(&self.eigenvalues)
            .map(|(c, &l)| c * f(l))
            .collect();
        self.eigenvectors.matvec(&scaled)
    }
}

impl LinearOperator for OperatorModel {
    fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        let s = 1.0 / self.scale;
        match &self.action {
            Action::Stencil1d { n, inv_h2 } => {
                let w = inv_h2 * s;
                for i in 0..*n {
                    let left = if i > 0 { x[i - 1] } else { 0.0 };
                    let right = if i + 1 < *n { x[i + 1] } else { 0.0 };
                    out[i] = w * (2.0 * x[i] - left - right);
                }
            }
            Action::Stencil2d { n1, inv_h2 } => {
                let n1 = *n1;
                let w = inv_h2 * s;
                for r in 0..n1 {
                    for c in 0..n1 {
                        let i = r * n1 + c;
                        let mut acc = 4.0 * x[i];
                        if r > 0 {
                            acc -= x[i - n1];
                        }
                        if r + 1 < n1 {
                            acc -= x[i + n1];
                        }
                        if c > 0 {
                            acc -= x[i - 1];
                        }
                        if c + 1 < n1 {
                            acc -= x[i + 1];
                        }
                        out[i] = w * acc;
                    }
                }
            }
            Action::Diagonal(d) => {
                for ((o, xi), di) in out.iter_mut().zip(x).zip(d) {
                    *o = di * s * xi;
                }
            }
            Action::Dense(m) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = s * dot(m.row(i), x);
                }
            }
        }
    }
}

/// `(4/h²) sin²(kπ / (2(n+1)))` for `k = 1..=n`, ascending.
pub fn poisson1d_eigenvalues(n: usize) -> Vec<f64> {
    let h = 1.0 / (n + 1) as f64;
    (1..=n)
        .map(|k| {
            let s = (k as f64 * std::f64::consts::PI / (2 * (n + 1)) as f64).sin();
            4.0 / (h * h) * s * s
        })
        .collect()
}

/// Columns `√(2/(n+1)) sin(i k π / (n+1))`.
fn sine_modes(n: usize) -> DenseMatrix {
    let c = (2.0 / (n + 1) as f64).sqrt();
    DenseMatrix::from_fn(n, n, |i, k| {
        c * (((i + 1) * (k + 1)) as f64 * std::f64::consts::PI / (n + 1) as f64).sin()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoadKind {
    Uniform,
    Point,
    Custom,
}

impl fmt::Display for LoadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoadKind::Uniform => "uniform",
            LoadKind::Point => "point",
            LoadKind::Custom => "custom",
        })
    }
}

impl FromStr for LoadKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(LoadKind::Uniform),
            "point" => Ok(LoadKind::Point),
            "custom" => Ok(LoadKind::Custom),
            _ => Err(Error::invalid(format!(
                "unknown load {s:?} (expected uniform or point)"
            ))),
        }
    }
}

/// Right-hand side of unit Euclidean norm.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadVector {
    kind: LoadKind,
    values: Vec<f64>,
}

impl LoadVector {
    /// All-ones vector, normalized.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::custom(vec![1.0; n]).map(|l| l.with_kind(LoadKind::Uniform))
    }

    /// Unit vector at index `⌊n/2⌋`.
    pub fn point(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("load vector needs at least one entry"));
        }
        let mut v = vec![0.0; n];
        v[n / 2] = 1.0;
        Ok(Self {
            kind: LoadKind::Point,
            values: v,
        })
    }

    /// Any finite non-zero vector, normalized.
    pub fn custom(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("load vector must be non-empty and finite"));
        }
        let nrm = norm2(&values);
        if nrm == 0.0 {
            return Err(Error::invalid("load vector is zero"));
        }
        Ok(Self {
            kind: LoadKind::Custom,
            values: values.into_iter().map(|v| v / nrm).collect(),
        })
    }

    pub fn new(kind: LoadKind, n: usize) -> Result<Self> {
        match kind {
            LoadKind::Uniform => Self::uniform(n),
            LoadKind::Point => Self::point(n),
            LoadKind::Custom => Err(Error::invalid("custom loads need explicit values")),
        }
    }

    fn with_kind(mut self, kind: LoadKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn kind(&self) -> LoadKind {
        self.kind
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
}

/// `λ̂_k = λ_k (1 + δ_k)` with `δ_k` uniform on `(-η, η)`.
///
/// The stream comes from ChaCha20 seeded with `seed`. Values pushed outside
/// `(0, 1]` are clamped back with a warning, then re-sorted and re-merged.
pub fn perturb_spectrum(spectrum: &Spectrum, eta: f64, seed: u64) -> Result<Spectrum> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::invalid(format!("eta must be >= 0, got {eta}")));
    }
    if eta == 0.0 {
        return Ok(spectrum.clone());
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut clamped = 0;
    let values: Vec<f64> = spectrum
        .values()
        .iter()
        .map(|&l| {
            let v = l * (1.0 + rng.gen_range(-eta..eta));
            if v > 1.0 {
                clamped += 1;
                1.0
            } else if v <= 0.0 {
                clamped += 1;
                f64::MIN_POSITIVE
            } else {
                v
            }
        })
        .collect();
    if clamped > 0 {
        log::warn!("perturbation pushed {clamped} eigenvalue(s) outside (0, 1]; clamped");
    }
    merge_duplicates(&values, spectrum.merge_tol())
}
