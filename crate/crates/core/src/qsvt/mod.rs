//! Classical emulation of the noiseless QSVT output and its quality metrics.
//!
//! With exact phase angles, the post-selected QSVT state is `p(A)b/‖p(A)b‖`,
//! and the success probability is `‖p(A)b‖²/τ²`. Both are computed here
//! directly from the polynomial by a matrix-free Clenshaw recurrence, so no
//! phase factorization or circuit simulation is involved.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::chebpoly::{fmt_real, parse_toml, OddChebyshevPoly};
use crate::error::{Error, Result};
use crate::numerics::{clenshaw_matrix_apply, dot, norm2};
use crate::operators::{LoadVector, OperatorModel};

/// Tag recorded in every metrics output.
pub const EMULATION: &str = "exact-polynomial";

/// `p(A)b` for the normalized operator.
pub fn apply_polynomial(p: &OddChebyshevPoly, op: &OperatorModel, b: &[f64]) -> Result<Vec<f64>> {
    clenshaw_matrix_apply(p.coeffs(), op, b)
}

/// Normalized output state `p(A)b / ‖p(A)b‖`.
pub fn emulate(p: &OddChebyshevPoly, op: &OperatorModel, b: &LoadVector) -> Result<Vec<f64>> {
    let y = apply_polynomial(p, op, b.values())?;
    normalized(y)
}

fn normalized(y: Vec<f64>) -> Result<Vec<f64>> {
    let n = norm2(&y);
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::DegenerateOutput);
    }
    Ok(y.into_iter().map(|v| v / n).collect())
}

/// `A⁻¹b` from the eigenpairs of the normalized operator.
pub fn classical_solution(op: &OperatorModel, b: &LoadVector) -> Result<Vec<f64>> {
    op.apply_function(b.values(), |l| 1.0 / l)
}

/// Solution-quality figures of one polynomial on one problem.
#[derive(Clone, Debug, PartialEq)]
pub struct QsvtMetrics {
    pub degree: usize,
    /// `(uᵀ u_QSVT)²` against the normalized classical solution.
    pub fidelity: f64,
    /// `‖p(A)b‖² / τ²`.
    pub success_probability: f64,
    pub tau: f64,
    /// `bᵀ A⁻¹ b`.
    pub compliance: f64,
    /// `(bᵀ u_QSVT) τ √P_succ`.
    pub compliance_qsvt: f64,
    pub compliance_rel_error: f64,
    /// `max_k |λ_k p(λ_k) - 1|` over all eigenvalues.
    pub eig_residual_all: f64,
    /// The same over the `K` smallest eigenvalues, when a correction set is given.
    pub eig_residual_corrected: Option<f64>,
    pub emulation: String,
    pub seed: Option<u64>,
}

/// Metrics of `p` on `(op, b)`.
pub fn metrics(p: &OddChebyshevPoly, op: &OperatorModel, b: &LoadVector) -> Result<QsvtMetrics> {
    metrics_with_targets(p, op, b, None)
}

/// Like [`metrics`], also reporting the residual over the `k` smallest
/// eigenvalues.
pub fn metrics_with_targets(
    p: &OddChebyshevPoly,
    op: &OperatorModel,
    b: &LoadVector,
    corrected: Option<usize>,
) -> Result<QsvtMetrics> {
    if b.len() != op.eigenvalues().len() {
        return Err(Error::dims(format!(
            "load of length {} for an operator of dimension {}",
            b.len(),
            op.eigenvalues().len()
        )));
    }
    let y = apply_polynomial(p, op, b.values())?;
    let y_norm = norm2(&y);
    let u_q = normalized(y)?;
    let x = classical_solution(op, b)?;
    let u = normalized(x.clone())?;

    let tau = p.tau_or_compute();
    let overlap = dot(&u, &u_q);
    let success_probability = (y_norm / tau).powi(2);
    let compliance = dot(b.values(), &x);
    let compliance_qsvt = dot(b.values(), &u_q) * tau * success_probability.sqrt();
    let lambdas = op.eigenvalues();
    let res = |vals: &[f64]| {
        vals.iter()
            .map(|&l| p.residual(l).abs())
            .fold(0.0, f64::max)
    };
    Ok(QsvtMetrics {
        degree: p.degree(),
        fidelity: overlap * overlap,
        success_probability,
        tau,
        compliance,
        compliance_qsvt,
        compliance_rel_error: ((compliance_qsvt - compliance) / compliance).abs(),
        eig_residual_all: res(lambdas),
        eig_residual_corrected: corrected.map(|k| res(&lambdas[..k.min(lambdas.len())])),
        emulation: EMULATION.to_string(),
        seed: None,
    })
}

/// `|C_QSVT - bᵀ p(A) b|`, the discrepancy in the compliance identity.
pub fn compliance_identity_check(
    p: &OddChebyshevPoly,
    op: &OperatorModel,
    b: &LoadVector,
) -> Result<f64> {
    let y = apply_polynomial(p, op, b.values())?;
    let direct = dot(b.values(), &y);
    let tau = p.tau_or_compute();
    let y_norm = norm2(&y);
    let u_q = normalized(y)?;
    let c_qsvt = dot(b.values(), &u_q) * tau * (y_norm / tau);
    Ok((c_qsvt - direct).abs())
}

/// Metrics as a TOML document.
pub fn metrics_document(m: &QsvtMetrics) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "emulation = \"{}\"", m.emulation);
    if let Some(seed) = m.seed {
        let _ = writeln!(out, "seed = {seed}");
    }
    let _ = writeln!(out, "degree = {}", m.degree);
    let _ = writeln!(out, "fidelity = {}", fmt_real(m.fidelity));
    let _ = writeln!(
        out,
        "success_probability = {}",
        fmt_real(m.success_probability)
    );
    let _ = writeln!(out, "tau = {}", fmt_real(m.tau));
    let _ = writeln!(out, "compliance = {}", fmt_real(m.compliance));
    let _ = writeln!(out, "compliance_qsvt = {}", fmt_real(m.compliance_qsvt));
    let _ = writeln!(
        out,
        "compliance_rel_error = {}",
        fmt_real(m.compliance_rel_error)
    );
    let _ = writeln!(out, "eig_residual_all = {}", fmt_real(m.eig_residual_all));
    if let Some(r) = m.eig_residual_corrected {
        let _ = writeln!(out, "eig_residual_corrected = {}", fmt_real(r));
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetrics {
    emulation: String,
    seed: Option<u64>,
    degree: usize,
    fidelity: f64,
    success_probability: f64,
    tau: f64,
    compliance: f64,
    compliance_qsvt: f64,
    compliance_rel_error: f64,
    eig_residual_all: f64,
    eig_residual_corrected: Option<f64>,
}

pub fn metrics_from_document(text: &str) -> Result<QsvtMetrics> {
    let r: RawMetrics = parse_toml(text)?;
    Ok(QsvtMetrics {
        degree: r.degree,
        fidelity: r.fidelity,
        success_probability: r.success_probability,
        tau: r.tau,
        compliance: r.compliance,
        compliance_qsvt: r.compliance_qsvt,
        compliance_rel_error: r.compliance_rel_error,
        eig_residual_all: r.eig_residual_all,
        eig_residual_corrected: r.eig_residual_corrected,
        emulation: r.emulation,
        seed: r.seed,
    })
}
