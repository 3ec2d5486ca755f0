//! Correction with inexact eigenvalues: every target is multiplied by
//! `1 + η·u`, `u ~ U(-1, 1)`, with a seeded generator.

use specpoly::basepoly::{mang_min_degree, ApproxSpec};
use specpoly::operators::{perturb_spectrum, LoadVector, Normalization, OperatorModel};
use specpoly::qsvt::metrics;
use specpoly::spectral::{spectral_correct, DEFAULT_MERGE_TOL};

fn main() -> specpoly::Result<()> {
    let op = OperatorModel::poisson1d(16, Normalization::StencilBound)?;
    let spectrum = op.spectrum(DEFAULT_MERGE_TOL)?;
    let b = LoadVector::uniform(16)?;
    let p0 = mang_min_degree(&ApproxSpec::from_lower_edge(op.lower_edge(), 0.5)?)?;
    let seed = 42;

    println!(
        "{:>6} {:>14} {:>12} {:>8}",
        "eta", "mean F", "mean C err", "mean P"
    );
    for eta in [0.0, 1e-3, 1e-2, 1e-1] {
        let trials = 10;
        let (mut f, mut c, mut p) = (0.0, 0.0, 0.0);
        for i in 0..trials {
            let s = perturb_spectrum(&spectrum, eta, seed + i)?;
            let (pc, _) = spectral_correct(&p0, &s, s.len())?;
            let q = metrics(&pc, &op, &b)?;
            f += q.fidelity;
            c += q.compliance_rel_error;
            p += q.success_probability;
        }
        let n = trials as f64;
        println!("{eta:>6} {:>14.10} {:>12.3e} {:>8.4}", f / n, c / n, p / n);
    }
    Ok(())
}
