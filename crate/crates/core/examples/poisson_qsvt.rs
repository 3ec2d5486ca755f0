//! QSVT solution quality on the 1D Poisson problem: a loose Mang base, a
//! tight one, and the loose one corrected at all sixteen eigenvalues.

use specpoly::basepoly::{mang_min_degree, ApproxSpec};
use specpoly::operators::{LoadVector, Normalization, OperatorModel};
use specpoly::qsvt::metrics;
use specpoly::spectral::{spectral_correct, DEFAULT_MERGE_TOL};

fn main() -> specpoly::Result<()> {
    let op = OperatorModel::poisson1d(16, Normalization::StencilBound)?;
    let spectrum = op.spectrum(DEFAULT_MERGE_TOL)?;
    println!("N = 16, kappa = {:.2}", op.kappa());

    let loose = mang_min_degree(&ApproxSpec::from_lower_edge(op.lower_edge(), 0.5)?)?;
    let tight = mang_min_degree(&ApproxSpec::from_lower_edge(op.lower_edge(), 1e-3)?)?;
    let (corrected, _) = spectral_correct(&loose, &spectrum, 16)?;

    for b in [LoadVector::uniform(16)?, LoadVector::point(16)?] {
        println!("\n{} load", b.kind());
        println!(
            "{:<14} {:>5} {:>14} {:>12} {:>8} {:>9}",
            "method", "d", "fidelity", "C rel err", "P", "tau"
        );
        for (name, p) in [
            ("mang 0.5", &loose),
            ("mang 1e-3", &tight),
            ("spectral-mang", &corrected),
        ] {
            let q = metrics(p, &op, &b)?;
            println!(
                "{name:<14} {:>5} {:>14.10} {:>12.3e} {:>8.4} {:>9.2}",
                q.degree, q.fidelity, q.compliance_rel_error, q.success_probability, q.tau
            );
        }
    }
    println!(
        "\ndepth ratio {:.2}",
        tight.degree() as f64 / corrected.degree() as f64
    );
    Ok(())
}
