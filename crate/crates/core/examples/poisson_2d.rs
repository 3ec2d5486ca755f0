//! Degenerate 2D Poisson spectrum: corrected-eigenvalue count against
//! solution quality at fixed degree 305.

use specpoly::basepoly::{default_theta_grid, mang, ApproxSpec};
use specpoly::operators::{LoadVector, Normalization, OperatorModel};
use specpoly::qsvt::{classical_solution, emulate, metrics};
use specpoly::spectral::{spectral_correct, DEFAULT_MERGE_TOL};

fn peak(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn main() -> specpoly::Result<()> {
    let n1 = 16;
    let op = OperatorModel::poisson2d(n1, Normalization::StencilBound)?;
    let spectrum = op.spectrum(DEFAULT_MERGE_TOL)?;
    let b = LoadVector::uniform(n1 * n1)?;
    println!(
        "{} unknowns, {} distinct eigenvalues",
        spectrum.len(),
        spectrum.k_eff()
    );

    let nt = 153;
    let p0 = mang(
        &ApproxSpec::from_lower_edge(op.lower_edge(), 0.2)?,
        nt,
        default_theta_grid(nt),
    )?;
    let u = classical_solution(&op, &b)?;
    let un = specpoly::numerics::norm2(&u);
    println!("classical peak {:.4}", peak(&u) / un);

    println!("{:>4} {:>6} {:>12} {:>8}", "K", "K_eff", "fidelity", "peak");
    for k in [0, 1, 4, 8, 16, 32] {
        let (p, k_eff) = if k == 0 {
            (p0.clone(), 0)
        } else {
            let (p, r) = spectral_correct(&p0, &spectrum, k)?;
            (p, r.k_eff())
        };
        let q = metrics(&p, &op, &b)?;
        let mut y = emulate(&p, &op, &b)?;
        if specpoly::numerics::dot(&y, &u) < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        println!("{k:>4} {k_eff:>6} {:>12.8} {:>8.4}", q.fidelity, peak(&y));
    }
    Ok(())
}
