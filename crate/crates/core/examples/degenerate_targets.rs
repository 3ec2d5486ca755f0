//! Repeated eigenvalues are merged before correcting, so a duplicate target
//! gives the same polynomial as listing it once.

use specpoly::basepoly::{mang_min_degree, ApproxSpec};
use specpoly::spectral::{merge_duplicates, spectral_correct_at, DEFAULT_MERGE_TOL};

fn main() -> specpoly::Result<()> {
    let p0 = mang_min_degree(&ApproxSpec::new(10.0, 0.2)?)?;
    let raw = [0.1, 0.1 + 1e-12, 1.0];
    let merged = merge_duplicates(&raw, DEFAULT_MERGE_TOL)?;
    println!(
        "targets {raw:?} -> representatives {:?}",
        merged.representatives()
    );

    let (a, ra) = spectral_correct_at(&p0, &raw, DEFAULT_MERGE_TOL)?;
    let (b, _) = spectral_correct_at(&p0, &[0.1, 1.0], DEFAULT_MERGE_TOL)?;
    let diff = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    println!(
        "K_eff = {}, Gram condition {:.3e}",
        ra.k_eff(),
        ra.gram_condition
    );
    println!("largest coefficient difference: {diff:.1e}");

    // Without merging the Gram matrix would be singular; a zero tolerance
    // still collapses exact duplicates.
    let exact = merge_duplicates(&[0.1, 0.1, 1.0], 0.0)?;
    println!("tolerance 0: K_eff = {}", exact.k_eff());
    Ok(())
}
