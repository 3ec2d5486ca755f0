//! Pure spectral polynomials: exact at every eigenvalue, nothing promised
//! in between. Oversampling the degree shrinks the subnormalization τ.

use specpoly::spectral::{
    eig_residual, merge_duplicates, pure_spectral, Subset, DEFAULT_MERGE_TOL,
};

fn main() -> specpoly::Result<()> {
    let spectrum = merge_duplicates(&[0.1, 0.5, 1.0], DEFAULT_MERGE_TOL)?;
    println!(
        "{:>8} {:>6} {:>10} {:>12}",
        "n_factor", "degree", "tau", "eig residual"
    );
    for nf in [1.0, 2.0, 3.0, 4.0] {
        let p = pure_spectral(&spectrum, nf)?;
        println!(
            "{nf:>8} {:>6} {:>10.4} {:>12.2e}",
            p.degree(),
            p.tau_or_compute(),
            eig_residual(&p, &spectrum, Subset::All)
        );
    }
    Ok(())
}
