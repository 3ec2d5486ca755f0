//! Minimal-degree Remez and Mang approximations of 1/x on [1/κ, 1].
//!
//! ```text
//! cargo run --example base_polynomials -- 10 0.2
//! ```

use specpoly::basepoly::{mang_min_degree, remez, remez_min_degree, ApproxSpec};
use specpoly::chebpoly::{max_residual, DEFAULT_GRID};

fn main() -> specpoly::Result<()> {
    let mut args = std::env::args().skip(1);
    let kappa: f64 = args.next().map_or(Ok(10.0), |s| s.parse()).expect("kappa");
    let eps: f64 = args.next().map_or(Ok(0.2), |s| s.parse()).expect("eps");
    let spec = ApproxSpec::new(kappa, eps)?;

    let r = remez_min_degree(&spec)?;
    let m = mang_min_degree(&spec)?;
    println!("kappa = {kappa}, eps = {eps}");
    println!(
        "{:<6} {:>6} {:>12} {:>12}",
        "method", "degree", "max |xp-1|", "tau"
    );
    for p in [&r, &m] {
        println!(
            "{:<6} {:>6} {:>12.4e} {:>12.4}",
            p.label(),
            p.degree(),
            max_residual(p, DEFAULT_GRID),
            p.tau_or_compute()
        );
    }

    // The minimax certificate at the Remez degree.
    let (_, state) = remez(&spec, r.n_terms())?;
    println!(
        "\nremez: {} iterations, {} alternations, levelled error {:.6e}",
        state.iterations, state.alternations, state.levelled_error
    );
    Ok(())
}
