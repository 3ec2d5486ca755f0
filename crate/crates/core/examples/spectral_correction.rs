//! Spectral correction of a Remez base at three known eigenvalues, with the
//! pointwise error bound and the audit document.

use specpoly::basepoly::{remez_min_degree, ApproxSpec};
use specpoly::chebpoly::uniform_grid;
use specpoly::spectral::{correction_report_document, spectral_correct_at, DEFAULT_MERGE_TOL};

fn main() -> specpoly::Result<()> {
    let p0 = remez_min_degree(&ApproxSpec::new(10.0, 0.2)?)?;
    let targets = [0.1, 0.15, 1.0];
    let (p, report) = spectral_correct_at(&p0, &targets, DEFAULT_MERGE_TOL)?;

    println!("degree {} -> {}", p0.degree(), p.degree());
    println!("{:>6} {:>12} {:>12}", "lambda", "before", "after");
    for &l in &targets {
        println!(
            "{l:>6} {:>12.3e} {:>12.3e}",
            p0.residual(l).abs(),
            p.residual(l).abs()
        );
    }
    println!(
        "tau {:.4} -> {:.4}",
        p0.tau_or_compute(),
        p.tau_or_compute()
    );

    let slack = uniform_grid(p.a(), 1.0, 2000)
        .into_iter()
        .map(|x| report.bound_at(x) - p.residual(x).abs())
        .fold(f64::INFINITY, f64::min);
    println!("smallest bound slack on [a, 1]: {slack:.3e}\n");

    print!("{}", correction_report_document(&report, p.a()));
    Ok(())
}
