//! The TOML documents exchanged between the command-line stages: polynomial,
//! spectrum and metrics, each written and read back.

use specpoly::basepoly::{mang_min_degree, ApproxSpec};
use specpoly::chebpoly::{from_document, to_document};
use specpoly::operators::{
    spectrum_document, spectrum_from_document, LoadVector, Normalization, OperatorModel,
};
use specpoly::qsvt::{metrics, metrics_document, metrics_from_document};
use specpoly::spectral::DEFAULT_MERGE_TOL;

fn main() -> specpoly::Result<()> {
    let op = OperatorModel::poisson1d(4, Normalization::MaxEigenvalue)?;
    let spectrum_text = spectrum_document(&op, DEFAULT_MERGE_TOL);
    println!("# spectrum\n{spectrum_text}");
    let doc = spectrum_from_document(&spectrum_text)?;
    assert_eq!(doc.spectrum.values(), op.eigenvalues());

    let p = mang_min_degree(&ApproxSpec::from_lower_edge(op.lower_edge(), 0.2)?)?;
    let poly_text = to_document(&p);
    println!("# polynomial (first lines)");
    poly_text.lines().take(8).for_each(|l| println!("{l}"));
    assert_eq!(from_document(&poly_text)?, p);

    let m = metrics(&p, &op, &LoadVector::uniform(4)?)?;
    let metrics_text = metrics_document(&m);
    println!("\n# metrics\n{metrics_text}");
    assert_eq!(metrics_from_document(&metrics_text)?, m);
    Ok(())
}
