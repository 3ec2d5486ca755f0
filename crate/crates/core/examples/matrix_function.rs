//! Applying a polynomial to an arbitrary symmetric matrix through the
//! three-term recurrence, checked against the eigen-expansion.

use specpoly::basepoly::{mang_min_degree, ApproxSpec};
use specpoly::numerics::{clenshaw_matrix_apply, norm2, DenseMatrix};
use specpoly::operators::OperatorModel;

fn main() -> specpoly::Result<()> {
    // A symmetric positive definite 5×5 matrix, scaled so that ‖A‖₂ = 1.
    let n = 5;
    let m = DenseMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 3.0,
        1 => -1.0,
        _ => 0.0,
    });
    let op = OperatorModel::dense(m)?;
    println!(
        "eigenvalues {:.4?}, kappa {:.3}",
        op.eigenvalues(),
        op.kappa()
    );

    let p = mang_min_degree(&ApproxSpec::from_lower_edge(op.lower_edge(), 1e-3)?)?;
    let b = vec![1.0, 0.0, -1.0, 2.0, 0.5];
    let y = clenshaw_matrix_apply(p.coeffs(), &op, &b)?;
    let z = op.apply_function(&b, |l| p.value(l))?;
    let x = op.apply_function(&b, |l| 1.0 / l)?;
    let err = |v: &[f64], w: &[f64]| {
        let d: Vec<f64> = v.iter().zip(w).map(|(a, b)| a - b).collect();
        norm2(&d) / norm2(w)
    };
    println!("degree {}", p.degree());
    println!("recurrence vs eigen-expansion: {:.2e}", err(&y, &z));
    println!("p(A)b vs A^-1 b:               {:.2e}", err(&y, &x));
    Ok(())
}
