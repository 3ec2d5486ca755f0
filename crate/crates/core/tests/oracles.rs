//! Hand-computed and brute-force reference values.

use specpoly::basepoly::{mang, mang_min_degree, remez, remez_min_degree, ApproxSpec};
use specpoly::chebpoly::{
    clenshaw_odd, compute_tau, error_profile, from_document, max_residual, odd_basis, to_document,
    Label, OddChebyshevPoly, DEFAULT_GRID,
};
use specpoly::numerics::{clenshaw_matrix_apply, lstsq, pinv_solve, solve, svd, DenseMatrix};
use specpoly::operators::{LoadVector, Normalization, OperatorModel};
use specpoly::qsvt::{compliance_identity_check, emulate, metrics};
use specpoly::spectral::{
    merge_duplicates, prop1_bound, pure_spectral, spectral_correct, spectral_correct_at, Spectrum,
    DEFAULT_MERGE_TOL,
};
use specpoly::Error;

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn external(coeffs: Vec<f64>, a: f64) -> OddChebyshevPoly {
    OddChebyshevPoly::new(coeffs, a, Label::External).unwrap()
}

#[test]
fn svd_small_cases() {
    let s = svd(&DenseMatrix::identity(2)).unwrap();
    assert!(close(&s.sigma, &[1.0, 1.0], 1e-15));
    let s = svd(&DenseMatrix::from_diag(&[3.0, 0.0])).unwrap();
    assert!(close(&s.sigma, &[3.0, 0.0], 1e-15));
    let swap = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let s = svd(&swap).unwrap();
    assert!(close(&s.sigma, &[1.0, 1.0], 1e-15));
    assert!(s.reconstruct().max_abs_diff(&swap) < 1e-14);
}

#[test]
fn min_norm_solutions() {
    let m = DenseMatrix::from_rows(&[vec![1.0, 0.0]]).unwrap();
    assert!(close(
        &pinv_solve(&m, &[2.0], 1e-12).unwrap(),
        &[2.0, 0.0],
        1e-15
    ));

    let m = DenseMatrix::from_rows(&[vec![0.25, -0.5]]).unwrap();
    let x = pinv_solve(&m, &[1.0], 1e-12).unwrap();
    assert!(close(&x, &[0.8, -1.6], 1e-12));
    assert!((0.25 * x[0] - 0.5 * x[1] - 1.0).abs() < 1e-14);

    let m = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
    assert!(close(
        &pinv_solve(&m, &[1.0, 1.0], 1e-12).unwrap(),
        &[1.0, 0.0],
        1e-14
    ));
}

#[test]
fn least_squares_cases() {
    let m = DenseMatrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
    assert!(close(&lstsq(&m, &[0.0, 2.0]).unwrap(), &[1.0], 1e-14));

    let m = DenseMatrix::from_fn(7, 3, |i, j| ((i + 1) as f64).powi(j as i32) / 10.0);
    let x0 = [0.5, -2.0, 1.25];
    let rhs = m.matvec(&x0).unwrap();
    let x = lstsq(&m, &rhs).unwrap();
    let r = m.matvec(&x).unwrap();
    assert!(close(&r, &rhs, 1e-12));

    let sq = DenseMatrix::from_rows(&[vec![4.0, 1.0], vec![2.0, 3.0]]).unwrap();
    let x = solve(&sq, &[1.0, 2.0]).unwrap();
    assert!(close(&sq.matvec(&x).unwrap(), &[1.0, 2.0], 1e-12));
}

#[test]
fn clenshaw_scalar_and_matrix() {
    assert_eq!(clenshaw_odd(&[1.0], 0.3), 0.3);
    assert!((clenshaw_odd(&[0.0, 1.0], 0.5) + 1.0).abs() < 1e-15);
    assert!(close(&odd_basis(0.5, 2), &[0.5, -1.0], 1e-15));

    let half = DenseMatrix::from_diag(&[0.5]);
    assert!(close(
        &clenshaw_matrix_apply(&[1.0], &half, &[1.0]).unwrap(),
        &[0.5],
        1e-15
    ));
    assert!(close(
        &clenshaw_matrix_apply(&[0.0, 1.0], &half, &[1.0]).unwrap(),
        &[-1.0],
        1e-15
    ));
}

#[test]
fn clenshaw_matches_analytic_eigenexpansion() {
    let op = OperatorModel::poisson1d(4, Normalization::MaxEigenvalue).unwrap();
    let coeffs = [0.7, -0.2, 0.05, 0.3];
    let b = [1.0, -2.0, 0.5, 3.0];
    let y = clenshaw_matrix_apply(&coeffs, &op, &b).unwrap();
    // Sine eigenvectors of the tridiagonal stencil, written out directly.
    let n = 4;
    let mut z = [0.0; 4];
    for k in 1..=n {
        let theta = k as f64 * std::f64::consts::PI / (n + 1) as f64;
        let lam = (2.0 - 2.0 * theta.cos()) / (2.0 - 2.0 * (n as f64 * theta / k as f64).cos());
        let v: Vec<f64> = (1..=n)
            .map(|j| (2.0 / (n + 1) as f64).sqrt() * (j as f64 * theta).sin())
            .collect();
        let c: f64 = v.iter().zip(&b).map(|(a, b)| a * b).sum();
        let p = clenshaw_odd(&coeffs, lam);
        z.iter_mut().zip(&v).for_each(|(zi, vi)| *zi += p * c * vi);
    }
    assert!(close(&y, &z, 1e-12), "{y:?} vs {z:?}");
}

#[test]
fn tau_examples() {
    assert!((compute_tau(&external(vec![1.0], 0.1), DEFAULT_GRID) - 1.0).abs() < 1e-12);
    assert!((compute_tau(&external(vec![2.0], 0.1), DEFAULT_GRID) - 2.0).abs() < 1e-12);
    let s = merge_duplicates(&[0.1, 0.5, 1.0], DEFAULT_MERGE_TOL).unwrap();
    let p = pure_spectral(&s, 1.0).unwrap();
    assert_eq!(p.degree(), 5);
    assert!(p.tau_or_compute() > 10.0);
}

#[test]
fn residual_at_interval_end() {
    let p = external(vec![1.0], 1.0);
    assert_eq!(p.residual(1.0), 0.0);
    assert_eq!(error_profile(&p, 1000).max_residual, 0.0);
}

#[test]
fn document_round_trip_and_errors() {
    let p = remez_min_degree(&ApproxSpec::new(10.0, 0.2).unwrap()).unwrap();
    let q = from_document(&to_document(&p)).unwrap();
    assert_eq!(p.coeffs(), q.coeffs());
    assert_eq!(p, q);

    let missing = "basis = \"odd-chebyshev\"\nlabel = \"mang\"\na = 0.1\n";
    assert!(matches!(from_document(missing), Err(Error::Parse { .. })));

    let ext =
        "basis = \"odd-chebyshev\"\nlabel = \"external\"\na = 0.1\ncoeffs = [1.5, -0.25, 0.125]\n";
    let p = from_document(ext).unwrap();
    assert_eq!(p.label(), Label::External);
    assert_eq!(p.degree(), 5);
}

#[test]
fn remez_degree_and_accuracy() {
    let spec = ApproxSpec::new(10.0, 0.2).unwrap();
    let (p, state) = remez(&spec, 12).unwrap();
    assert_eq!(p.degree(), 23);
    assert!(max_residual(&p, DEFAULT_GRID) <= 0.2);
    assert!(state.alternations >= 13);
    assert_eq!(remez_min_degree(&spec).unwrap().degree(), 23);
    let loose = remez_min_degree(&ApproxSpec::new(10.0, 0.5).unwrap()).unwrap();
    assert!(loose.degree() <= 23);
}

#[test]
fn remez_degenerate_interval() {
    let (p, _) = remez(&ApproxSpec::new(1.0 + 1e-9, 0.1).unwrap(), 1).unwrap();
    assert!((p.value(1.0) - 1.0).abs() < 1e-8);
    assert!(max_residual(&p, DEFAULT_GRID) < 1e-8);
}

/// Golden-section search over the single coefficient `c` of `c·x`.
fn brute_force_c0(a: f64) -> f64 {
    let worst = |c: f64| {
        (0..=20_000)
            .map(|i| a + (1.0 - a) * i as f64 / 20_000.0)
            .map(|x| (c * x * x - 1.0).abs())
            .fold(0.0, f64::max)
    };
    let (mut lo, mut hi) = (0.0, 1.0 / (a * a));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-10 {
        let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if worst(m1) < worst(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn remez_single_term_matches_brute_force() {
    let (p, _) = remez(&ApproxSpec::new(2.0, 0.5).unwrap(), 1).unwrap();
    let c = brute_force_c0(0.5);
    assert!((p.coeffs()[0] - c).abs() < 1e-6, "{} vs {c}", p.coeffs()[0]);
}

#[test]
fn min_degree_equals_exhaustive_scan() {
    let spec = ApproxSpec::new(4.0, 0.1).unwrap();
    let first_ok = (1..40)
        .find(|&n| max_residual(&remez(&spec, n).unwrap().0, DEFAULT_GRID) <= 0.1)
        .unwrap();
    assert_eq!(remez_min_degree(&spec).unwrap().degree(), 2 * first_ok - 1);
    let first_ok = (1..40)
        .find(|&n| {
            let p = mang(&spec, n, specpoly::basepoly::default_theta_grid(n)).unwrap();
            error_profile(&p, DEFAULT_GRID).max_residual <= 0.1
        })
        .unwrap();
    assert_eq!(mang_min_degree(&spec).unwrap().degree(), 2 * first_ok - 1);
}

#[test]
fn mang_examples() {
    let spec = ApproxSpec::new(10.0, 0.2).unwrap();
    let p = mang_min_degree(&spec).unwrap();
    assert_eq!(p.degree(), 27);
    let prof = error_profile(&p, DEFAULT_GRID);
    assert!(prof.argmax() < 0.2, "peak at {}", prof.argmax());

    let one = mang(&spec, 1, 1).unwrap();
    assert!((one.coeffs()[0] - 1.0).abs() < 1e-15);
}

#[test]
fn mang_matches_normal_equations() {
    let spec = ApproxSpec::new(10.0, 0.2).unwrap();
    let (n, grid) = (3, 50);
    let p = mang(&spec, n, grid).unwrap();
    // Rows cos((2j+1)θ) with right-hand side 1/cos θ on the θ-grid over
    // [0, arccos a].
    let tmax = spec.a().acos();
    let thetas: Vec<f64> = (0..grid)
        .map(|i| tmax * i as f64 / (grid - 1) as f64)
        .collect();
    let rows: Vec<Vec<f64>> = thetas
        .iter()
        .map(|t| (0..n).map(|j| ((2 * j + 1) as f64 * t).cos()).collect())
        .collect();
    let rhs: Vec<f64> = thetas.iter().map(|t| 1.0 / t.cos()).collect();
    let m = DenseMatrix::from_rows(&rows).unwrap();
    let mtm = m.transpose().matmul(&m).unwrap();
    let mtb = m.matvec_t(&rhs).unwrap();
    let c = solve(&mtm, &mtb).unwrap();
    assert!(close(p.coeffs(), &c, 1e-10), "{:?} vs {c:?}", p.coeffs());
}

#[test]
fn merge_examples() {
    let s = merge_duplicates(&[0.1, 0.1, 1.0], 1e-9).unwrap();
    assert_eq!(s.representatives(), &[0.1, 1.0]);
    assert_eq!(s.k_eff(), 2);
    let s = merge_duplicates(&[0.3], 0.5).unwrap();
    assert_eq!(s.representatives(), &[0.3]);
    let op = OperatorModel::poisson2d(16, Normalization::StencilBound).unwrap();
    let lowest = op.spectrum(1e-9).unwrap().smallest(32).unwrap();
    assert_eq!(lowest.k_eff(), 18);
}

#[test]
fn pure_spectral_examples() {
    let p = pure_spectral(&Spectrum::new(vec![1.0], DEFAULT_MERGE_TOL).unwrap(), 1.0).unwrap();
    assert!(close(p.coeffs(), &[1.0], 1e-15));
    let p = pure_spectral(&Spectrum::new(vec![0.5], DEFAULT_MERGE_TOL).unwrap(), 2.0).unwrap();
    assert!(close(p.coeffs(), &[0.8, -1.6], 1e-12));
    assert!(pure_spectral(&Spectrum::new(vec![0.5], DEFAULT_MERGE_TOL).unwrap(), 0.5).is_err());
}

#[test]
fn hand_correction() {
    let p0 = external(vec![1.0], 0.5);
    let (p, r) = spectral_correct_at(&p0, &[0.5], DEFAULT_MERGE_TOL).unwrap();
    assert!(close(&r.residuals, &[0.75], 1e-15));
    assert!(close(&r.alpha, &[12.0], 1e-12));
    assert!(close(&r.correction, &[3.0], 1e-12));
    assert!(close(p.coeffs(), &[4.0], 1e-12));
    assert!((0.5 * p.value(0.5) - 1.0).abs() < 1e-15);
    assert_eq!(p.label(), Label::SpectralCorrected);

    // Bound at x = 1 is ε + 0.25·12·1; the observed residual there is 3.
    let eps = 0.0;
    let bound = prop1_bound(eps, &[0.5], &r.alpha, 1, 1.0).unwrap();
    assert!((bound - 3.0).abs() < 1e-12);
    assert!(p.residual(1.0).abs() <= bound + 1e-12);
}

#[test]
fn zero_residual_needs_no_correction() {
    let s = merge_duplicates(&[0.2, 0.6, 1.0], DEFAULT_MERGE_TOL).unwrap();
    let p0 = pure_spectral(&s, 2.0).unwrap();
    let (p, r) = spectral_correct(&p0, &s, 3).unwrap();
    assert!(r.alpha.iter().all(|a| a.abs() < 1e-10));
    assert!(close(p.coeffs(), p0.coeffs(), 1e-12));
    assert_eq!(prop1_bound(0.2, &[0.2], &[0.0], 4, 0.5).unwrap(), 0.2);
}

#[test]
fn too_many_targets_is_reported() {
    let p0 = external(vec![1.0, 0.5], 0.1);
    let err = spectral_correct_at(&p0, &[0.2, 0.4, 0.6], DEFAULT_MERGE_TOL).unwrap_err();
    assert!(matches!(
        err,
        Error::TooManyTargets {
            k_eff: 3,
            n_terms: 2
        }
    ));
}

#[test]
fn poisson_four_point_correction() {
    let op = OperatorModel::poisson1d(4, Normalization::MaxEigenvalue).unwrap();
    let s = op.spectrum(DEFAULT_MERGE_TOL).unwrap();
    let p0 = mang_min_degree(&ApproxSpec::from_lower_edge(op.lower_edge(), 0.1).unwrap()).unwrap();
    let (p, _) = spectral_correct(&p0, &s, 4).unwrap();
    assert_eq!(p.degree(), p0.degree());
    for &l in s.values() {
        assert!(p.residual(l).abs() < 1e-13);
    }
}

#[test]
fn example_one_bound_on_dense_grid() {
    let p0 = remez_min_degree(&ApproxSpec::new(10.0, 0.2).unwrap()).unwrap();
    let (p, r) = spectral_correct_at(&p0, &[0.1, 0.5, 1.0], DEFAULT_MERGE_TOL).unwrap();
    for i in 0..10_000 {
        let x = 0.1 + 0.9 * i as f64 / 9_999.0;
        assert!(p.residual(x).abs() <= r.bound_at(x));
    }
}

#[test]
fn poisson_spectra() {
    let op = OperatorModel::poisson1d(4, Normalization::MaxEigenvalue).unwrap();
    assert!(close(
        op.eigenvalues(),
        &[0.105573, 0.381966, 0.723607, 1.0],
        1e-6
    ));
    assert!((op.kappa() - 9.47).abs() < 5e-3);

    let one = OperatorModel::poisson1d(1, Normalization::MaxEigenvalue).unwrap();
    assert_eq!(one.eigenvalues(), &[1.0]);
    assert_eq!(one.kappa(), 1.0);

    let op = OperatorModel::poisson1d(16, Normalization::StencilBound).unwrap();
    assert!((op.kappa() / 117.6 - 1.0).abs() < 0.02);

    let op = OperatorModel::poisson2d(2, Normalization::MaxEigenvalue).unwrap();
    assert!(close(
        op.eigenvalues(),
        &[1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0],
        1e-14
    ));
    assert!((op.kappa() - 3.0).abs() < 1e-14);
    assert_eq!(op.spectrum(DEFAULT_MERGE_TOL).unwrap().k_eff(), 3);

    let op = OperatorModel::poisson2d(16, Normalization::StencilBound).unwrap();
    assert_eq!(op.eigenvalues().len(), 256);
    assert!((op.kappa() / 117.6 - 1.0).abs() < 0.02);

    let op = OperatorModel::poisson2d(1, Normalization::MaxEigenvalue).unwrap();
    assert_eq!(op.eigenvalues(), &[1.0]);
}

#[test]
fn load_vectors() {
    assert_eq!(LoadVector::uniform(4).unwrap().values(), &[0.5; 4]);
    let p = LoadVector::point(16).unwrap();
    assert_eq!(p.values().iter().position(|&v| v == 1.0), Some(8));
    assert_eq!(p.values().iter().filter(|&&v| v != 0.0).count(), 1);
    let c = LoadVector::custom(vec![3.0, 4.0]).unwrap();
    assert!(close(c.values(), &[0.6, 0.8], 1e-15));
}

#[test]
fn emulation_trivial_cases() {
    let op = OperatorModel::diagonal(&[0.5]).unwrap();
    let b = LoadVector::uniform(1).unwrap();
    assert!(close(
        &emulate(&external(vec![1.0], 0.5), &op, &b).unwrap(),
        &[1.0],
        1e-15
    ));

    let op = OperatorModel::poisson1d(8, Normalization::MaxEigenvalue).unwrap();
    let s = op.spectrum(DEFAULT_MERGE_TOL).unwrap();
    let p = pure_spectral(&s, 2.0).unwrap();
    let m = metrics(&p, &op, &LoadVector::uniform(8).unwrap()).unwrap();
    assert!((m.fidelity - 1.0).abs() < 1e-12);
    assert!(m.compliance_rel_error < 1e-10);
}

#[test]
fn compliance_on_single_mode() {
    let op = OperatorModel::poisson1d(6, Normalization::MaxEigenvalue).unwrap();
    let p = mang_min_degree(&ApproxSpec::from_lower_edge(op.lower_edge(), 0.1).unwrap()).unwrap();
    let k = 2;
    let v = LoadVector::custom(op.eigenvectors().column(k)).unwrap();
    let m = metrics(&p, &op, &v).unwrap();
    let lam = op.eigenvalues()[k];
    assert!((m.compliance_qsvt - p.value(lam)).abs() < 1e-10);
    assert!(compliance_identity_check(&p, &op, &v).unwrap() < 1e-10);
}

#[test]
fn table_one_row_for_eight_points() {
    let op = OperatorModel::poisson1d(8, Normalization::StencilBound).unwrap();
    let p = pure_spectral(&op.spectrum(DEFAULT_MERGE_TOL).unwrap(), 4.0).unwrap();
    assert_eq!(p.degree(), 63);
    let m = metrics(&p, &op, &LoadVector::uniform(8).unwrap()).unwrap();
    assert!((m.tau * op.lower_edge() - 1.01).abs() < 0.01);
}
