use proptest::collection::vec;
use proptest::prelude::*;

use specpoly::basepoly::{default_theta_grid, mang, mang_min_degree, remez, ApproxSpec};
use specpoly::chebpoly::{
    compute_tau, from_document, max_residual, to_document, Label, OddChebyshevPoly, DEFAULT_GRID,
};
use specpoly::numerics::{norm2, pinv_solve, svd, DenseMatrix};
use specpoly::operators::{perturb_spectrum, LoadVector, Normalization, OperatorModel};
use specpoly::qsvt::{compliance_identity_check, metrics};
use specpoly::spectral::{merge_duplicates, spectral_correct_at, Spectrum, DEFAULT_MERGE_TOL};

fn poly(coeffs: Vec<f64>, a: f64) -> OddChebyshevPoly {
    OddChebyshevPoly::new(coeffs, a, Label::External).unwrap()
}

/// Up to four targets in `[0.1, 1]`, pairwise at least 0.05 apart.
fn separated_targets() -> impl Strategy<Value = Vec<f64>> {
    vec(0.1f64..=1.0, 1..=4).prop_filter("separated", |t| {
        let mut s = t.clone();
        s.sort_by(f64::total_cmp);
        s.windows(2).all(|w| w[1] - w[0] >= 0.05)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parity_is_exact(c in vec(-2.0f64..2.0, 1..40), x in -1.0f64..=1.0) {
        let p = poly(c, 0.1);
        prop_assert_eq!(p.eval(-x).unwrap(), -p.eval(x).unwrap());
    }

    #[test]
    fn clenshaw_agrees_with_cosines(c in vec(-1.0f64..1.0, 1..60), x in -1.0f64..=1.0) {
        let p = poly(c.clone(), 0.1);
        let t = x.acos();
        let direct: f64 = c.iter().enumerate().map(|(j, cj)| cj * ((2 * j + 1) as f64 * t).cos()).sum();
        let scale: f64 = c.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        prop_assert!((p.eval(x).unwrap() - direct).abs() <= 1e-12 * scale);
    }

    #[test]
    fn tau_scales_linearly(c in vec(-1.0f64..1.0, 1..20), s in 0.1f64..10.0) {
        prop_assume!(c.iter().any(|v| v.abs() > 1e-3));
        let p = poly(c, 0.1);
        let t = compute_tau(&p, 2000);
        prop_assert!((compute_tau(&p.scaled(s), 2000) - s * t).abs() <= 1e-12 * s * t);
    }

    #[test]
    fn document_round_trip(c in vec(-1e3f64..1e3, 1..30), a in 1e-3f64..1.0) {
        let p = poly(c, a).with_eps_target(0.25);
        prop_assert_eq!(from_document(&to_document(&p)).unwrap(), p);
    }

    #[test]
    fn correction_interpolates_and_keeps_degree(
        c in vec(-1.0f64..1.0, 8..30),
        targets in separated_targets(),
    ) {
        let p0 = poly(c, 0.1);
        let (p, r) = spectral_correct_at(&p0, &targets, DEFAULT_MERGE_TOL).unwrap();
        prop_assert_eq!(p.n_terms(), p0.n_terms());
        for &l in &r.targets {
            prop_assert!(p.residual(l).abs() <= 1e-12, "residual {} at {}", p.residual(l), l);
        }
        let (q, _) = spectral_correct_at(&p, &targets, DEFAULT_MERGE_TOL).unwrap();
        for (x, y) in p.coeffs().iter().zip(q.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn bound_holds_pointwise(c in vec(-1.0f64..1.0, 8..20), targets in separated_targets()) {
        let p0 = poly(c, 0.1);
        let (p, r) = spectral_correct_at(&p0, &targets, DEFAULT_MERGE_TOL).unwrap();
        for i in 0..500 {
            let x = 0.1 + 0.9 * i as f64 / 499.0;
            prop_assert!(p.residual(x).abs() <= r.bound_at(x) + 1e-12);
        }
    }

    #[test]
    fn near_duplicates_do_not_change_the_correction(
        c in vec(-1.0f64..1.0, 8..20),
        targets in separated_targets(),
        jitter in 0.0f64..1e-10,
    ) {
        let p0 = poly(c, 0.1);
        let mut doubled = targets.clone();
        doubled.extend(targets.iter().map(|t| (t + jitter).min(1.0)));
        let (a, ra) = spectral_correct_at(&p0, &doubled, DEFAULT_MERGE_TOL).unwrap();
        let (b, rb) = spectral_correct_at(&p0, &targets, DEFAULT_MERGE_TOL).unwrap();
        prop_assert_eq!(ra.k_eff(), rb.k_eff());
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn merge_invariants(values in vec(1e-3f64..=1.0, 1..40), tol in 0.0f64..0.1) {
        let s = merge_duplicates(&values, tol).unwrap();
        prop_assert!(s.values().windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(s.k_eff() <= values.len());
        prop_assert!(s.representatives().windows(2).all(|w| w[1] - w[0] >= tol && w[1] > w[0]));
        // Every value lies within tol above some representative.
        for &v in s.values() {
            prop_assert!(s.representatives().iter().any(|&r| r == v || (r < v && v - r < tol)));
        }
    }

    #[test]
    fn pinv_is_minimum_norm(
        rows in 1usize..4,
        extra in 1usize..4,
        entries in vec(-1.0f64..1.0, 28),
        z in vec(-1.0f64..1.0, 7),
    ) {
        let cols = rows + extra;
        let m = DenseMatrix::from_fn(rows, cols, |i, j| entries[i * cols + j]);
        let rhs: Vec<f64> = (0..rows).map(|i| entries[21 + i]).collect();
        let dec = svd(&m).unwrap();
        prop_assume!(dec.condition() < 1e6);
        let x = pinv_solve(&m, &rhs, 1e-12).unwrap();
        let r = m.matvec(&x).unwrap();
        for (a, b) in r.iter().zip(&rhs) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        // Adding any null-space component can only lengthen the solution.
        let mut n: Vec<f64> = z[..cols].to_vec();
        for l in 0..rows {
            let v = dec.v.column(l);
            let c: f64 = v.iter().zip(&n).map(|(a, b)| a * b).sum();
            n.iter_mut().zip(&v).for_each(|(ni, vi)| *ni -= c * vi);
        }
        let other: Vec<f64> = x.iter().zip(&n).map(|(a, b)| a + b).collect();
        prop_assert!(norm2(&x) <= norm2(&other) + 1e-12);
    }

    #[test]
    fn svd_reconstructs_with_orthonormal_factors(
        (r, c, entries) in (1usize..7, 1usize..7).prop_flat_map(|(r, c)| (Just(r), Just(c), vec(-5.0f64..5.0, r * c)))
    ) {
        let m = DenseMatrix::from_fn(r, c, |i, j| entries[i * c + j]);
        let d = svd(&m).unwrap();
        prop_assert!(d.reconstruct().max_abs_diff(&m) <= 1e-10 * m.frobenius_norm().max(1.0));
        prop_assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]) && d.sigma.iter().all(|&s| s >= 0.0));
        for f in [&d.u, &d.v] {
            let g = f.transpose().matmul(f).unwrap();
            for i in 0..g.rows() {
                for j in 0..g.cols() {
                    // Columns belonging to zero singular values may be zero.
                    if i == j && d.sigma[i] == 0.0 {
                        continue;
                    }
                    let want = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((g[(i, j)] - want).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn qsvt_metrics_are_consistent(
        c in vec(-1.0f64..1.0, 1..30),
        load in vec(-1.0f64..1.0, 8),
        n in 2usize..9,
    ) {
        prop_assume!(load[..n].iter().any(|v| v.abs() > 1e-3));
        let op = OperatorModel::poisson1d(n, Normalization::MaxEigenvalue).unwrap();
        let b = LoadVector::custom(load[..n].to_vec()).unwrap();
        let p = poly(c, op.lower_edge());
        let y = specpoly::qsvt::apply_polynomial(&p, &op, b.values()).unwrap();
        prop_assume!(norm2(&y) > 1e-8);
        let m = metrics(&p, &op, &b).unwrap();
        prop_assert!(m.success_probability <= 1.0 + 1e-9);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&m.fidelity));
        let flipped = metrics(&p.scaled(-1.0), &op, &b).unwrap();
        prop_assert!((flipped.fidelity - m.fidelity).abs() <= 1e-12);
        let scale = norm2(&y).max(1.0);
        prop_assert!(compliance_identity_check(&p, &op, &b).unwrap() <= 1e-10 * scale);
    }

    #[test]
    fn perturbation_is_seeded_and_in_range(seed in any::<u64>(), eta in 0.0f64..0.5) {
        let s = Spectrum::new(vec![0.05, 0.3, 0.7, 1.0], DEFAULT_MERGE_TOL).unwrap();
        let a = perturb_spectrum(&s, eta, seed).unwrap();
        let b = perturb_spectrum(&s, eta, seed).unwrap();
        prop_assert_eq!(a.values(), b.values());
        prop_assert!(a.values().iter().all(|&v| v > 0.0 && v <= 1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mang_never_beats_remez(kappa in 2.0f64..30.0, n in 2usize..12) {
        let spec = ApproxSpec::new(kappa, 0.1).unwrap();
        let (r, _) = remez(&spec, n).unwrap();
        let m = mang(&spec, n, default_theta_grid(n)).unwrap();
        prop_assert!(max_residual(&m, DEFAULT_GRID) >= max_residual(&r, DEFAULT_GRID) - 1e-9);
    }
}

#[test]
fn min_degree_is_monotone_on_lattice() {
    let kappas = [4.0, 10.0, 117.6];
    let epss = [0.5, 0.2, 0.1, 0.01];
    let d: Vec<Vec<usize>> = kappas
        .iter()
        .map(|&k| {
            epss.iter()
                .map(|&e| {
                    mang_min_degree(&ApproxSpec::new(k, e).unwrap())
                        .unwrap()
                        .degree()
                })
                .collect()
        })
        .collect();
    for row in &d {
        assert!(row.windows(2).all(|w| w[0] <= w[1]), "{d:?}");
    }
    for j in 0..epss.len() {
        assert!(d.windows(2).all(|w| w[0][j] <= w[1][j]), "{d:?}");
    }
}
