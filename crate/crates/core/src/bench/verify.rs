use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::basepoly::{mang_min_degree, remez_min_degree, ApproxSpec};
use crate::chebpoly::{compute_tau, uniform_grid, Label, OddChebyshevPoly, DEFAULT_GRID};
use crate::error::Result;
use crate::numerics::{
    clenshaw_matrix_apply, norm2, pinv_solve, svd, DenseMatrix, DEFAULT_REL_CUTOFF,
};
use crate::operators::{LoadVector, Normalization, OperatorModel};
use crate::qsvt::compliance_identity_check;
use crate::spectral::{
    merge_duplicates, pure_spectral, spectral_correct, spectral_correct_at, DEFAULT_MERGE_TOL,
};

/// Outcome of one invariant.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, tol: f64) -> Check {
    Check {
        name,
        passed: worst <= tol,
        detail: format!("worst {worst:.3e} (tolerance {tol:.0e})"),
    }
}

fn run(name: &'static str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check {
        name,
        passed: false,
        detail: format!("error: {e}"),
    })
}

/// Base polynomials and targets shared by the correction checks.
struct Fixture {
    cases: Vec<(OddChebyshevPoly, Vec<f64>)>,
}

fn fixture() -> Result<Fixture> {
    let spec = ApproxSpec::new(10.0, 0.2)?;
    let remez = remez_min_degree(&spec)?;
    let mang = mang_min_degree(&spec)?;
    let n4 = OperatorModel::poisson1d(4, Normalization::MaxEigenvalue)?;
    let m4 = mang_min_degree(&ApproxSpec::from_lower_edge(n4.lower_edge(), 0.1)?)?;
    let n16 = OperatorModel::poisson1d(16, Normalization::StencilBound)?;
    let m16 = mang_min_degree(&ApproxSpec::from_lower_edge(n16.lower_edge(), 0.5)?)?;
    let mut cases = Vec::new();
    for t in [[0.1, 0.5, 1.0], [0.1, 0.15, 1.0], [0.1, 0.1, 1.0]] {
        cases.push((remez.clone(), t.to_vec()));
        cases.push((mang.clone(), t.to_vec()));
    }
    cases.push((m4, n4.eigenvalues().to_vec()));
    cases.push((m16, n16.eigenvalues().to_vec()));
    Ok(Fixture { cases })
}

/// Runs the invariant suite. Every check reports its worst observed value.
pub fn run_invariants() -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha20Rng::seed_from_u64(2024);

    out.push(run("parity", || {
        let p = remez_min_degree(&ApproxSpec::new(10.0, 0.2)?)?;
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-1.0..=1.0);
            worst = worst.max((p.eval(-x)? + p.eval(x)?).abs());
        }
        Ok(check("parity", worst, 0.0))
    }));

    out.push(run("clenshaw-vs-cosine", || {
        let coeffs: Vec<f64> = (0..501).map(|j| 1.0 / (j + 1) as f64).collect();
        let p = OddChebyshevPoly::new(coeffs.clone(), 0.01, Label::External)?;
        let mut worst: f64 = 0.0;
        for x in uniform_grid(-1.0, 1.0, 997) {
            let th = x.acos();
            let direct: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c * ((2 * j + 1) as f64 * th).cos())
                .sum();
            worst = worst.max((p.eval(x)? - direct).abs());
        }
        Ok(check("clenshaw-vs-cosine", worst, 1e-12))
    }));

    out.push(run("tau-scaling", || {
        let p = mang_min_degree(&ApproxSpec::new(10.0, 0.2)?)?;
        let t = compute_tau(&p, DEFAULT_GRID);
        let worst = (compute_tau(&p.scaled(3.5), DEFAULT_GRID) - 3.5 * t).abs() / t;
        Ok(check("tau-scaling", worst, 1e-12))
    }));

    let fx = fixture();
    out.push(run("exact-interpolation", || {
        let fx = fx.as_ref().map_err(clone_err)?;
        let mut worst: f64 = 0.0;
        for (p0, t) in &fx.cases {
            let (p, r) = spectral_correct_at(p0, t, DEFAULT_MERGE_TOL)?;
            for &l in &r.targets {
                worst = worst.max(p.residual(l).abs());
            }
        }
        Ok(check("exact-interpolation", worst, 1e-12))
    }));

    out.push(run("degree-preservation", || {
        let fx = fx.as_ref().map_err(clone_err)?;
        let mut bad = 0;
        for (p0, t) in &fx.cases {
            let (p, _) = spectral_correct_at(p0, t, DEFAULT_MERGE_TOL)?;
            bad += usize::from(p.n_terms() != p0.n_terms());
        }
        Ok(check("degree-preservation", bad as f64, 0.0))
    }));

    out.push(run("idempotence", || {
        let fx = fx.as_ref().map_err(clone_err)?;
        let mut worst: f64 = 0.0;
        for (p0, t) in &fx.cases {
            let (p1, _) = spectral_correct_at(p0, t, DEFAULT_MERGE_TOL)?;
            let (p2, _) = spectral_correct_at(&p1, t, DEFAULT_MERGE_TOL)?;
            for (a, b) in p1.coeffs().iter().zip(p2.coeffs()) {
                worst = worst.max((a - b).abs());
            }
        }
        Ok(check("idempotence", worst, 1e-12))
    }));

    out.push(run("merge-invariance", || {
        let fx = fx.as_ref().map_err(clone_err)?;
        let mut worst: f64 = 0.0;
        for (p0, _) in fx.cases.iter().take(2) {
            let (a, _) = spectral_correct_at(p0, &[0.1, 0.1, 1.0], DEFAULT_MERGE_TOL)?;
            let (b, _) = spectral_correct_at(p0, &[0.1, 1.0], DEFAULT_MERGE_TOL)?;
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                worst = worst.max((x - y).abs());
            }
        }
        Ok(check("merge-invariance", worst, 1e-12))
    }));

    out.push(run("residual-bound", || {
        let fx = fx.as_ref().map_err(clone_err)?;
        let mut worst = f64::NEG_INFINITY;
        for (p0, t) in &fx.cases {
            let (p, r) = spectral_correct_at(p0, t, DEFAULT_MERGE_TOL)?;
            for x in uniform_grid(p.a(), 1.0, DEFAULT_GRID) {
                worst = worst.max(p.residual(x).abs() - r.bound_at(x));
            }
        }
        Ok(Check {
            name: "residual-bound",
            passed: worst <= 1e-12,
            detail: format!("max(observed - bound) {worst:.3e}"),
        })
    }));

    out.push(run("compliance-identity", || {
        let fx = fx.as_ref().map_err(clone_err)?;
        let mut worst: f64 = 0.0;
        let ops = [
            OperatorModel::poisson1d(4, Normalization::MaxEigenvalue)?,
            OperatorModel::poisson1d(16, Normalization::StencilBound)?,
        ];
        for ((p0, _), op) in fx.cases.iter().skip(6).zip(&ops) {
            let s = op.spectrum(DEFAULT_MERGE_TOL)?;
            let (p, _) = spectral_correct(p0, &s, s.len())?;
            for b in [LoadVector::uniform(s.len())?, LoadVector::point(s.len())?] {
                worst = worst.max(compliance_identity_check(p0, op, &b)?);
                worst = worst.max(compliance_identity_check(&p, op, &b)?);
            }
        }
        Ok(check("compliance-identity", worst, 1e-10))
    }));

    out.push(run("min-norm", || {
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..50 {
            let (rows, cols) = (rng.gen_range(1..5), rng.gen_range(5..9));
            let m = DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0));
            let rhs: Vec<f64> = (0..rows).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = pinv_solve(&m, &rhs, DEFAULT_REL_CUTOFF)?;
            let dec = svd(&m.transpose())?;
            // Null-space directions of m are orthogonal to its row space.
            for _ in 0..20 {
                let mut z: Vec<f64> = (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
                for l in 0..rows {
                    let u = dec.u.column(l);
                    let c: f64 = u.iter().zip(&z).map(|(a, b)| a * b).sum();
                    z.iter_mut().zip(&u).for_each(|(zi, ui)| *zi -= c * ui);
                }
                let other: Vec<f64> = x.iter().zip(&z).map(|(a, b)| a + b).collect();
                worst = worst.max(norm2(&x) - norm2(&other));
            }
        }
        Ok(Check {
            name: "min-norm",
            passed: worst <= 1e-10,
            detail: format!("max(|x| - |x'|) {worst:.3e}"),
        })
    }));

    out.push(run("clenshaw-vs-eigen", || {
        let mut worst: f64 = 0.0;
        let p = mang_min_degree(&ApproxSpec::new(10.0, 0.1)?)?;
        for op in [
            OperatorModel::poisson1d(4, Normalization::MaxEigenvalue)?,
            OperatorModel::poisson1d(16, Normalization::StencilBound)?,
            OperatorModel::poisson2d(6, Normalization::MaxEigenvalue)?,
        ] {
            let n = op.eigenvalues().len();
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y = clenshaw_matrix_apply(p.coeffs(), &op, &b)?;
            let z = op.apply_function(&b, |l| p.value(l))?;
            let diff: Vec<f64> = y.iter().zip(&z).map(|(a, b)| a - b).collect();
            worst = worst.max(norm2(&diff) / norm2(&z));
        }
        Ok(check("clenshaw-vs-eigen", worst, 1e-10))
    }));

    out.push(run("pure-spectral-tau", || {
        let s = merge_duplicates(&[0.1, 0.5, 1.0], DEFAULT_MERGE_TOL)?;
        let taus = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&f| pure_spectral(&s, f).map(|p| p.tau_or_compute()))
            .collect::<Result<Vec<_>>>()?;
        let worst = taus
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Check {
            name: "pure-spectral-tau",
            passed: worst <= 1e-9,
            detail: format!("tau {taus:.4?}"),
        })
    }));

    out
}

fn clone_err(e: &crate::error::Error) -> crate::error::Error {
    crate::error::Error::InvalidInput(format!("fixture failed: {e}"))
}
