use rayon::prelude::*;

use super::{emulation_tag, mean_std, num, CsvTable, ExperimentConfig, ExperimentId};
use crate::basepoly::{default_theta_grid, mang, mang_min_degree, ApproxSpec};
use crate::chebpoly::OddChebyshevPoly;
use crate::error::{Error, Result};
use crate::numerics::dot;
use crate::operators::{perturb_spectrum, LoadVector, OperatorModel};
use crate::qsvt::{classical_solution, emulate, metrics, metrics_with_targets};
use crate::spectral::{eig_residual, pure_spectral, spectral_correct, Subset};

/// Runs one of the tables. A failing row is kept as an error row.
pub fn run_table(cfg: &ExperimentConfig) -> Result<CsvTable> {
    cfg.validate()?;
    match cfg.id {
        ExperimentId::Table(1) => table1(cfg),
        ExperimentId::Table(2) => table2(cfg),
        ExperimentId::Table(3) => table3(cfg),
        ExperimentId::Table(4) => table4(cfg),
        ExperimentId::Table(5) => table5(cfg),
        other => Err(Error::invalid(format!("{other} is not a table"))),
    }
}

/// Keys, values and error column of one row, padded to the header width.
fn row(keys: Vec<String>, values: Result<Vec<String>>, width: usize) -> Vec<String> {
    let mut r = keys;
    match values {
        Ok(v) => {
            r.extend(v);
            r.push(String::new());
        }
        Err(e) => {
            log::error!("row {:?} failed: {e}", r);
            r.resize(width - 1, String::new());
            r.push(e.to_string());
        }
    }
    r
}

/// Base polynomial with the configured fixed degree, or the minimal one.
fn base_mang(a: f64, eps: f64, degree: Option<usize>) -> Result<OddChebyshevPoly> {
    let spec = ApproxSpec::from_lower_edge(a, eps)?;
    match degree {
        Some(d) => {
            let n = d.div_ceil(2);
            mang(&spec, n, default_theta_grid(n))
        }
        None => mang_min_degree(&spec),
    }
}

fn table1(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let header = [
        "m",
        "N",
        "n_factor",
        "d",
        "tau",
        "tau_over_kappa",
        "p_succ",
        "fidelity",
        "compliance_rel_error",
        "eig_residual_all",
        "emulation",
        "error",
    ];
    let mut t = CsvTable::new("table1", &header);
    let jobs: Vec<(usize, f64)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| cfg.n_factors.iter().map(move |&f| (n, f)))
        .collect();
    let rows: Vec<Vec<String>> = jobs
        .par_iter()
        .map(|&(n, nf)| {
            let m = if n.is_power_of_two() {
                n.trailing_zeros().to_string()
            } else {
                String::new()
            };
            let keys = vec![m, n.to_string(), nf.to_string()];
            let values = (|| {
                let op = OperatorModel::poisson1d(n, cfg.normalization)?;
                let p = pure_spectral(&op.spectrum(cfg.merge_tol)?, nf)?;
                let b = LoadVector::uniform(n)?;
                let q = metrics(&p, &op, &b)?;
                Ok(vec![
                    q.degree.to_string(),
                    num(q.tau),
                    num(q.tau * op.lower_edge()),
                    num(q.success_probability),
                    num(q.fidelity),
                    num(q.compliance_rel_error),
                    num(q.eig_residual_all),
                    emulation_tag(),
                ])
            })();
            row(keys, values, header.len())
        })
        .collect();
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn table2(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let header = [
        "N",
        "kappa",
        "method",
        "eps",
        "k",
        "d",
        "eig_residual_corrected",
        "eig_residual_all",
        "error",
    ];
    let mut t = CsvTable::new("table2", &header);
    let n = cfg.first(&cfg.sizes, "grid size")?;
    let k = cfg.first(&cfg.ks, "K")?;
    let op = OperatorModel::poisson1d(n, cfg.normalization)?;
    let spectrum = op.spectrum(cfg.merge_tol)?;
    let bases: Vec<Result<OddChebyshevPoly>> = cfg
        .eps
        .par_iter()
        .map(|&eps| base_mang(op.lower_edge(), eps, cfg.degree))
        .collect();
    for (method, corrected) in [("mang", false), ("spectral-mang", true)] {
        for (&eps, base) in cfg.eps.iter().zip(&bases) {
            let keys = vec![
                n.to_string(),
                num(op.kappa()),
                method.to_string(),
                eps.to_string(),
                if corrected {
                    k.to_string()
                } else {
                    String::new()
                },
            ];
            let values = (|| {
                let p0 = base.as_ref().map_err(|e| Error::invalid(e.to_string()))?;
                let p = if corrected {
                    spectral_correct(p0, &spectrum, k)?.0
                } else {
                    p0.clone()
                };
                Ok(vec![
                    p.degree().to_string(),
                    num(eig_residual(&p, &spectrum, Subset::Smallest(k))),
                    num(eig_residual(&p, &spectrum, Subset::All)),
                ])
            })();
            t.push(row(keys, values, header.len()));
        }
    }
    Ok(t)
}

fn table3(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let header = [
        "load",
        "method",
        "eps",
        "k",
        "d",
        "fidelity",
        "compliance_rel_error",
        "p_succ",
        "tau",
        "eig_residual_all",
        "emulation",
        "error",
    ];
    let mut t = CsvTable::new("table3", &header);
    let n = cfg.first(&cfg.sizes, "grid size")?;
    let k = cfg.first(&cfg.ks, "K")?;
    let op = OperatorModel::poisson1d(n, cfg.normalization)?;
    let spectrum = op.spectrum(cfg.merge_tol)?;

    // Base rows for every ε, then the corrected loose base (first ε).
    let mut methods: Vec<(String, f64, Option<usize>)> = cfg
        .eps
        .iter()
        .map(|&e| ("mang".to_string(), e, None))
        .collect();
    methods.push(("spectral-mang".to_string(), cfg.eps[0], Some(k)));
    let bases: Vec<Result<OddChebyshevPoly>> = cfg
        .eps
        .par_iter()
        .map(|&eps| base_mang(op.lower_edge(), eps, cfg.degree))
        .collect();
    let polys: Vec<Result<OddChebyshevPoly>> = methods
        .par_iter()
        .map(|(_, eps, kk)| {
            let i = cfg.eps.iter().position(|e| e == eps).expect("eps listed");
            let p0 = bases[i]
                .as_ref()
                .map_err(|e| Error::invalid(e.to_string()))?;
            match kk {
                Some(kk) => Ok(spectral_correct(p0, &spectrum, *kk)?.0),
                None => Ok(p0.clone()),
            }
        })
        .collect();

    let loads = [LoadVector::uniform(n)?, LoadVector::point(n)?];
    for b in &loads {
        for ((method, eps, kk), p) in methods.iter().zip(&polys) {
            let keys = vec![
                b.kind().to_string(),
                method.clone(),
                eps.to_string(),
                kk.map(|v| v.to_string()).unwrap_or_default(),
            ];
            let values = (|| {
                let p = p.as_ref().map_err(|e| Error::invalid(e.to_string()))?;
                let q = metrics(p, &op, b)?;
                Ok(vec![
                    q.degree.to_string(),
                    num(q.fidelity),
                    num(q.compliance_rel_error),
                    num(q.success_probability),
                    num(q.tau),
                    num(q.eig_residual_all),
                    emulation_tag(),
                ])
            })();
            t.push(row(keys, values, header.len()));
        }
    }
    Ok(t)
}

fn table4(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let header = [
        "eta",
        "trials",
        "seed",
        "k",
        "d",
        "fidelity_mean",
        "fidelity_std",
        "compliance_rel_error_mean",
        "compliance_rel_error_std",
        "p_succ_mean",
        "p_succ_std",
        "tau_mean",
        "emulation",
        "error",
    ];
    let mut t = CsvTable::new("table4", &header);
    let n = cfg.first(&cfg.sizes, "grid size")?;
    let k = cfg.first(&cfg.ks, "K")?;
    let eps = cfg.first(&cfg.eps, "eps")?;
    let op = OperatorModel::poisson1d(n, cfg.normalization)?;
    let spectrum = op.spectrum(cfg.merge_tol)?;
    let b = LoadVector::uniform(n)?;
    let base = base_mang(op.lower_edge(), eps, cfg.degree);

    for &eta in &cfg.etas {
        let keys = vec![
            eta.to_string(),
            cfg.trials.to_string(),
            cfg.seed.to_string(),
            k.to_string(),
        ];
        let values = (|| {
            let p0 = base.as_ref().map_err(|e| Error::invalid(e.to_string()))?;
            let trials: Vec<Result<(f64, f64, f64, f64)>> = (0..cfg.trials as u64)
                .into_par_iter()
                .map(|i| {
                    let s = perturb_spectrum(&spectrum, eta, cfg.seed.wrapping_add(i))?;
                    let (p, _) = spectral_correct(p0, &s, k.min(s.len()))?;
                    let q = metrics(&p, &op, &b)?;
                    Ok((
                        q.fidelity,
                        q.compliance_rel_error,
                        q.success_probability,
                        q.tau,
                    ))
                })
                .collect();
            let trials = trials.into_iter().collect::<Result<Vec<_>>>()?;
            let col =
                |f: fn(&(f64, f64, f64, f64)) -> f64| trials.iter().map(f).collect::<Vec<_>>();
            let (fm, fs) = mean_std(&col(|r| r.0));
            let (em, es) = mean_std(&col(|r| r.1));
            let (pm, ps) = mean_std(&col(|r| r.2));
            let (tm, _) = mean_std(&col(|r| r.3));
            Ok(vec![
                p0.degree().to_string(),
                num(fm),
                num(fs),
                num(em),
                num(es),
                num(pm),
                num(ps),
                num(tm),
                emulation_tag(),
            ])
        })();
        t.push(row(keys, values, header.len()));
    }
    Ok(t)
}

fn table5(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let header = [
        "k",
        "k_eff",
        "d",
        "fidelity",
        "max_value",
        "peak_error_pct",
        "classical_peak",
        "p_succ",
        "tau",
        "eig_residual_corrected",
        "emulation",
        "error",
    ];
    let mut t = CsvTable::new("table5", &header);
    let n1 = cfg.first(&cfg.sizes, "grid size")?;
    let eps = cfg.first(&cfg.eps, "eps")?;
    let op = OperatorModel::poisson2d(n1, cfg.normalization)?;
    let spectrum = op.spectrum(cfg.merge_tol)?;
    let b = LoadVector::uniform(op.eigenvalues().len())?;
    let p0 = base_mang(op.lower_edge(), eps, cfg.degree)?;
    let u = classical_solution(&op, &b)?;
    let u_norm = crate::numerics::norm2(&u);
    let peak = u
        .iter()
        .map(|v| v / u_norm)
        .fold(f64::NEG_INFINITY, f64::max);

    let rows: Vec<Vec<String>> = cfg
        .ks
        .par_iter()
        .map(|&k| {
            let values = (|| {
                let (p, k_eff) = if k == 0 {
                    (p0.clone(), String::new())
                } else {
                    let (p, rep) = spectral_correct(&p0, &spectrum, k)?;
                    (p, rep.k_eff().to_string())
                };
                let q = metrics_with_targets(&p, &op, &b, (k > 0).then_some(k))?;
                let mut uq = emulate(&p, &op, &b)?;
                if dot(&uq, &u) < 0.0 {
                    uq.iter_mut().for_each(|v| *v = -*v);
                }
                let max_value = uq.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Ok(vec![
                    k_eff,
                    q.degree.to_string(),
                    num(q.fidelity),
                    num(max_value),
                    num(100.0 * (max_value - peak) / peak),
                    num(peak),
                    num(q.success_probability),
                    num(q.tau),
                    q.eig_residual_corrected.map(num).unwrap_or_default(),
                    emulation_tag(),
                ])
            })();
            row(vec![k.to_string()], values, header.len())
        })
        .collect();
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}
