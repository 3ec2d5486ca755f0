//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use specpoly::basepoly::{mang_min_degree, remez_min_degree, ApproxSpec};
use specpoly::bench::{run_invariants, run_table, CsvTable, ExperimentConfig, ExperimentId};
use specpoly::chebpoly::{Label, OddChebyshevPoly};
use specpoly::numerics::pinv_solve;
use specpoly::spectral::{merge_duplicates, pure_spectral, spectral_correct_at, DEFAULT_MERGE_TOL};

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            passed: true,
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, note: String) {
        self.passed &= ok;
        self.notes
            .push(format!("{}{note}", if ok { "" } else { "!" }));
    }
}

fn within_rel(x: f64, target: f64, rel: f64) -> bool {
    ((x - target) / target).abs() <= rel
}

/// `d` equals `target` or one odd step away.
fn within_odd_step(d: usize, target: usize) -> bool {
    d.abs_diff(target) <= 2
}

fn table(n: u8) -> CsvTable {
    run_table(&ExperimentConfig::new(ExperimentId::Table(n))).expect("table runs")
}

fn get(t: &CsvTable, keys: &[(&str, &str)], col: &str) -> f64 {
    let r = t
        .find(keys)
        .unwrap_or_else(|| panic!("{} has no row {keys:?}", t.name));
    t.value(r, col)
        .unwrap_or_else(|| panic!("{} row {keys:?} has no {col}", t.name))
}

fn degree_reproduction() -> Outcome {
    let mut o = Outcome::new();
    let spec = ApproxSpec::new(10.0, 0.2).unwrap();
    let r = remez_min_degree(&spec).unwrap().degree();
    let m = mang_min_degree(&spec).unwrap().degree();
    o.require(within_odd_step(r, 23), format!("remez d={r} (23)"));
    o.require(within_odd_step(m, 27), format!("mang d={m} (27)"));
    o
}

fn table2() -> Outcome {
    let mut o = Outcome::new();
    let t = table(2);
    let eps = ["0.2", "0.1", "0.01"];
    let base = [1.92e-1, 9.27e-2, 9.05e-3];
    let all = [1.58e-1, 1.51e-2, 2.71e-3];
    for i in 0..3 {
        let b = get(
            &t,
            &[("method", "mang"), ("eps", eps[i])],
            "eig_residual_all",
        );
        o.require(
            within_rel(b, base[i], 0.1),
            format!("mang eps={} {b:.3e}", eps[i]),
        );
        let key = [("method", "spectral-mang"), ("eps", eps[i])];
        let c = get(&t, &key, "eig_residual_corrected");
        o.require(c <= 1e-12, format!("corrected {c:.1e}"));
        let a = get(&t, &key, "eig_residual_all");
        let ratio = a / all[i];
        o.require((0.5..=2.0).contains(&ratio), format!("all-N {a:.3e}"));
    }
    o
}

fn table3() -> Outcome {
    let mut o = Outcome::new();
    let t = table(3);
    let sc = [("load", "uniform"), ("method", "spectral-mang")];
    let f = get(&t, &sc, "fidelity");
    o.require(f >= 1.0 - 1e-6, format!("F={f:.10}"));
    let c = get(&t, &sc, "compliance_rel_error");
    o.require(c <= 1e-3, format!("C err {c:.1e}"));
    let tau = get(&t, &sc, "tau");
    o.require(
        within_rel(tau, 142.8, 5e-3),
        format!("tau={tau:.2} (142.8)"),
    );
    let d = get(&t, &sc, "d") as usize;
    o.require(within_odd_step(d, 177), format!("d={d} (177)"));
    let tight = get(
        &t,
        &[("load", "uniform"), ("method", "mang"), ("eps", "0.001")],
        "d",
    );
    let ratio = tight / d as f64;
    o.require(ratio >= 5.2, format!("depth ratio {ratio:.2}"));
    let pf = get(
        &t,
        &[("load", "point"), ("method", "mang"), ("eps", "0.5")],
        "fidelity",
    );
    o.require(
        (pf - 0.991581).abs() <= 1e-3,
        format!("point-load base F={pf:.6} (0.991581)"),
    );
    o
}

fn table1() -> Outcome {
    let mut o = Outcome::new();
    let t = table(1);
    let rows: Vec<usize> = (0..t.rows.len())
        .filter(|&r| t.cell(r, "m") == Some("3"))
        .collect();
    let col = |c: &str| {
        rows.iter()
            .map(|&r| t.value(r, c).expect("numeric"))
            .collect::<Vec<_>>()
    };
    let tk = col("tau_over_kappa");
    let p = col("p_succ");
    let f = col("fidelity");
    o.require(rows.len() == 5, format!("{} rows", rows.len()));
    let tk_mono = tk.windows(2).all(|w| w[1] <= w[0]);
    let tk_last = *tk.last().unwrap();
    o.require(
        tk_mono && (tk_last - 1.0).abs() <= 0.005,
        format!("tau/kappa {tk:.3?}"),
    );
    let p_mono = p.windows(2).all(|w| w[1] >= w[0]);
    let p_last = *p.last().unwrap();
    o.require(p_mono, format!("P non-decreasing {p:.3?}"));
    o.require(
        (p_last - 0.979).abs() <= 0.02,
        format!("final P={p_last:.4} (0.979)"),
    );
    let f_min = f.iter().copied().fold(f64::INFINITY, f64::min);
    o.require(f_min >= 1.0 - 1e-9, format!("min F={f_min:.12}"));
    o
}

fn table4() -> Outcome {
    let mut o = Outcome::new();
    let t = table(4);
    let eta = |e: &str, c: &str| get(&t, &[("eta", e)], c);
    let f1 = eta("0.01", "fidelity_mean");
    o.require(f1 >= 0.999999, format!("eta=1e-2 F={f1:.8}"));
    let c1 = eta("0.01", "compliance_rel_error_mean");
    o.require(c1 <= 1e-2, format!("eta=1e-2 C err {c1:.2e}"));
    let f2 = eta("0.1", "fidelity_mean");
    o.require(f2 >= 0.9995, format!("eta=1e-1 F={f2:.6}"));
    let c2 = eta("0.1", "compliance_rel_error_mean");
    o.require(c2 <= 5e-2, format!("eta=1e-1 C err {c2:.2e}"));
    let p: Vec<f64> = ["0", "0.01", "0.1"]
        .iter()
        .map(|e| eta(e, "p_succ_mean"))
        .collect();
    let spread = p.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - p.iter().copied().fold(f64::INFINITY, f64::min);
    o.require(spread <= 1e-3, format!("P spread {spread:.2e}"));
    o
}

fn table5() -> Outcome {
    let mut o = Outcome::new();
    let t = table(5);
    let k = [("k", "32")];
    let k_eff = t
        .cell(t.find(&k).expect("K=32 row"), "k_eff")
        .unwrap_or_default()
        .to_string();
    o.require(k_eff == "18", format!("K_eff={k_eff}"));
    let f = get(&t, &k, "fidelity");
    o.require(f >= 0.99999, format!("F={f:.8}"));
    let peak = get(&t, &k, "max_value");
    o.require(within_rel(peak, 0.1044, 5e-3), format!("peak {peak:.5}"));
    let classical = get(&t, &k, "classical_peak");
    o.require(
        within_rel(classical, 0.1044, 5e-3),
        format!("classical {classical:.5}"),
    );
    o
}

fn property_suite() -> Outcome {
    let mut o = Outcome::new();
    for c in run_invariants() {
        o.require(c.passed, format!("{} {}", c.name, c.detail));
    }
    o
}

fn oracles() -> Outcome {
    let mut o = Outcome::new();
    let p0 = OddChebyshevPoly::new(vec![1.0], 0.5, Label::External).unwrap();
    let (p, _) = spectral_correct_at(&p0, &[0.5], DEFAULT_MERGE_TOL).unwrap();
    let e = (p.coeffs()[0] - 4.0).abs();
    o.require(
        p.n_terms() == 1 && e <= 1e-12,
        format!("T1 at 0.5 -> {:?}", p.coeffs()),
    );

    let m = specpoly::numerics::DenseMatrix::from_rows(&[vec![0.25, -0.5]]).unwrap();
    let x = pinv_solve(&m, &[1.0], 1e-12).unwrap();
    let s = merge_duplicates(&[0.5], DEFAULT_MERGE_TOL).unwrap();
    let q = pure_spectral(&s, 2.0).unwrap();
    for (name, v) in [("pinv", x.as_slice()), ("pure spectral", q.coeffs())] {
        let e = (v[0] - 0.8).abs().max((v[1] + 1.6).abs());
        o.require(v.len() == 2 && e <= 1e-12, format!("{name} {v:?}"));
    }
    o
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "1 degree reproduction",
            degree_reproduction,
            Duration::from_secs(5),
        ),
        ("2 table 2", table2, Duration::from_secs(30)),
        ("3 table 3", table3, Duration::from_secs(120)),
        ("4 table 1 trend", table1, Duration::from_secs(60)),
        ("5 table 4 statistics", table4, Duration::from_secs(120)),
        ("6 table 5", table5, Duration::from_secs(180)),
        ("7 property suite", property_suite, Duration::from_secs(60)),
        ("8 oracle equivalence", oracles, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let mut o = f();
        let took = start.elapsed();
        o.require(
            took <= limit,
            format!("{:.2}s (limit {}s)", took.as_secs_f64(), limit.as_secs()),
        );
        failed += usize::from(!o.passed);
        println!(
            "{} criterion {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.notes.join("; ")
        );
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
