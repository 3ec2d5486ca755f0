use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::{run_experiment, run_invariants, ExperimentConfig, ExperimentId};
use crate::basepoly::{
    default_theta_grid, mang, mang_min_degree, remez, remez_min_degree, ApproxSpec,
};
use crate::chebpoly::{from_document, to_document, OddChebyshevPoly};
use crate::error::{Error, Result};
use crate::operators::{
    spectrum_document, spectrum_from_document, LoadKind, LoadVector, Normalization, OperatorKind,
    OperatorModel, SpectrumDocument,
};
use crate::qsvt::{metrics_document, metrics_with_targets};
use crate::spectral::{
    correction_report_document, pure_spectral, spectral_correct, spectral_correct_at,
    DEFAULT_MERGE_TOL,
};

/// Environment variable overriding the output directory of `reproduce`.
pub const OUT_DIR_ENV: &str = "SPECPOLY_OUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "specpoly",
    version,
    about = "Spectrally corrected polynomial approximations to 1/x"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a base polynomial (Remez, Mang, or pure spectral).
    Base(BaseArgs),
    /// Export the normalized spectrum of a model operator.
    Spectrum(SpectrumArgs),
    /// Correct a polynomial at known eigenvalues.
    Correct(CorrectArgs),
    /// Emulate the QSVT output of a polynomial and report its metrics.
    Qsvt(QsvtArgs),
    /// Regenerate a table or figure dataset as CSV.
    Reproduce(ReproduceArgs),
    /// Run the invariant suite.
    Verify,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Remez,
    Mang,
    Spectral,
}

#[derive(Args, Debug)]
struct BaseArgs {
    #[arg(long, value_enum)]
    method: Method,
    /// Condition number; the interval is [1/kappa, 1].
    #[arg(long, required_unless_present_any = ["lower_edge", "spectrum"])]
    kappa: Option<f64>,
    /// Lower edge a of the interval, instead of --kappa.
    #[arg(long, conflicts_with = "kappa")]
    lower_edge: Option<f64>,
    /// Target accuracy (Remez and Mang).
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Fixed odd degree instead of the minimal one for --eps.
    #[arg(long)]
    degree: Option<usize>,
    /// Number of theta samples for Mang.
    #[arg(long)]
    theta_grid: Option<usize>,
    /// Spectrum document (pure spectral method).
    #[arg(long)]
    spectrum: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    n_factor: f64,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OperatorArg {
    Poisson1d,
    Poisson2d,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormalizationArg {
    MaxEigenvalue,
    StencilBound,
}

impl From<NormalizationArg> for Normalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::MaxEigenvalue => Normalization::MaxEigenvalue,
            NormalizationArg::StencilBound => Normalization::StencilBound,
        }
    }
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long, value_enum, default_value = "poisson1d")]
    operator: OperatorArg,
    /// Interior nodes (1D) or nodes per side (2D).
    #[arg(long)]
    size: usize,
    #[arg(long, value_enum, default_value = "max-eigenvalue")]
    normalization: NormalizationArg,
    #[arg(long, default_value_t = DEFAULT_MERGE_TOL)]
    merge_tol: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CorrectArgs {
    /// Polynomial document to correct.
    #[arg(long)]
    poly: PathBuf,
    /// Spectrum document; the K smallest eigenvalues are targeted.
    #[arg(long, required_unless_present = "targets")]
    spectrum: Option<PathBuf>,
    #[arg(long, requires = "spectrum")]
    k: Option<usize>,
    /// Explicit comma-separated targets instead of a spectrum.
    #[arg(long, value_delimiter = ',', conflicts_with = "spectrum")]
    targets: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_MERGE_TOL)]
    merge_tol: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Where to write the correction report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LoadArg {
    Uniform,
    Point,
}

#[derive(Args, Debug)]
struct QsvtArgs {
    #[arg(long)]
    poly: PathBuf,
    /// Spectrum document naming the operator (kind, size, normalization).
    #[arg(long, required_unless_present = "operator")]
    spectrum: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "spectrum", requires = "size")]
    operator: Option<OperatorArg>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long, value_enum, default_value = "max-eigenvalue")]
    normalization: NormalizationArg,
    #[arg(long, value_enum, default_value = "uniform")]
    load: LoadArg,
    /// Also report the residual over the K smallest eigenvalues.
    #[arg(long)]
    k: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "experiment")]
struct Which {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    table: Option<u8>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
    figure: Option<u8>,
    /// Every table and figure.
    #[arg(long)]
    all: bool,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    #[command(flatten)]
    which: Which,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Output directory (default: $SPECPOLY_OUT_DIR, else ./results).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Parses `argv`, runs the subcommand and returns the process exit status.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Base(a) => base(a).map(|_| 0),
        Command::Spectrum(a) => spectrum(a).map(|_| 0),
        Command::Correct(a) => correct(a).map(|_| 0),
        Command::Qsvt(a) => qsvt(a).map(|_| 0),
        Command::Reproduce(a) => reproduce(a).map(|_| 0),
        Command::Verify => Ok(verify()),
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn read_spectrum(path: &Path) -> Result<SpectrumDocument> {
    spectrum_from_document(&read(path)?)
}

fn base(a: BaseArgs) -> Result<()> {
    let p: OddChebyshevPoly = match a.method {
        Method::Spectral => {
            let path = a
                .spectrum
                .as_deref()
                .ok_or_else(|| Error::invalid("--method spectral needs --spectrum"))?;
            pure_spectral(&read_spectrum(path)?.spectrum, a.n_factor)?
        }
        m => {
            let spec = match (a.kappa, a.lower_edge) {
                (Some(k), _) => ApproxSpec::new(k, a.eps)?,
                (None, Some(lo)) => ApproxSpec::from_lower_edge(lo, a.eps)?,
                (None, None) => return Err(Error::invalid("--kappa or --lower-edge is required")),
            };
            let n = a.degree.map(|d| {
                if d % 2 == 0 {
                    Err(Error::invalid(format!("degree must be odd, got {d}")))
                } else {
                    Ok(d.div_ceil(2))
                }
            });
            match (m, n.transpose()?) {
                (Method::Remez, Some(n)) => remez(&spec, n)?.0,
                (Method::Remez, None) => remez_min_degree(&spec)?,
                (_, Some(n)) => mang(
                    &spec,
                    n,
                    a.theta_grid.unwrap_or_else(|| default_theta_grid(n)),
                )?,
                (_, None) => mang_min_degree(&spec)?,
            }
        }
    };
    emit(&to_document(&p), a.output.as_deref())
}

fn build_operator(kind: OperatorArg, size: usize, norm: Normalization) -> Result<OperatorModel> {
    match kind {
        OperatorArg::Poisson1d => OperatorModel::poisson1d(size, norm),
        OperatorArg::Poisson2d => OperatorModel::poisson2d(size, norm),
    }
}

fn spectrum(a: SpectrumArgs) -> Result<()> {
    let op = build_operator(a.operator, a.size, a.normalization.into())?;
    emit(&spectrum_document(&op, a.merge_tol), a.output.as_deref())
}

fn correct(a: CorrectArgs) -> Result<()> {
    let p0 = from_document(&read(&a.poly)?)?;
    let (p, report) = match (&a.spectrum, &a.targets) {
        (Some(path), _) => {
            let s = read_spectrum(path)?.spectrum;
            let k = a.k.unwrap_or(s.len());
            spectral_correct(&p0, &s, k)?
        }
        (None, Some(t)) => spectral_correct_at(&p0, t, a.merge_tol)?,
        (None, None) => return Err(Error::invalid("--spectrum or --targets is required")),
    };
    if let Some(path) = &a.report {
        std::fs::write(path, correction_report_document(&report, p.a()))?;
    }
    emit(&to_document(&p), a.output.as_deref())
}

fn qsvt(a: QsvtArgs) -> Result<()> {
    let p = from_document(&read(&a.poly)?)?;
    let op = match (&a.spectrum, a.operator) {
        (Some(path), _) => {
            let doc = read_spectrum(path)?;
            let size = doc
                .size
                .ok_or_else(|| Error::invalid("spectrum document has no `size`"))?;
            let norm = doc.normalization.unwrap_or_default();
            match doc.kind {
                Some(OperatorKind::Poisson1d) => OperatorModel::poisson1d(size, norm)?,
                Some(OperatorKind::Poisson2d) => OperatorModel::poisson2d(size, norm)?,
                _ => OperatorModel::diagonal(doc.spectrum.values())?,
            }
        }
        (None, Some(kind)) => {
            let size = a
                .size
                .ok_or_else(|| Error::invalid("--operator needs --size"))?;
            build_operator(kind, size, a.normalization.into())?
        }
        (None, None) => return Err(Error::invalid("--spectrum or --operator is required")),
    };
    let n = op.eigenvalues().len();
    let kind = match a.load {
        LoadArg::Uniform => LoadKind::Uniform,
        LoadArg::Point => LoadKind::Point,
    };
    let m = metrics_with_targets(&p, &op, &LoadVector::new(kind, n)?, a.k)?;
    emit(&metrics_document(&m), a.output.as_deref())
}

fn reproduce(a: ReproduceArgs) -> Result<()> {
    let ids = if a.which.all {
        ExperimentId::all()
    } else if let Some(t) = a.which.table {
        vec![ExperimentId::table(t)?]
    } else {
        vec![ExperimentId::figure(
            a.which.figure.expect("clap enforces one of the group"),
        )?]
    };
    let out_dir = a
        .out_dir
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"));
    for id in ids {
        let mut cfg = ExperimentConfig::new(id);
        if let Some(s) = a.seed {
            cfg.seed = s;
        }
        if let Some(t) = a.trials {
            cfg.trials = t;
        }
        cfg.out_dir = out_dir.clone();
        for table in run_experiment(&cfg)? {
            let path = table.write_to(&cfg.out_dir)?;
            let errors = table.column("error").map_or(0, |c| {
                table.rows.iter().filter(|r| !r[c].is_empty()).count()
            });
            if errors > 0 {
                log::warn!("{} has {errors} error row(s)", path.display());
            }
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn verify() -> i32 {
    let checks = run_invariants();
    let mut failed = 0;
    for c in &checks {
        println!(
            "{} {:<22} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        failed += usize::from(!c.passed);
    }
    println!(
        "{} of {} invariants hold",
        checks.len() - failed,
        checks.len()
    );
    i32::from(failed > 0)
}
