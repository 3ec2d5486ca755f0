//! Experiment harness: the tables and figure datasets as CSV.
//!
//! Each experiment is described by an [`ExperimentConfig`] whose defaults
//! reproduce the published setting. Rows run in parallel and are assembled
//! in a fixed order, so a given configuration and seed always produce the
//! same bytes.

mod cli;
mod figures;
mod tables;
mod verify;

pub use cli::{cli_dispatch, OUT_DIR_ENV};
pub use figures::run_figure;
pub use tables::run_table;
pub use verify::{run_invariants, Check};

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::operators::Normalization;
use crate::qsvt::EMULATION;
use crate::spectral::DEFAULT_MERGE_TOL;

/// `table1` … `table5`, `fig1` … `fig7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    Table(u8),
    Figure(u8),
}

impl ExperimentId {
    pub fn table(n: u8) -> Result<Self> {
        if (1..=5).contains(&n) {
            Ok(Self::Table(n))
        } else {
            Err(Error::invalid(format!(
                "no table {n}; tables are numbered 1 to 5"
            )))
        }
    }

    pub fn figure(n: u8) -> Result<Self> {
        if (1..=7).contains(&n) {
            Ok(Self::Figure(n))
        } else {
            Err(Error::invalid(format!(
                "no figure {n}; figures are numbered 1 to 7"
            )))
        }
    }

    pub fn all() -> Vec<Self> {
        (1..=5)
            .map(Self::Table)
            .chain((1..=7).map(Self::Figure))
            .collect()
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Table(n) => write!(f, "table{n}"),
            Self::Figure(n) => write!(f, "fig{n}"),
        }
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |digits: &str| {
            digits
                .parse::<u8>()
                .map_err(|_| Error::invalid(format!("unrecognized experiment id {s:?}")))
        };
        if let Some(d) = s.strip_prefix("table") {
            Self::table(parse(d)?)
        } else if let Some(d) = s.strip_prefix("fig") {
            Self::figure(parse(d)?)
        } else {
            Err(Error::invalid(format!("unrecognized experiment id {s:?}")))
        }
    }
}

/// Parameters of one experiment. [`ExperimentConfig::new`] fills in the
/// published setting; individual fields may then be overridden.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    /// Condition number for the synthetic examples (`a = 1/κ`).
    pub kappa: f64,
    /// Base accuracies, one table row group each.
    pub eps: Vec<f64>,
    /// Grid sizes: `N` in 1D, `N₁` in 2D.
    pub sizes: Vec<usize>,
    /// Numbers of corrected eigenvalues.
    pub ks: Vec<usize>,
    pub n_factors: Vec<f64>,
    pub etas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Fixed base degree; the minimal degree for `ε` is searched when unset.
    pub degree: Option<usize>,
    /// Explicit eigenvalues for the synthetic examples.
    pub targets: Vec<f64>,
    pub normalization: Normalization,
    pub merge_tol: f64,
    /// Points per series in figure datasets.
    pub figure_grid: usize,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(id: ExperimentId) -> Self {
        let mut cfg = Self {
            id,
            kappa: 10.0,
            eps: vec![0.2],
            sizes: Vec::new(),
            ks: Vec::new(),
            n_factors: Vec::new(),
            etas: Vec::new(),
            trials: 1,
            seed: 42,
            degree: None,
            targets: Vec::new(),
            normalization: Normalization::StencilBound,
            merge_tol: DEFAULT_MERGE_TOL,
            figure_grid: 2000,
            out_dir: PathBuf::from("results"),
        };
        match id {
            ExperimentId::Table(1) => {
                cfg.sizes = vec![8, 16];
                cfg.n_factors = vec![2.0, 3.0, 4.0, 5.0, 8.0];
            }
            ExperimentId::Table(2) => {
                cfg.sizes = vec![4];
                cfg.eps = vec![0.2, 0.1, 0.01];
                cfg.ks = vec![2];
                cfg.normalization = Normalization::MaxEigenvalue;
            }
            ExperimentId::Table(3) => {
                cfg.sizes = vec![16];
                cfg.eps = vec![0.5, 1e-3];
                cfg.ks = vec![16];
            }
            ExperimentId::Table(4) => {
                cfg.sizes = vec![16];
                cfg.eps = vec![0.5];
                cfg.ks = vec![16];
                cfg.etas = vec![0.0, 1e-2, 1e-1];
                cfg.trials = 10;
            }
            ExperimentId::Table(_) => {
                cfg.sizes = vec![16];
                cfg.ks = vec![0, 1, 4, 8, 16, 32];
                cfg.degree = Some(305);
            }
            ExperimentId::Figure(2) => {
                cfg.targets = vec![0.1, 0.5, 1.0];
                cfg.n_factors = vec![1.0, 2.0, 3.0, 4.0];
            }
            ExperimentId::Figure(3) => cfg.targets = vec![0.1, 0.15, 1.0],
            ExperimentId::Figure(4) => cfg.targets = vec![0.1, 0.1, 1.0],
            ExperimentId::Figure(n @ (5 | 6)) => {
                cfg.sizes = vec![4];
                cfg.eps = vec![0.1];
                cfg.ks = vec![if n == 5 { 4 } else { 2 }];
                cfg.normalization = Normalization::MaxEigenvalue;
            }
            ExperimentId::Figure(7) => {
                cfg.sizes = vec![16];
                cfg.ks = vec![32];
                cfg.degree = Some(305);
            }
            ExperimentId::Figure(_) => {}
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::invalid(format!("{}: {msg}", self.id)));
        if !(self.kappa.is_finite() && self.kappa > 1.0) {
            return bad(format!("kappa must be > 1, got {}", self.kappa));
        }
        if let Some(e) = self.eps.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return bad(format!("eps must lie in (0, 1), got {e}"));
        }
        if self.sizes.contains(&0) {
            return bad("grid sizes must be positive".into());
        }
        if let Some(f) = self
            .n_factors
            .iter()
            .find(|f| !(**f >= 1.0 && f.is_finite()))
        {
            return bad(format!("n_factor must be at least 1, got {f}"));
        }
        if let Some(e) = self.etas.iter().find(|e| !(**e >= 0.0 && e.is_finite())) {
            return bad(format!("eta must be >= 0, got {e}"));
        }
        if self.trials == 0 {
            return bad("at least one trial is needed".into());
        }
        if self.degree.is_some_and(|d| d % 2 == 0) {
            return bad("the base degree must be odd".into());
        }
        if self.figure_grid < 2 {
            return bad("figure grid needs at least two points".into());
        }
        if !(self.merge_tol >= 0.0) {
            return bad("merge tolerance must be >= 0".into());
        }
        Ok(())
    }

    /// The first entry of a list field, or an error naming it.
    fn first<T: Copy>(&self, list: &[T], what: &str) -> Result<T> {
        list.first()
            .copied()
            .ok_or_else(|| Error::invalid(format!("{}: no {what} configured", self.id)))
    }
}

/// An in-memory CSV table.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    /// File stem, e.g. `table3` or `fig1_series`.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Raw cell by column name.
    pub fn cell(&self, row: usize, name: &str) -> Option<&str> {
        let c = self.column(name)?;
        self.rows.get(row).map(|r| r[c].as_str())
    }

    /// Numeric cell by column name; `None` for empty or non-numeric cells.
    pub fn value(&self, row: usize, name: &str) -> Option<f64> {
        self.cell(row, name)?.parse().ok()
    }

    /// Index of the first row whose cells equal every `(column, value)` pair.
    pub fn find(&self, keys: &[(&str, &str)]) -> Option<usize> {
        (0..self.rows.len()).find(|&r| keys.iter().all(|(k, v)| self.cell(r, k) == Some(*v)))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
    }

    /// Writes `<dir>/<name>.csv`, creating `dir` if needed.
    pub fn write_to(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.csv", self.name));
        std::fs::write(&path, self.to_csv_string()?)?;
        Ok(path)
    }
}

/// Runs a table or figure and returns every CSV it produces.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<CsvTable>> {
    cfg.validate()?;
    match cfg.id {
        ExperimentId::Table(_) => Ok(vec![run_table(cfg)?]),
        ExperimentId::Figure(_) => run_figure(cfg),
    }
}

/// Real number with 12 significant digits.
pub(crate) fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub(crate) fn emulation_tag() -> String {
    EMULATION.to_string()
}

/// Sample mean and standard deviation (`n - 1` denominator).
pub(crate) fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
