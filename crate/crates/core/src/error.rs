use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("x = {x} lies outside the Chebyshev domain [-1, 1]")]
    Domain { x: f64 },

    #[error("SVD of a {rows}x{cols} matrix did not converge after {sweeps} Jacobi sweeps")]
    SvdNoConvergence {
        rows: usize,
        cols: usize,
        sweeps: usize,
    },

    #[error(
        "Chebyshev recurrence grew past its bound at step {step}; the operator spectrum \
         is not inside [-1, 1], normalize it by its largest eigenvalue first"
    )]
    SpectralRadius { step: usize },

    #[error(
        "Remez exchange failed after {iterations} iterations (last levelled error {last_h:e})"
    )]
    RemezNoConvergence { iterations: usize, last_h: f64 },

    #[error(
        "correction is infeasible: {k_eff} distinct targets but only {n_terms} basis terms \
         (the correction needs K_eff <= n0, and works best with K_eff << n0)"
    )]
    TooManyTargets { k_eff: usize, n_terms: usize },

    #[error("interpolation system is infeasible: max residual {max_residual:e} at n = {n_terms}")]
    Infeasible { n_terms: usize, max_residual: f64 },

    #[error("p(A)b vanished; the emulated output state is undefined")]
    DegenerateOutput,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("no degree up to {max_degree} reaches eps = {eps}")]
    DegreeSearchExhausted { max_degree: usize, eps: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
