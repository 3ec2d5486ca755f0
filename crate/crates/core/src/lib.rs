//! Polynomial approximations to `1/x` for QSVT linear solvers.
//!
//! The crate builds odd Chebyshev approximants on `[a, 1]` (minimax by Remez
//! exchange, or a θ-parametrized least-squares fit), corrects them so that
//! `λ·p(λ) = 1` holds exactly at known eigenvalues without raising the degree,
//! and emulates the noiseless QSVT output `p(A)b` to measure fidelity,
//! success probability and compliance on Poisson model problems.

pub mod basepoly;
pub mod bench;
pub mod chebpoly;
pub mod error;
pub mod numerics;
pub mod operators;
pub mod qsvt;
pub mod spectral;

pub use chebpoly::{Label, OddChebyshevPoly};
pub use error::{Error, Result};
