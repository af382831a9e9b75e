//! Numerical laboratory for periodic scalar first-order conservation laws
//! with additive stochastic forcing on the torus (1D and 2D).
//!
//! The crate simulates the viscous approximation of `du + div A(u) dt = Φ dW`
//! with a monotone finite-volume scheme, instruments the kinetic dissipation
//! measure, evaluates flux non-degeneracy functionals, computes the
//! fractional-semigroup decomposition of the solution, and estimates the
//! invariant measure and its ergodicity properties by Monte-Carlo ensembles.

pub mod config;
pub mod ensemble;
pub mod flux;
pub mod grid;
pub mod kinetic;
pub mod manifest;
pub mod noise;
pub mod rng;
pub mod snapshot;
pub mod solver;
pub mod spectral;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("value {value} outside range [{lo}, {hi}] for {what}")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("degenerate flux: {0}")]
    Degenerate(String),

    #[error("solution blew up at step {step} (t = {time:.6})")]
    BlowUp { step: usize, time: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("ensemble invalid: {blown} of {total} paths blew up")]
    EnsembleInvalid { blown: usize, total: usize },

    #[error("configuration invalid:\n{}", .0.join("\n"))]
    ConfigValidation(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code per the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigValidation(_) | Error::Argument(_) | Error::Range { .. } => 1,
            _ => 2,
        }
    }
}

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}
