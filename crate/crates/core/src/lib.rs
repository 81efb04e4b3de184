//! Mean-field structure of Gibbs measures on the Boolean hypercube `{-1,1}^n`.
//!
//! The crate is organised bottom-up:
//!
//! * [`boolfn`] holds sparse Fourier expansions, their multilinear extensions,
//!   discrete gradients and Lipschitz parameters.
//! * [`hamiltonians`] builds the standard Hamiltonians (Ising, Curie-Weiss,
//!   triangle counts, smoothed cutoffs) and the scalar shapes used to compose them.
//! * [`gibbs`] does exact enumeration: Gibbs measures, tilts, product
//!   approximations, total variation and exact Wasserstein-1 transport.
//! * [`complexity`] estimates gradient complexity (a Gaussian width).
//! * [`meanfield`] solves `X = tanh(λ ∇f(X))`.
//! * [`verify`] audits the quantitative inequalities on small instances.
//! * [`cli`] is the command-line surface (behind the `cli` feature).
//!
//! Vertices are encoded as integers: bit `i` set means coordinate `i` is `+1`.

pub mod boolfn;
#[cfg(feature = "cli")]
pub mod cli;
pub mod complexity;
pub mod gibbs;
pub mod hamiltonians;
pub mod meanfield;
mod par;
pub mod verify;

pub use boolfn::{CubePoint, FourierExpansion};
pub use complexity::{ComplexityParams, GradientCloud, Provenance};
pub use gibbs::{DenseMeasure, ProductMeasure, TiltVector};
pub use hamiltonians::{HamiltonianSpec, ScalarShape};
pub use meanfield::FixedPointSolution;
pub use verify::AuditRow;

/// Largest dimension for which dense `2^n` tables are built by default.
pub const DEFAULT_DENSE_CAP: usize = 20;

/// Largest dimension for exact transport by default (`2^8 = 256` states).
pub const DEFAULT_TRANSPORT_CAP: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {n} exceeds the {what} cap of {cap}")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("witness-missing: no vertex z with f(z) >= t*n (max f = {max_f}, t*n = {target})")]
    WitnessMissing { max_f: f64, target: f64 },
    #[error("epsilon {epsilon} outside the admissible range (0, {upper})")]
    EpsilonOutOfRange { epsilon: f64, upper: f64 },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
