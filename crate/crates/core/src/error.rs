//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },

    #[error("matrix is not unitary (max deviation {dev:.3e})")]
    NotUnitary { dev: f64 },

    #[error("state is not normalized (|norm^2 - 1| = {dev:.3e})")]
    NotNormalized { dev: f64 },

    #[error(
        "Kraus channel fails validation (trace-preserving dev {tp_err:.3e}, unital dev {unital_err:.3e})"
    )]
    ChannelValidation { tp_err: f64, unital_err: f64 },

    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    Range {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("dense density-operator path capped at n <= {max}, requested n = {n}")]
    Capacity { n: usize, max: usize },

    #[error("infinite-lattice semantics needs n > 2t (n = {n}, t = {t}); rerun in torus mode or enlarge the lattice")]
    Wraparound { n: usize, t: usize },

    #[error("linear system nearly singular (pivot ratio {pivot_ratio:.3e})")]
    NearSingular { pivot_ratio: f64 },

    #[error(
        "top of spectrum is not simple at (kx = {kx:.6}, ky = {ky:.6}, q = {q:.6}): |1 - lambda_2/lambda_1| = {isolation:.3e}"
    )]
    NonSimpleSpectrum {
        kx: f64,
        ky: f64,
        q: f64,
        isolation: f64,
    },

    #[error(
        "simplicity hypothesis fails on {excluded_fraction:.1%} of the momentum grid (limit requires <= {max_fraction:.1%})"
    )]
    HypothesisViolation {
        excluded_fraction: f64,
        max_fraction: f64,
    },

    #[error("eigensolver failed to converge after {iterations} iterations")]
    EigConvergence { iterations: usize },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}
