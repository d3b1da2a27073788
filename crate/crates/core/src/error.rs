use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("spectrum truncation must include at least one field mode")]
    EmptySpectrum,

    #[error("small-cavity regime violated: {0}")]
    RegimeViolation(String),

    #[error("no sign change for mode {mode} on [{lo:e}, {hi:e}]")]
    RootNotBracketed { mode: usize, lo: f64, hi: f64 },

    #[error("bisection for mode {mode} did not converge in {iterations} iterations")]
    NoConvergence { mode: usize, iterations: usize },

    #[error("linearized shift is invalid near resonance at k = {k}")]
    Resonance { k: usize },

    #[error("u = {0} is an integer, a pole of the series")]
    SeriesPole(f64),

    #[error("numerical domain error: {0}")]
    Domain(String),

    #[error("field mode {k} coincides with collective mode {r}")]
    Singular { k: usize, r: usize },

    #[error("index {index} outside truncation {limit}")]
    OutOfRange { index: usize, limit: usize },

    #[error("truncation mismatch: {0}")]
    TruncationMismatch(String),

    #[error("finite-N oracle failed: {0}")]
    OracleFailure(String),

    #[error("averaging window [{0:e}, {1:e}] contains no grid points")]
    EmptyWindow(f64, f64),
}
