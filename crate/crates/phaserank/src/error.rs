//! Error type shared by all phase-analysis operations.

use thiserror::Error;

/// Errors produced by the library.
///
/// `NotSectorial` carries the best rotation found by the certificate search
/// so callers can report how far the input is from sectoriality.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not sectorial (best rotation theta = {theta:.6}, lambda_min = {lambda_min:.3e})")]
    NotSectorial { theta: f64, lambda_min: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("incompatible sectors: joint phase hull spread {spread:.6} >= pi")]
    IncompatibleSectors { spread: f64 },

    #[error("sector violation: phases of the rotated matrix leave ({lo:.6}, {hi:.6})")]
    SectorViolation { lo: f64, hi: f64 },

    #[error("branch point: {0}")]
    BranchPoint(String),

    #[error("matrix is numerically singular")]
    Singular,

    #[error("matrix is not positive definite (lambda_min = {0:.3e})")]
    NotPositiveDefinite(f64),

    #[error("matrix is not unitary (||U*U - I|| = {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not normal (commutator norm {0:.3e})")]
    NotNormal(f64),

    #[error("gauge parameter out of range: {0}")]
    GaugeOutOfRange(String),

    #[error("rank-deficient compression matrix (sigma_min/sigma_max = {0:.3e})")]
    RankDeficient(f64),

    #[error("generation exhausted: {0}")]
    GenerationExhausted(String),

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
