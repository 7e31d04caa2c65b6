use thiserror::Error;

/// Crate-wide error type.
///
/// Numerical routines validate their inputs (dimensions, Hermiticity,
/// positivity, normalization) and report violations through these variants
/// rather than panicking; panics are reserved for internal invariant
/// breakage.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix is not Hermitian: Frobenius norm of (H - H^dag) = {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("state vector has near-zero norm ({norm:.3e}); cannot normalize")]
    ZeroVector { norm: f64 },

    #[error("state vector is not normalized: |norm - 1| = {defect:.3e}")]
    NotNormalized { defect: f64 },

    #[error("eigendecomposition failed to converge for a {dim}x{dim} matrix")]
    EigenConvergence { dim: usize },

    #[error("invalid clock construction: {reason}")]
    InvalidClock { reason: String },

    #[error("overlap Gram matrix is not positive definite: min eigenvalue = {min_eigenvalue:.3e}")]
    GramNotPositiveDefinite { min_eigenvalue: f64 },

    #[error("invalid branch weights: {reason}")]
    InvalidWeights { reason: String },

    #[error("relative state undefined: conditioning weight {weight:.3e} below threshold")]
    UndefinedRelativeState { weight: f64 },

    #[error("family contains a mixed state (purity {purity:.6}); this check needs pure states")]
    MixedFamily { purity: f64 },

    #[error("time grid too short: need at least {needed} points, got {got}")]
    InsufficientGrid { needed: usize, got: usize },

    #[error("time grid is not uniform: max spacing deviation = {deviation:.3e}")]
    NonUniformGrid { deviation: f64 },

    #[error("matrix is not unitary: Frobenius norm of (W^dag W - I) = {defect:.3e}")]
    NotUnitary { defect: f64 },

    #[error("no exactly stationary state exists here: {reason}")]
    NotStationary { reason: String },

    #[error("observer model violation: {reason}")]
    ModelViolation { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
