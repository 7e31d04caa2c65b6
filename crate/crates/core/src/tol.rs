//! Numerical tolerances used across the crate.
//!
//! All thresholds live here so that every validation and every test asserts
//! against a named constant instead of a magic number. Values are chosen for
//! dense double-precision linear algebra at the dimensions this crate
//! targets (products of factors up to a few hundred).

/// Frobenius norm of (H - H^dag) for a matrix accepted as Hermitian.
/// Scaled by max(1, ||H||_F) at the check site so large-norm operators are
/// judged relatively.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Frobenius norm of (W^dag W - I) for a matrix accepted as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// |norm - 1| accepted for a normalized state vector.
pub const NORM_TOL: f64 = 1e-12;

/// Norm below which a vector cannot be safely normalized.
pub const ZERO_NORM_TOL: f64 = 1e-14;

/// Relative eigenvalue cutoff for membership in a kernel (zero eigenspace).
/// Absolute cutoff is `KERNEL_TOL * frobenius_norm(H)`.
pub const KERNEL_TOL: f64 = 1e-10;

/// Density-matrix eigenvalues at or below this are treated as exact zeros
/// when computing entropies.
pub const ENTROPY_EIGENVALUE_CUTOFF: f64 = 1e-14;

/// Eigenvalues above `-PSD_TOL` qualify a Hermitian matrix as positive
/// semidefinite for entropy and fidelity purposes.
pub const PSD_TOL: f64 = 1e-10;

/// Conditioning weights at or below this leave the relative state undefined.
pub const SUPPORT_TOL: f64 = 1e-14;

/// Minimum purity `1 - PURE_FAMILY_TOL` for a family accepted by pure-state
/// orbit comparisons.
pub const PURE_FAMILY_TOL: f64 = 1e-8;

/// Relative singular-value cutoff for the operator product-decomposition
/// rank: singular values below `cutoff * largest` are treated as zero.
pub const SCHMIDT_CUTOFF: f64 = 1e-8;

/// Max spacing deviation for a time grid accepted as uniform, relative to
/// the mean spacing.
pub const GRID_UNIFORM_TOL: f64 = 1e-9;

/// Folded rest-energy residual (distance to the clock's resonant lattice,
/// relative to the clock level spacing) accepted as exactly resonant.
pub const RESONANCE_TOL: f64 = 1e-9;

/// Constraint residual required of the input state before a structure-
/// change experiment is meaningful.
pub const EXPERIMENT_STATIONARITY_TOL: f64 = 1e-8;
