//! Numerical tolerances shared across the crate.
//!
//! Every threshold used by validation code and tests is named here so that
//! there is one place to look when a comparison fails.

/// Algebraic identities that hold exactly in real arithmetic.
pub const ALGEBRAIC: f64 = 1e-10;

/// Eigenpair residuals and anything that goes through the eigensolver.
pub const EIGEN: f64 = 1e-8;

/// Structural properties of constructed objects: Hermiticity, unit trace,
/// normalization of amplitudes, symmetry of covariances.
pub const STRUCTURAL: f64 = 1e-12;

/// Sub-diagonal deflation threshold of the QR iteration.
pub const DEFLATION: f64 = 1e-12;

/// Iteration cap of the QR iteration.
pub const EIG_MAX_ITER: usize = 500;

/// Eigenvalues of a covariance above `-PSD_CLAMP` are treated as zero.
pub const PSD_CLAMP: f64 = 1e-12;

/// Negative eigenvalues of a density matrix above `-STATE_PSD` are accepted.
pub const STATE_PSD: f64 = 1e-10;

/// Sweep cap of the Jacobi eigenvalue and singular value routines.
pub const JACOBI_MAX_SWEEPS: usize = 60;

/// Negative eigenvalues of `ρ` above `-WOOTTERS_CLAMP` are clamped to zero
/// before the square-root factor `ρ = A A†` is formed.
pub const WOOTTERS_CLAMP: f64 = 1e-10;

/// Analytic laws against the numeric channel + Wootters path.
pub const ORACLE: f64 = 1e-8;

/// Monte Carlo agreement is judged at this many standard errors.
pub const MC_SIGMAS: f64 = 4.0;

/// Absolute floor added to the Monte Carlo acceptance band, so entries
/// with vanishing sample variance are compared at rounding level.
pub const MC_ABS_FLOOR: f64 = 1e-12;

/// Bisection tolerance on the Schmidt weight in the robustness scan.
pub const BISECTION: f64 = 1e-10;
