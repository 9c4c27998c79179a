//! Numerical tolerances shared across the crate.
//!
//! All matrix checks use the max-norm (largest entry magnitude).

/// Hermiticity check, `‖X − X†‖_max`.
pub const HERMITIAN: f64 = 1e-10;
/// Unitarity check, `‖U†U − I‖_max`.
pub const UNITARY: f64 = 1e-10;
/// Conditioning threshold on probabilities (squared norms).
pub const CONDITIONING: f64 = 1e-12;
/// Unit norm of state vectors.
pub const STATE_NORM: f64 = 1e-12;
/// Unit trace of density operators.
pub const TRACE: f64 = 1e-10;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD: f64 = 1e-10;
/// Orthonormality of basis vectors and idempotence of projectors.
pub const ORTHONORMAL: f64 = 1e-10;
/// Eigenvalues closer than this are grouped into one eigenspace.
pub const DEGENERACY: f64 = 1e-9;
/// Column sums and signs of stochastic matrices.
pub const STOCHASTIC: f64 = 1e-10;
/// Off-diagonal traces accepted when checking a nonideal measurement.
pub const NONIDEAL_OFF_DIAGONAL: f64 = 1e-9;
/// Agreement between the tomographic oracle and the direct routes.
pub const ORACLE: f64 = 1e-8;
