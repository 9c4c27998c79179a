//! Finite-dimensional quantum measurement theory.
//!
//! Object and apparatus are coupled by a premeasurement unitary; the pointer
//! reading `m` then selects a sub-ensemble of objects whose state is the
//! conditionally prepared state
//!
//! ```text
//! ρ_fm = Tr_a(ρ_f E_m) / Tr(ρ_f E_m),    ρ_f = U (ρ_o ⊗ ρ_a) U†.
//! ```
//!
//! The crate builds first-kind, second-kind and nonideal (column-stochastic
//! `λ`) measurement models, extracts their POVMs, and applies them to
//! EPR-correlated pairs, where the prepared state of the untouched particle is
//! a projection only when the measurement on its partner is ideal.
//!
//! Module map:
//!
//! - [`hilbert`]: layouts, tensor products, partial traces, embeddings.
//! - [`objects`]: states, observables, projectors and projection rules.
//! - [`models`]: measurement model constructors and POVM extraction.
//! - [`conditioning`]: final states, outcome probabilities, conditional states.
//! - [`epr`]: two-particle scenarios with simulated and closed-form routes.
//! - [`oracle`]: brute-force tomography and trace oracles for cross-checks.
//! - [`scenario`]: JSON scenario files, runs and reports.

pub mod conditioning;
pub mod epr;
pub mod error;
pub mod hilbert;
pub mod models;
pub mod objects;
pub mod oracle;
pub mod scenario;
pub mod tol;

pub use error::{Error, Result};
pub use hilbert::{ComplexMatrix, ComplexVector, SpaceLayout, UnitaryOperator};
