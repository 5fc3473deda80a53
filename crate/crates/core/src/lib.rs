//! Entropic uncertainty relations with quantum memory for Dirac field modes
//! near a Schwarzschild horizon.
//!
//! The crate computes, for a measured mode A and a memory mode B,
//!
//!   H(M₁|B) + H(M₂|B) ≥ U₁ = -log₂ c₁ + H(A) - I(A:B)
//!   H(M₁|B) + H(M₂|B) ≥ U₂ = -log₂ c₁ + H(A) - J(B|M₁) - J(B|M₂)
//!
//! where the memory hovers at radius R₀ = r₀/2M outside a Schwarzschild
//! black hole and is related to the freely-falling frame by a fermionic
//! Bogoliubov transformation with tan q = exp(-(Ω/2)√(1-1/R₀)), Ω = 8πωM.
//!
//! Modules:
//! - [`matrix`]: dense complex kernel (states, tensor products, partial
//!   traces, Hermitian eigendecomposition, isometries)
//! - [`entropy`]: Shannon / von Neumann / conditional entropy, mutual
//!   information (bits)
//! - [`measurement`]: spin-3/2 observables, projective measurements,
//!   overlap tables, Holevo quantities
//! - [`horizon`]: dimensionless parameters, the dilation angle, the
//!   single-mode Bogoliubov map and the example state builders
//! - [`bounds`]: the assembled report for one parameter point
//! - [`verify`]: seeded invariant suites
//! - [`random`]: reproducible random states for tests and verification

pub mod bounds;
pub mod entropy;
pub mod error;
pub mod horizon;
pub mod matrix;
pub mod measurement;
pub mod random;
pub mod verify;

pub use bounds::{
    berta_no_memory, delta2, full_report, lhs_uncertainty, mu_bound, u1_bound, u2_bound,
    BoundReport,
};
pub use entropy::{
    conditional_entropy, mutual_information, shannon_entropy, von_neumann_entropy, ProbDist,
};
pub use error::{Error, Result};
pub use horizon::{
    dilation_angle, mode_isometry, state_bell_like, state_w, state_w_traced, transform_memory,
    transform_memory_pure, BogoliubovMap, DiracState, HorizonParams, MODE_DIM, RINDLER_R0_MAX,
};
pub use matrix::{hermitian_spectrum, DensityMatrix, Isometry, Spectrum, StateVector};
pub use measurement::{
    classical_quantum_state, eigenbasis, holevo_quantity, measure_ensemble, outcome_entropy,
    overlap_table, spin_observables, MeasuredEnsemble, Observable, OverlapTable, ProjectiveBasis,
};
pub use verify::{run_all, SuiteReport, VerifyConfig};
