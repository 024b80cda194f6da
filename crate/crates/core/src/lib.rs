//! Entropy-monotone time stepping for ODE systems that conserve mass and
//! dissipate the Gibbs entropy `Σ f log f Δv`.
//!
//! After every step of an underlying scheme, [`fix::entropic_step`] checks
//! whether the (relative) entropy went up and, if it did, blends the state
//! toward the equal-mass equilibrium just far enough to restore
//! monotonicity. Mass and nonnegativity are preserved by construction.
//!
//! Two testbeds are included: a central-difference linear Fokker-Planck
//! system ([`fokker_planck`]) with an exact eigendecomposition solution, and
//! a Fourier-spectral homogeneous Boltzmann system ([`boltzmann`]). The
//! [`theory`] module evaluates the analytic bounds that control the size of
//! the fix and samples them numerically.

pub mod boltzmann;
pub mod entropy;
pub mod error;
pub mod fix;
pub mod fokker_planck;
pub mod integrators;
pub mod linalg;
pub mod theory;

pub use entropy::{Distribution, Equilibrium, Norm, Weights};
pub use error::{Error, Result};
pub use fix::{entropic_step, FixMode, FixReport};
pub use integrators::{ExperimentRecord, LinearSystem, TrajectoryRecorder};
