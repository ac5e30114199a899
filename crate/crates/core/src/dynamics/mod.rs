//! Permutation-coupled harmonic oscillators.
//!
//! Each particle `M_a` is tied by a spring of stiffness `1 / eps^2` to the grid
//! point `A_{sigma(a)}`, where `sigma` is kept equal to the cost-minimizing
//! pairing of the current positions:
//!
//! ```text
//! eps^2 M_a'' + M_a - A_{sigma_a(t)} = 0,
//! H = 1/2 sum |M_a'|^2 + min_sigma 1/(2 eps^2) sum |M_a - A_{sigma_a}|^2.
//! ```
//!
//! For a fixed `sigma` the particles are independent oscillators; all the
//! coupling goes through the assignment.

mod evolve;
mod integrator;
mod state;

pub use evolve::{evolve, DiagnosticRecord, DiagnosticSeries, Evolution, ReferenceFlow, Snapshot};
pub use integrator::{frozen_substep, step_verlet, StepOptions};
pub use state::{
    hamiltonian, init_state, pressure_estimate, Energy, ParticleState, PressureSamples, RefreshPolicy, ScenarioConfig,
    SwitchHandling, VelocityField,
};
