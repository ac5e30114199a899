//! Particle-scale laboratory for the geometric approximation of incompressible
//! Euler flow.
//!
//! * [`assignment`]: exact discrete optimal assignment with dual certificates.
//! * [`polar`]: grids, rearrangement of maps onto measure-preserving ones,
//!   convex potentials and Monge-Ampere residuals.
//! * [`dynamics`]: oscillators coupled through the optimal pairing.
//! * [`reference`]: closed-form rotation and generalized flows.
//! * [`vp1d`]: the one-dimensional sheet model.
//!
//! The numerical core is generic over the scalar type; assignment also runs on
//! integers and rationals, where it is exact.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assignment;
pub mod dynamics;
mod error;
mod points;
pub mod polar;
pub mod reference;
mod scalar;
pub mod vp1d;

pub use error::{Error, Result};
pub use points::Points;
pub use scalar::{Cost, Real};

pub type PointsF64 = Points<f64>;
pub type PointCloudF64 = polar::PointCloud<f64>;
pub type CostMatrixF64 = assignment::CostMatrix<f64>;
pub type AssignmentF64 = assignment::AssignmentResult<f64>;
pub type ScenarioConfigF64 = dynamics::ScenarioConfig<f64>;
pub type ParticleStateF64 = dynamics::ParticleState<f64>;
pub type EvolutionF64 = dynamics::Evolution<f64>;

pub type PointCloudF32 = polar::PointCloud<f32>;
pub type CostMatrixF32 = assignment::CostMatrix<f32>;
pub type ParticleStateF32 = dynamics::ParticleState<f32>;

/// Exact rational costs.
pub type CostMatrixQ = assignment::CostMatrix<num_rational::Ratio<i64>>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
