//! Solver and certifier for radial normalized solutions of p-Laplacian
//! equations with a prescribed L^s mass.
//!
//! The crate computes critical points of the constrained energy functional
//! by a mass-preserving, Pohozaev-damped descent flow on the mass sphere,
//! and certifies each output independently: equation and Pohozaev
//! residuals, an explicit L-infinity bound from the Moser iteration
//! ladder, and a shooting-method oracle for the radial ODE.
//!
//! Layering: [`radial_core`] holds the discretization; [`functionals`]
//! evaluates the energies and their discrete gradients; [`potentials`]
//! carries the admissibility data for the radial potential;
//! [`dual_solver`] inverts the monotone part of the operator;
//! [`mp_solver`] runs the constrained flow; [`certify`] verifies.

pub mod certify;
pub mod dual_solver;
pub mod functionals;
pub mod mp_solver;
pub mod params;
pub mod potentials;
pub mod radial_core;

pub use params::Params;
pub use radial_core::{build_grid, Grading, RadialFunction, RadialGrid};
