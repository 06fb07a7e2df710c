//! Numerical kernels for wave equations with dynamical boundary conditions on
//! the unit interval.

pub mod dalembert;
pub mod dirichlet;
pub mod error;
pub mod evolve;
pub mod grid;
pub mod spectral;
pub mod tridiag;

pub use error::{Error, Result};
pub use evolve::{PhaseState, SimulationOptions, Stepper, Trajectory};
pub use grid::{BoundaryPair, Endpoint, Grid, GridFunction};
pub use spectral::{BoundaryClosure, Coupling, OperatorMatrix, ProblemSpec, SpectralReport};
