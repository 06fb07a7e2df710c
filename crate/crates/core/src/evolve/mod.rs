//! Time evolution of the coupled system and diagnostics on the resulting
//! trajectories.

mod closed_form;
mod diagnostics;
mod energy;
mod leapfrog;
mod simulate;
mod state;

pub use closed_form::{closed_form_trace_solution, closed_form_trajectory, inhomogeneous_bc_solution};
pub use diagnostics::{
    periodicity_defect, recurrence_defect, sine_coefficients, sine_decay_exponent, smoothness_diagnostic,
};
pub use energy::{energy, weights};
pub use leapfrog::{step_leapfrog, Stepper, CFL_LIMIT};
pub use simulate::{simulate, simulate_from, simulate_with, step_count, SimulationOptions, Trajectory};
pub use state::{flux_tolerance, init_state, outward_flux, PhaseState, TRACE_TOL};
