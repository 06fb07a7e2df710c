use crate::error::{Error, Result};
use crate::grid::{lp_norm, BoundaryPair, Grid, GridFunction};
use crate::spectral::{assemble, ProblemSpec};

use super::leapfrog::Stepper;
use super::state::{init_state, PhaseState};

/// Sampled solution.
///
/// `times`, `states` and `energies` are aligned and hold every
/// `record_every`-th step. `step_energies` and `step_l2` hold the energy and
/// `‖u‖₂` after every step, at times `k·dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
    pub energies: Vec<f64>,
    pub dt: f64,
    pub step_energies: Vec<f64>,
    pub step_l2: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&PhaseState> {
        self.states.last()
    }

    /// Index of the recorded sample at time `t`, if any.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * t.abs().max(1.0);
        let i = self.times.partition_point(|s| *s < t - tol);
        (i < self.times.len() && (self.times[i] - t).abs() <= tol).then_some(i)
    }

    pub fn state_at(&self, t: f64) -> Option<&PhaseState> {
        self.index_of(t).map(|i| &self.states[i])
    }

    /// `max_k |E_k - E_0| / |E_0|` over the per-step energy log.
    pub fn relative_energy_drift(&self) -> f64 {
        let e0 = self.step_energies[0];
        let scale = if e0 != 0.0 { e0.abs() } else { 1.0 };
        self.step_energies.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max) / scale
    }

    /// Largest per-step energy increase.
    pub fn max_energy_increase(&self) -> f64 {
        self.step_energies
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationOptions {
    /// Record every this many steps (the final step is always recorded).
    pub record_every: usize,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions { record_every: 1 }
    }
}

/// Number of steps of size `dt` covering `[0, T]`.
pub fn step_count(t_final: f64, dt: f64) -> usize {
    let r = t_final / dt;
    let k = r.round();
    if (r - k).abs() <= 1e-9 * r.max(1.0) {
        k as usize
    } else {
        r.ceil() as usize
    }
}

/// Integrates from `(f, g, h, j)` to time `T`, recording every step.
#[allow(clippy::too_many_arguments)]
pub fn simulate(
    spec: &ProblemSpec,
    grid: Grid,
    f: &GridFunction,
    g: &GridFunction,
    h: BoundaryPair,
    j: BoundaryPair,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    simulate_with(spec, grid, f, g, h, j, t_final, dt, SimulationOptions::default())
}

#[allow(clippy::too_many_arguments)]
pub fn simulate_with(
    spec: &ProblemSpec,
    grid: Grid,
    f: &GridFunction,
    g: &GridFunction,
    h: BoundaryPair,
    j: BoundaryPair,
    t_final: f64,
    dt: f64,
    opts: SimulationOptions,
) -> Result<Trajectory> {
    spec.validate(grid)?;
    let state = init_state(f, g, h, j, spec)?;
    simulate_from(spec, &state, t_final, dt, opts)
}

/// Integrates an already validated state.
pub fn simulate_from(
    spec: &ProblemSpec,
    state: &PhaseState,
    t_final: f64,
    dt: f64,
    opts: SimulationOptions,
) -> Result<Trajectory> {
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(Error::Argument(format!("final time must be positive, got {t_final}")));
    }
    if !(dt > 0.0) {
        return Err(Error::Argument(format!("time step must be positive, got {dt}")));
    }
    if opts.record_every == 0 {
        return Err(Error::Argument("record_every must be at least 1".into()));
    }
    let grid = spec.grid();
    let m = assemble(spec, grid)?;
    let mut stepper = Stepper::new(state, dt, spec, &m)?;
    let n_steps = step_count(t_final, dt);

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        energies: Vec::new(),
        dt,
        step_energies: Vec::with_capacity(n_steps + 1),
        step_l2: Vec::with_capacity(n_steps + 1),
    };
    let l2 = |s: &Stepper| {
        let u = GridFunction::new(grid, s.positions()[..=grid.n_cells()].to_vec()).expect("finite");
        lp_norm(&u, 2.0).expect("finite")
    };
    for k in 0..=n_steps {
        if k > 0 {
            stepper.step()?;
        }
        let e = stepper.discrete_energy();
        traj.step_energies.push(e);
        traj.step_l2.push(l2(&stepper));
        if k % opts.record_every == 0 || k == n_steps {
            traj.times.push(k as f64 * dt);
            traj.states.push(stepper.state());
            traj.energies.push(e);
        }
    }
    Ok(traj)
}
