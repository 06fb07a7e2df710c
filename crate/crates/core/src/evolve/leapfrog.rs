//! Störmer–Verlet (kick-drift-kick) integration of `p̈ = 𝒜p + D ṗ`, where
//! `D` collects the velocity-dependent boundary forces.
//!
//! `D` only has rows at the boundary unknowns, and the columns it reads
//! belong to rows without damping. The implicit half kick
//! `(I - dt/2 D) v_{n+½} = v_n + dt/2 𝒜p_n` is therefore solved exactly by
//! one sweep: undamped rows first, then a scalar division per damped row.
//! The closing kick reuses `D v_{n+½}`, so the damping is applied at the
//! midpoint and the scheme stays time reversible when `D = 0`.

use crate::error::{Error, Result};
use crate::grid::{BoundaryPair, Grid, GridFunction};
use crate::spectral::{Coupling, OperatorMatrix, ProblemSpec};

use super::energy::{potential_energy, weights};
use super::state::PhaseState;

/// Largest admissible `|dt| / h`.
pub const CFL_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
struct DampedRow {
    row: usize,
    diag: f64,
    off: Vec<(usize, f64)>,
}

/// Velocity-dependent force rows of the first-order system.
fn damping_rows(spec: &ProblemSpec, m: &OperatorMatrix) -> Vec<DampedRow> {
    let n = m.dof_map.n_cells;
    let mut out = Vec::new();
    match spec.coupling {
        Coupling::Trace => {
            let (m0, m1) = spec.boundary_masses();
            for (row, c, mass) in [
                (0, spec.damp_c0 + spec.damp_ct0, m0),
                (n, spec.damp_c1 + spec.damp_ct1, m1),
            ] {
                if c != 0.0 {
                    out.push(DampedRow { row, diag: c / mass, off: Vec::new() });
                }
            }
        }
        Coupling::NormalDerivative => {
            for (row, node, p, r) in [
                (n + 1, 0, spec.ac_p0, spec.ac_r0),
                (n + 2, n, spec.ac_p1, spec.ac_r1),
            ] {
                if p != 0.0 || r != 0.0 {
                    let off = if p != 0.0 { vec![(node, p)] } else { Vec::new() };
                    out.push(DampedRow { row, diag: r, off });
                }
            }
        }
    }
    out
}

/// Reusable integrator holding the sparse operator rows and the current
/// positions and velocities.
#[derive(Debug, Clone)]
pub struct Stepper {
    spec: ProblemSpec,
    grid: Grid,
    coupling: Coupling,
    dt: f64,
    rows: Vec<Vec<(usize, f64)>>,
    damping: Vec<DampedRow>,
    damped: Vec<bool>,
    pos: Vec<f64>,
    vel: Vec<f64>,
    steps: usize,
    scratch: Vec<f64>,
}

impl Stepper {
    pub fn new(state: &PhaseState, dt: f64, spec: &ProblemSpec, m: &OperatorMatrix) -> Result<Self> {
        let grid = spec.grid();
        if state.grid() != grid || m.dof_map.n_cells != grid.n_cells() || m.dof_map.coupling != spec.coupling {
            return Err(Error::Argument("state, spec and operator disagree on the grid or coupling".into()));
        }
        if !dt.is_finite() || dt == 0.0 || dt.abs() > CFL_LIMIT * grid.h() * (1.0 + 1e-12) {
            return Err(Error::Argument(format!(
                "time step {dt} violates 0 < |dt| <= {CFL_LIMIT} h = {}",
                CFL_LIMIT * grid.h()
            )));
        }
        let damping = damping_rows(spec, m);
        let mut damped = vec![false; m.dim];
        for d in &damping {
            damped[d.row] = true;
        }
        let mut s = Stepper {
            spec: spec.clone(),
            grid,
            coupling: spec.coupling,
            dt,
            rows: m.sparse_rows(),
            damping,
            damped,
            pos: vec![0.0; m.dim],
            vel: vec![0.0; m.dim],
            steps: 0,
            scratch: vec![0.0; m.dim],
        };
        s.load(state);
        Ok(s)
    }

    fn load(&mut self, state: &PhaseState) {
        let n = self.grid.n_cells();
        self.pos[..=n].copy_from_slice(state.u.values());
        self.vel[..=n].copy_from_slice(state.v.values());
        match self.coupling {
            Coupling::Trace => {
                // the boundary unknowns are the endpoint nodes
                [self.pos[0], self.pos[n]] = [state.x.at0, state.x.at1];
                [self.vel[0], self.vel[n]] = [state.xdot.at0, state.xdot.at1];
            }
            Coupling::NormalDerivative => {
                [self.pos[n + 1], self.pos[n + 2]] = [state.x.at0, state.x.at1];
                [self.vel[n + 1], self.vel[n + 2]] = [state.xdot.at0, state.xdot.at1];
            }
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps_taken(&self) -> usize {
        self.steps
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    pub fn positions(&self) -> &[f64] {
        &self.pos
    }

    pub fn velocities(&self) -> &[f64] {
        &self.vel
    }

    pub fn state(&self) -> PhaseState {
        let n = self.grid.n_cells();
        let u = GridFunction::new(self.grid, self.pos[..=n].to_vec()).expect("finite positions");
        let v = GridFunction::new(self.grid, self.vel[..=n].to_vec()).expect("finite velocities");
        let (x, xdot) = match self.coupling {
            Coupling::Trace => (
                BoundaryPair::new(self.pos[0], self.pos[n]),
                BoundaryPair::new(self.vel[0], self.vel[n]),
            ),
            Coupling::NormalDerivative => (
                BoundaryPair::new(self.pos[n + 1], self.pos[n + 2]),
                BoundaryPair::new(self.vel[n + 1], self.vel[n + 2]),
            ),
        };
        PhaseState { u, v, x, xdot }
    }

    fn accelerations(&self, out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().map(|(c, a)| a * self.pos[*c]).sum();
        }
    }

    /// Solves `(I - τD) w = rhs` in place, for `τ = ±dt/2`.
    fn solve_damped(&self, tau: f64, w: &mut [f64]) {
        for d in &self.damping {
            let coupled: f64 = d.off.iter().map(|(c, p)| p * w[*c]).sum();
            w[d.row] = (w[d.row] + tau * coupled) / (1.0 - tau * d.diag);
        }
    }

    /// Half-step velocities `(v_{n-½}, v_{n+½})` implied by the current state.
    pub fn half_step_velocities(&self) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * self.dt;
        let mut acc = vec![0.0; self.pos.len()];
        self.accelerations(&mut acc);
        let mut plus: Vec<f64> = self.vel.iter().zip(&acc).map(|(v, a)| v + half * a).collect();
        let mut minus: Vec<f64> = self.vel.iter().zip(&acc).map(|(v, a)| v - half * a).collect();
        self.solve_damped(half, &mut plus);
        self.solve_damped(-half, &mut minus);
        (minus, plus)
    }

    /// One kick-drift-kick step.
    pub fn step(&mut self) -> Result<()> {
        let half = 0.5 * self.dt;
        let mut acc = std::mem::take(&mut self.scratch);
        self.accelerations(&mut acc);
        for (v, a) in self.vel.iter_mut().zip(&acc) {
            *v += half * a;
        }
        let mut vel = std::mem::take(&mut self.vel);
        self.solve_damped(half, &mut vel);
        self.vel = vel;
        for (p, v) in self.pos.iter_mut().zip(&self.vel) {
            *p += self.dt * v;
        }
        self.accelerations(&mut acc);
        // D v_{n+½}, read before the closing kick overwrites the velocities
        let forces: Vec<(usize, f64)> = self
            .damping
            .iter()
            .map(|d| {
                let f = d.diag * self.vel[d.row]
                    + d.off.iter().map(|(c, p)| p * self.vel[*c]).sum::<f64>();
                (d.row, f)
            })
            .collect();
        for (v, a) in self.vel.iter_mut().zip(&acc) {
            *v += half * a;
        }
        for (row, f) in forces {
            self.vel[row] += half * f;
        }
        self.scratch = acc;
        self.steps += 1;
        if self.pos.iter().chain(&self.vel).any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { step: self.steps });
        }
        Ok(())
    }

    pub fn advance(&mut self, n: usize) -> Result<()> {
        for _ in 0..n {
            self.step()?;
        }
        Ok(())
    }

    /// Time-centred energy `½⟨v_{n-½}, v_{n+½}⟩_W + U(p_n)`. For the
    /// conservative closure without damping it is conserved by the scheme up
    /// to round-off.
    pub fn discrete_energy(&self) -> f64 {
        let (minus, plus) = self.half_step_velocities();
        let w = weights(&self.spec, self.grid);
        let kinetic: f64 = 0.5 * w.iter().zip(minus.iter().zip(&plus)).map(|(w, (a, b))| w * a * b).sum::<f64>();
        kinetic + potential_energy(&self.pos, &self.spec, self.grid)
    }

    /// `damped[i]` is true when dof `i` feels a velocity-dependent force.
    pub fn damped_dofs(&self) -> &[bool] {
        &self.damped
    }
}

/// One leapfrog step of `s`.
pub fn step_leapfrog(s: &PhaseState, dt: f64, spec: &ProblemSpec, m: &OperatorMatrix) -> Result<PhaseState> {
    let mut stepper = Stepper::new(s, dt, spec, m)?;
    stepper.step()?;
    Ok(stepper.state())
}
