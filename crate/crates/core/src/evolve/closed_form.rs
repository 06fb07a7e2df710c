//! Exact solution of the decoupled problem `α = β = 0`.
//!
//! The boundary moves freely, `x(t) = h + t·j`, and the interior carries the
//! harmonic lift of the boundary motion plus a Dirichlet wave:
//!
//! `u(t) = C(t)(f - D₀h) + D₀h + S(t)(g - D₀j) + t·D₀j`.

use crate::dalembert::ExtendedFunction;
use crate::dirichlet::dirichlet_closed_form;
use crate::error::{Error, Result};
use crate::grid::{BoundaryPair, Grid, GridFunction};
use crate::spectral::ProblemSpec;

use super::energy::energy;
use super::simulate::Trajectory;
use super::state::{check_traces, PhaseState};

fn on_grid(name: &str, f: &GridFunction, grid: Grid) -> Result<()> {
    if f.grid() != grid {
        return Err(Error::Argument(format!("{name} is sampled on a different grid")));
    }
    Ok(())
}

/// Precomputed pieces of the closed-form solution.
struct Kernel {
    wave_f: ExtendedFunction,
    wave_g: ExtendedFunction,
    lift_h: GridFunction,
    lift_j: GridFunction,
    h: BoundaryPair,
    j: BoundaryPair,
}

impl Kernel {
    fn new(f: &GridFunction, g: &GridFunction, h: BoundaryPair, j: BoundaryPair, grid: Grid) -> Result<Self> {
        on_grid("f", f, grid)?;
        on_grid("g", g, grid)?;
        check_traces("f", f, h, "Lf = h")?;
        let lift_h = dirichlet_closed_form(0.0, h, grid)?.profile;
        let lift_j = dirichlet_closed_form(0.0, j, grid)?.profile;
        Ok(Kernel {
            wave_f: ExtendedFunction::new(f - &lift_h),
            wave_g: ExtendedFunction::new(g - &lift_j),
            lift_h,
            lift_j,
            h,
            j,
        })
    }

    fn at(&self, t: f64) -> PhaseState {
        let grid = self.lift_h.grid();
        let n = grid.n_cells();
        let u = &(&self.wave_f.cosine(t) + &self.lift_h) + &(&self.wave_g.sine(t) + &(t * &self.lift_j));
        let v = &(&self.wave_f.cosine_rate(t) + &self.wave_g.cosine(t)) + &self.lift_j;
        let x = self.h + self.j.scale(t);
        let mut u = u.into_values();
        let mut v = v.into_values();
        [u[0], u[n]] = [x.at0, x.at1];
        [v[0], v[n]] = [self.j.at0, self.j.at1];
        PhaseState {
            u: GridFunction::new(grid, u).expect("finite"),
            v: GridFunction::new(grid, v).expect("finite"),
            x,
            xdot: self.j,
        }
    }
}

/// Closed-form state at time `t`. Requires `f|∂ = h`.
pub fn closed_form_trace_solution(
    f: &GridFunction,
    g: &GridFunction,
    h: BoundaryPair,
    j: BoundaryPair,
    t: f64,
    grid: Grid,
) -> Result<PhaseState> {
    Ok(Kernel::new(f, g, h, j, grid)?.at(t))
}

/// Solution with affine boundary motion `Lu(t) = ψt + ξ`: the closed form
/// with `h = ξ` and boundary velocity `j = ψ`.
pub fn inhomogeneous_bc_solution(
    psi: BoundaryPair,
    xi: BoundaryPair,
    f: &GridFunction,
    g: &GridFunction,
    t: f64,
    grid: Grid,
) -> Result<PhaseState> {
    closed_form_trace_solution(f, g, xi, psi, t, grid)
}

/// Closed-form states at the given times, with energies of the decoupled
/// problem attached.
pub fn closed_form_trajectory(
    f: &GridFunction,
    g: &GridFunction,
    h: BoundaryPair,
    j: BoundaryPair,
    times: &[f64],
    grid: Grid,
) -> Result<Trajectory> {
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Argument("times must be strictly increasing".into()));
    }
    let kernel = Kernel::new(f, g, h, j, grid)?;
    let spec = ProblemSpec::new(grid);
    let states: Vec<PhaseState> = times.iter().map(|&t| kernel.at(t)).collect();
    let energies: Vec<f64> = states.iter().map(|s| energy(s, &spec)).collect();
    let step_l2 = states
        .iter()
        .map(|s| crate::grid::lp_norm(&s.u, 2.0).expect("finite"))
        .collect();
    let dt = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        step_energies: energies.clone(),
        energies,
        dt,
        step_l2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dalembert::{cosine_apply, sine_apply};
    use crate::grid::lp_norm;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Grid {
        Grid::new(n).unwrap()
    }

    #[test]
    fn zero_boundary_data_is_pure_dalembert() {
        let g = grid(100);
        let f = g.sample(|x| (PI * x).sin()).unwrap();
        let v = g.sample(|x| x * (1.0 - x)).unwrap();
        let s = closed_form_trace_solution(&f, &v, BoundaryPair::ZERO, BoundaryPair::ZERO, 0.37, g).unwrap();
        let expect = &cosine_apply(&f, 0.37) + &sine_apply(&v, 0.37);
        assert!((&s.u - &expect).max_abs() < 1e-15);
    }

    #[test]
    fn harmonic_profile_is_stationary() {
        let g = grid(50);
        let h = BoundaryPair::new(1.0, -2.0);
        let f = dirichlet_closed_form(0.0, h, g).unwrap().profile;
        for t in [0.0, 0.3, 1.7, 12.0] {
            let s = closed_form_trace_solution(&f, &g.zeros(), h, BoundaryPair::ZERO, t, g).unwrap();
            assert!((&s.u - &f).max_abs() < 1e-14);
            assert_eq!(s.x, h);
        }
    }

    #[test]
    fn boundary_trace_is_affine() {
        let g = grid(40);
        let psi = BoundaryPair::new(1.0, 1.0);
        for t in [0.0, 0.5, 3.25] {
            let s = inhomogeneous_bc_solution(psi, BoundaryPair::ZERO, &g.zeros(), &g.zeros(), t, g).unwrap();
            assert_eq!(s.x, BoundaryPair::new(t, t));
            assert_eq!(s.u.trace(), BoundaryPair::new(t, t));
        }
    }

    #[test]
    fn incompatible_data_is_rejected() {
        let g = grid(40);
        let f = g.sample(|x| (PI * x).sin()).unwrap();
        let r = closed_form_trace_solution(&f, &g.zeros(), BoundaryPair::new(0.5, 0.0), BoundaryPair::ZERO, 1.0, g);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn growth_slope_is_the_lift_norm() {
        let g = grid(200);
        let j = BoundaryPair::new(1.0, 0.0);
        let lift = dirichlet_closed_form(0.0, j, g).unwrap().profile;
        let a = closed_form_trace_solution(&g.zeros(), &lift, BoundaryPair::ZERO, j, 5.0, g).unwrap();
        let b = closed_form_trace_solution(&g.zeros(), &lift, BoundaryPair::ZERO, j, 20.0, g).unwrap();
        let slope = (lp_norm(&b.u, 2.0).unwrap() - lp_norm(&a.u, 2.0).unwrap()) / 15.0;
        let expect = lp_norm(&lift, 2.0).unwrap();
        assert!((slope - expect).abs() < 1e-12 * expect.max(1.0) + 1e-12);
    }
}
