//! Shared setup for the benchmarks.

use std::f64::consts::PI;

use dynwave_core::evolve::init_state;
use dynwave_core::spectral::{BoundaryClosure, ProblemSpec};
use dynwave_core::{BoundaryPair, Grid, GridFunction, PhaseState};

/// Dissipative trace problem with a smooth zero-trace displacement.
pub fn dissipative_setup(n: usize) -> (ProblemSpec, PhaseState) {
    let grid = Grid::new(n).expect("n >= 4");
    let spec = ProblemSpec::dissipative(grid, -1.0, -1.0)
        .with_alpha(1.0, -1.0)
        .with_closure(BoundaryClosure::Conservative);
    let f = grid.sample(|x| (PI * x).sin() + 0.3 * (3.0 * PI * x).sin()).expect("finite");
    let g = grid.zeros();
    let s = init_state(&f, &g, BoundaryPair::new(0.0, 0.0), BoundaryPair::new(0.0, 0.0), &spec).expect("compatible");
    (spec, s)
}

pub fn smooth(n: usize) -> GridFunction {
    Grid::new(n).expect("n >= 4").sample(|x| (PI * x).sin() + x * x).expect("finite")
}
