use crate::grid::Grid;
use crate::spectral::{Coupling, ProblemSpec};

use super::state::PhaseState;

/// Kinetic weights of the unknowns: trapezoid weights on the nodes plus a
/// unit mass for each boundary unknown.
pub fn weights(spec: &ProblemSpec, grid: Grid) -> Vec<f64> {
    let n = grid.n_cells();
    let mut w: Vec<f64> = (0..=n).map(|i| grid.trapezoid_weight(i)).collect();
    match spec.coupling {
        Coupling::Trace => {
            w[0] += 1.0;
            w[n] += 1.0;
        }
        Coupling::NormalDerivative => w.extend([1.0, 1.0]),
    }
    w
}

/// `½∫|u'|² - ½∫ r|u|² - ½β₀|u(0)|² - ½β₁|u(1)|²`, with `u'` by cell
/// differences and `∫ r|u|²` by the trapezoid rule. In normal-derivative
/// mode the boundary term is `-½(q₀δ₀² + q₁δ₁²)` with the acoustic `q`.
pub(crate) fn potential_energy(pos: &[f64], spec: &ProblemSpec, grid: Grid) -> f64 {
    let n = grid.n_cells();
    let h = grid.h();
    let u = &pos[..=n];
    let grad: f64 = u.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / h;
    let pot: f64 = (0..=n)
        .map(|i| grid.trapezoid_weight(i) * spec.r_coef.at(i) * u[i] * u[i])
        .sum();
    let boundary = match spec.coupling {
        Coupling::Trace => spec.beta0 * u[0] * u[0] + spec.beta1 * u[n] * u[n],
        Coupling::NormalDerivative => {
            spec.ac_q0 * pos[n + 1] * pos[n + 1] + spec.ac_q1 * pos[n + 2] * pos[n + 2]
        }
    };
    0.5 * (grad - pot - boundary)
}

/// Energy of a phase state:
/// `½‖v‖₂² + ½|ẋ|² + ½∫|u'|² - ½∫ r|u|² - ½β₀|u(0)|² - ½β₁|u(1)|²`.
///
/// Nonnegative when `r ≤ 0` and `β ≤ 0`. Conserved by the continuous flow
/// for `α₀ = 1, α₁ = -1, q ≡ 0` without damping.
pub fn energy(s: &PhaseState, spec: &ProblemSpec) -> f64 {
    let grid = s.grid();
    let n = grid.n_cells();
    let kinetic: f64 = (0..=n)
        .map(|i| grid.trapezoid_weight(i) * s.v.at(i) * s.v.at(i))
        .sum::<f64>()
        + s.xdot.at0 * s.xdot.at0
        + s.xdot.at1 * s.xdot.at1;
    let mut pos = s.u.values().to_vec();
    if spec.coupling == Coupling::NormalDerivative {
        pos.extend([s.x.at0, s.x.at1]);
    }
    0.5 * kinetic + potential_energy(&pos, spec, grid)
}
