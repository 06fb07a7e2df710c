//! Trajectory diagnostics: periodicity, near recurrence and spectral decay.

use std::f64::consts::PI;

use crate::dirichlet::least_squares_slope;
use crate::error::{Error, Result};
use crate::grid::{lp_norm, GridFunction};

use super::simulate::Trajectory;

fn l2(f: &GridFunction) -> f64 {
    lp_norm(f, 2.0).expect("p = 2")
}

/// `max_{t₀} ‖u(t₀ + T) - u(t₀)‖₂ / ‖u(0)‖₂` over recorded pairs.
pub fn periodicity_defect(traj: &Trajectory, period: f64) -> Result<f64> {
    if !(period > 0.0) {
        return Err(Error::Argument(format!("period must be positive, got {period}")));
    }
    let u0 = &traj.states.first().ok_or_else(|| Error::Argument("empty trajectory".into()))?.u;
    let scale = match l2(u0) {
        s if s > 0.0 => s,
        _ => 1.0,
    };
    let mut worst: Option<f64> = None;
    for (i, &t) in traj.times.iter().enumerate() {
        if let Some(k) = traj.index_of(t + period) {
            let d = l2(&(&traj.states[k].u - &traj.states[i].u)) / scale;
            worst = Some(worst.map_or(d, |w: f64| w.max(d)));
        }
    }
    worst.ok_or_else(|| {
        Error::Argument(format!(
            "trajectory over [{}, {}] has no sample pair one period {period} apart",
            traj.times[0],
            traj.times.last().unwrap()
        ))
    })
}

/// `min_{t ∈ window} (‖u(t) - u(0)‖₂ + ‖u̇(t) - u̇(0)‖₂)`, normalized by the
/// initial norms. Infinite when no sample falls in the window.
pub fn recurrence_defect(traj: &Trajectory, window: (f64, f64)) -> f64 {
    let Some(s0) = traj.states.first() else {
        return f64::INFINITY;
    };
    let scale = match l2(&s0.u) + l2(&s0.v) {
        s if s > 0.0 => s,
        _ => 1.0,
    };
    traj.times
        .iter()
        .zip(&traj.states)
        .filter(|(t, _)| (window.0..=window.1).contains(*t))
        .map(|(_, s)| (l2(&(&s.u - &s0.u)) + l2(&(&s.v - &s0.v))) / scale)
        .fold(f64::INFINITY, f64::min)
}

/// Discrete sine coefficients `c_k = 2h Σ uᵢ sin(kπxᵢ)`, `k = 1..N-1`.
pub fn sine_coefficients(u: &GridFunction) -> Vec<f64> {
    let grid = u.grid();
    let n = grid.n_cells();
    let h = grid.h();
    let vals = u.values();
    (1..n)
        .map(|k| {
            let w = k as f64 * PI * h;
            2.0 * h * (1..n).map(|i| vals[i] * (w * i as f64).sin()).sum::<f64>()
        })
        .collect()
}

/// Slope of `log|c_k|` against `log k` for `k ≤ max(N/4, 2)`.
///
/// The coefficients are replaced by their decreasing envelope (so symmetric
/// data with vanishing even modes is not penalized) and clamped from below at
/// `1e-14·max|c|`; the fit stops at the first clamped value.
pub fn sine_decay_exponent(u: &GridFunction) -> f64 {
    let c = sine_coefficients(u);
    let kmax = (u.grid().n_cells() / 4).max(2).min(c.len());
    let mut env: Vec<f64> = c[..kmax].iter().map(|v| v.abs()).collect();
    for k in (0..kmax.saturating_sub(1)).rev() {
        env[k] = env[k].max(env[k + 1]);
    }
    let top = env.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return f64::NEG_INFINITY;
    }
    let floor = 1e-14 * top;
    let mut pts = Vec::with_capacity(kmax);
    for (i, &e) in env.iter().enumerate() {
        let clamped = e.max(floor);
        pts.push((((i + 1) as f64).ln(), clamped.ln()));
        if e <= floor {
            break;
        }
    }
    if pts.len() < 2 {
        return f64::NEG_INFINITY;
    }
    least_squares_slope(&pts)
}

/// Sine-decay exponent of `u(t)` at each recorded time.
pub fn smoothness_diagnostic(traj: &Trajectory) -> Vec<f64> {
    traj.states.iter().map(|s| sine_decay_exponent(&s.u)).collect()
}
