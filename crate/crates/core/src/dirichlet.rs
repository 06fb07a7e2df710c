//! Dirichlet lifting operators `D_λ`: boundary data to the profile in
//! `ker(λ - A)` carrying that data as its trace.
//!
//! For the pure second derivative the lift has a closed form built from
//! `sinh(√λ s)` (`λ > 0`), the linear interpolant (`λ = 0`) or `sin(√-λ s)`
//! (`λ < 0`). With first- and zeroth-order coefficients the lift is computed
//! by a tridiagonal solve of the discrete operator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{lp_norm, BoundaryPair, Grid, GridFunction};
use crate::tridiag;

/// Radius of the exclusion zone around the poles `-k²π²`.
pub const POLE_GUARD: f64 = 1e-8;

/// Result of lifting boundary data.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletEvaluation {
    pub lambda: f64,
    pub boundary: BoundaryPair,
    pub profile: GridFunction,
}

/// Nearest `k ≥ 1` with `|λ + k²π²| < POLE_GUARD`, if any.
pub fn dirichlet_pole_near(lambda: f64) -> Option<u64> {
    if lambda >= 0.0 {
        return None;
    }
    let sigma = (-lambda).sqrt();
    let k = (sigma / std::f64::consts::PI).round().max(1.0);
    let pole = -(k * std::f64::consts::PI).powi(2);
    ((lambda - pole).abs() < POLE_GUARD).then_some(k as u64)
}

/// `sinh(a s) / sinh(a)` without overflow for large `a`.
fn sinh_ratio(a: f64, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    (a * (s - 1.0)).exp() * (-(-2.0 * a * s).exp_m1()) / (-(-2.0 * a).exp_m1())
}

/// Closed-form lift for `A = d²/dx²`.
pub fn dirichlet_closed_form(lambda: f64, y: BoundaryPair, grid: Grid) -> Result<DirichletEvaluation> {
    if !lambda.is_finite() || !y.is_finite() {
        return Err(Error::Domain("non-finite spectral parameter or boundary data".into()));
    }
    if let Some(k) = dirichlet_pole_near(lambda) {
        return Err(Error::Singular(format!(
            "lambda = {lambda} lies within {POLE_GUARD:e} of the Dirichlet eigenvalue -({k}π)²"
        )));
    }
    let mut values: Vec<f64> = if lambda > 0.0 {
        let a = lambda.sqrt();
        grid.nodes()
            .map(|s| y.at0 * sinh_ratio(a, 1.0 - s) + y.at1 * sinh_ratio(a, s))
            .collect()
    } else if lambda == 0.0 {
        grid.nodes().map(|s| y.at0 * (1.0 - s) + y.at1 * s).collect()
    } else {
        let sigma = (-lambda).sqrt();
        let denom = sigma.sin();
        grid.nodes()
            .map(|s| (y.at0 * (sigma * (1.0 - s)).sin() + y.at1 * (sigma * s).sin()) / denom)
            .collect()
    };
    let n = grid.n_cells();
    values[0] = y.at0;
    values[n] = y.at1;
    Ok(DirichletEvaluation {
        lambda,
        boundary: y,
        profile: GridFunction::new(grid, values)?,
    })
}

/// Lift through the discrete operator
/// `A_h u = (u_{i+1} - 2u_i + u_{i-1})/h² + q_i (u_{i+1} - u_{i-1})/(2h) + r_i u_i`.
pub fn discrete_dirichlet(
    lambda: f64,
    y: BoundaryPair,
    grid: Grid,
    q: &GridFunction,
    r: &GridFunction,
) -> Result<DirichletEvaluation> {
    if q.grid() != grid || r.grid() != grid {
        return Err(Error::Argument("coefficient grid does not match".into()));
    }
    if !lambda.is_finite() || !y.is_finite() {
        return Err(Error::Domain("non-finite spectral parameter or boundary data".into()));
    }
    let n = grid.n_cells();
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    let inv_2h = 0.5 / h;
    let m = n - 1;
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for i in 1..n {
        let row = i - 1;
        let west = inv_h2 - q.at(i) * inv_2h;
        let east = inv_h2 + q.at(i) * inv_2h;
        lower[row] = -west;
        diag[row] = lambda + 2.0 * inv_h2 - r.at(i);
        upper[row] = -east;
        if i == 1 {
            rhs[row] += west * y.at0;
        }
        if i == n - 1 {
            rhs[row] += east * y.at1;
        }
    }
    let interior = tridiag::solve(&lower, &diag, &upper, &rhs).map_err(|_| {
        Error::Singular(format!("lambda = {lambda} is (numerically) a discrete Dirichlet eigenvalue"))
    })?;
    let mut values = Vec::with_capacity(n + 1);
    values.push(y.at0);
    values.extend(interior);
    values.push(y.at1);
    Ok(DirichletEvaluation {
        lambda,
        boundary: y,
        profile: GridFunction::new(grid, values)?,
    })
}

/// Unit directions on the l1 circle of the boundary space. Seed 0 gives the
/// equispaced set through the four vertices; other seeds rotate it by a
/// random phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectionSampler {
    pub n_directions: usize,
    pub seed: u64,
}

impl Default for DirectionSampler {
    fn default() -> Self {
        DirectionSampler { n_directions: 16, seed: 0 }
    }
}

impl DirectionSampler {
    pub fn directions(&self) -> Vec<BoundaryPair> {
        let n = self.n_directions;
        let step = std::f64::consts::TAU / n as f64;
        let offset = if self.seed == 0 {
            0.0
        } else {
            ChaCha8Rng::seed_from_u64(self.seed).random::<f64>() * step
        };
        (0..n)
            .map(|k| {
                let theta = offset + step * k as f64;
                let (s, c) = theta.sin_cos();
                BoundaryPair::new(c, s).scale(1.0 / (c.abs() + s.abs()))
            })
            .collect()
    }
}

/// Sampled operator norm of `D_λ : (R², l1) → L^p(0,1)`, for `A = d²/dx²`.
pub fn dirichlet_norm(lambda: f64, p: f64, grid: Grid, sampler: DirectionSampler) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Argument(format!("dirichlet_norm needs lambda > 0, got {lambda}")));
    }
    if sampler.n_directions < 8 {
        return Err(Error::Argument("at least 8 sample directions are required".into()));
    }
    let mut best = 0.0f64;
    for y in sampler.directions() {
        let d = dirichlet_closed_form(lambda, y, grid)?;
        best = best.max(lp_norm(&d.profile, p)?);
    }
    Ok(best)
}

/// Least-squares slope of `log ‖D_λ‖` against `log λ`.
pub fn decay_exponent_fit(p: f64, lambdas: &[f64], grid: Grid) -> Result<f64> {
    decay_exponent_fit_with(p, lambdas, grid, DirectionSampler::default())
}

pub fn decay_exponent_fit_with(
    p: f64,
    lambdas: &[f64],
    grid: Grid,
    sampler: DirectionSampler,
) -> Result<f64> {
    if lambdas.len() < 3 {
        return Err(Error::Argument(format!(
            "decay fit needs at least 3 spectral parameters, got {}",
            lambdas.len()
        )));
    }
    if lambdas.iter().any(|l| !(*l > 0.0)) || lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Argument("spectral parameters must be positive and increasing".into()));
    }
    if lambdas[lambdas.len() - 1] / lambdas[0] < 1e3 * (1.0 - 1e-12) {
        return Err(Error::Argument("spectral parameters must span at least three decades".into()));
    }
    let mut pts = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        pts.push((l.ln(), dirichlet_norm(l, p, grid, sampler)?.ln()));
    }
    Ok(least_squares_slope(&pts))
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
