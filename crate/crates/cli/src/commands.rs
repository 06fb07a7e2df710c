use std::f64::consts::PI;

use dynwave_core::dirichlet::{dirichlet_closed_form, dirichlet_norm, least_squares_slope, DirectionSampler};
use dynwave_core::evolve::{simulate_with, SimulationOptions, Trajectory};
use dynwave_core::grid::lp_norm;
use dynwave_core::spectral::{char_eval, char_roots, eigs, assemble, periodicity_condition_check, spectral_equivalence_check};
use dynwave_core::spectral::{Coupling, ProblemSpec};
use dynwave_core::{BoundaryPair, Grid, GridFunction};

use crate::config::{Command, RunConfig};
use crate::error::{CliError, Result};
use crate::experiment::ExperimentResult;
use crate::presets;

/// Runs the configured command.
pub fn run(cfg: &RunConfig) -> Result<ExperimentResult> {
    match cfg.command {
        Command::Simulate => simulate(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Charroots => charroots(cfg),
        Command::Decay => decay(cfg),
        Command::Verify => match cfg.preset {
            Some(p) => presets::run_preset(p, cfg),
            None => Err(CliError::Config("verify needs a preset (or use run_all)".into())),
        },
    }
}

fn series(grid: Grid, modes: &[f64], basis: fn(f64) -> f64) -> Result<GridFunction> {
    grid.sample(|x| {
        modes
            .iter()
            .enumerate()
            .map(|(k, a)| a * basis((k + 1) as f64 * PI * x))
            .sum()
    })
    .map_err(CliError::from)
}

/// Sine series, exactly zero at both ends (`sin kπ` is not).
fn sine_series(grid: Grid, modes: &[f64]) -> Result<GridFunction> {
    let mut v = series(grid, modes, f64::sin)?.into_values();
    let n = v.len() - 1;
    v[0] = 0.0;
    v[n] = 0.0;
    Ok(GridFunction::new(grid, v)?)
}

/// Quadratic with outward normal derivatives `(y₀, y₁)`.
fn flux_lift(grid: Grid, y: BoundaryPair) -> Result<GridFunction> {
    grid.sample(|x| -y.at0 * x + 0.5 * (y.at0 + y.at1) * x * x)
        .map_err(CliError::from)
}

/// Initial displacement and velocity built from the configured data.
pub fn initial_data(cfg: &RunConfig, spec: &ProblemSpec) -> Result<(GridFunction, GridFunction)> {
    let grid = spec.grid();
    let (h, j) = cfg.boundary();
    let d = &cfg.data;
    Ok(match spec.coupling {
        Coupling::Trace => {
            let lh = dirichlet_closed_form(0.0, h, grid)?.profile;
            let lj = dirichlet_closed_form(0.0, j, grid)?.profile;
            (&lh + &sine_series(grid, &d.f_modes)?, &lj + &sine_series(grid, &d.g_modes)?)
        }
        // j is the flux velocity; the displacement velocity is unconstrained
        Coupling::NormalDerivative => (
            &flux_lift(grid, h)? + &series(grid, &d.f_modes, f64::cos)?,
            series(grid, &d.g_modes, f64::cos)?,
        ),
    })
}

pub fn trajectory(cfg: &RunConfig, spec: &ProblemSpec) -> Result<Trajectory> {
    let (f, g) = initial_data(cfg, spec)?;
    let (h, j) = cfg.boundary();
    let opts = SimulationOptions { record_every: cfg.record_every };
    Ok(simulate_with(spec, spec.grid(), &f, &g, h, j, cfg.t_final, cfg.dt, opts)?)
}

/// Columns `t, energy, l2_norm, trace0, trace1`.
pub fn trajectory_columns(traj: &Trajectory, out: &mut ExperimentResult) {
    let l2: Vec<f64> = traj.states.iter().map(|s| lp_norm(&s.u, 2.0).expect("p = 2")).collect();
    out.column("t", traj.times.clone());
    out.column("energy", traj.energies.clone());
    out.column("l2_norm", l2);
    out.column("trace0", traj.states.iter().map(|s| s.x.at0).collect());
    out.column("trace1", traj.states.iter().map(|s| s.x.at1).collect());
}

fn simulate(cfg: &RunConfig) -> Result<ExperimentResult> {
    let spec = cfg.problem()?;
    let traj = trajectory(cfg, &spec)?;
    let mut out = ExperimentResult::default();
    out.scalar("steps", (traj.step_energies.len() - 1) as f64)?;
    out.scalar("final_time", *traj.times.last().unwrap())?;
    out.scalar("relative_energy_drift", traj.relative_energy_drift())?;
    out.scalar("max_energy_increase", traj.max_energy_increase())?;
    let l2_max = traj.step_l2.iter().copied().fold(0.0, f64::max);
    if traj.step_l2[0] > 0.0 {
        out.scalar("l2_growth", l2_max / traj.step_l2[0])?;
    }
    trajectory_columns(&traj, &mut out);
    Ok(out)
}

fn spectrum(cfg: &RunConfig) -> Result<ExperimentResult> {
    let grid = cfg.grid()?;
    let spec = cfg.problem()?;
    let mut out = ExperimentResult::default();
    let ev = if spec.coupling == Coupling::Trace {
        let report = spectral_equivalence_check(&spec, grid)?;
        out.scalar("matched_eigenvalues", report.matched_eigenvalues.len() as f64)?;
        if !report.match_residuals.is_empty() {
            out.scalar("max_char_residual", report.max_residual())?;
        }
        if !report.root_distances.is_empty() {
            out.scalar("max_root_distance", report.max_root_distance())?;
        }
        if let Some(gamma) = report.gamma_periodic {
            out.scalar("gamma_periodic", gamma)?;
        }
        report.eigenvalues
    } else {
        eigs(&assemble(&spec, grid)?)?
    };
    out.scalar("dim", ev.len() as f64)?;
    out.scalar("max_real_part", ev.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))?;
    out.column("index", (0..ev.len()).map(|i| i as f64).collect());
    out.column("re", ev.iter().map(|z| z.re).collect());
    out.column("im", ev.iter().map(|z| z.im).collect());
    Ok(out)
}

fn charroots(cfg: &RunConfig) -> Result<ExperimentResult> {
    let s = &cfg.spec;
    let roots = char_roots(s.beta0, s.beta1, cfg.lambda_min, cfg.lambda_max);
    let residuals = roots
        .iter()
        .map(|r| char_eval(*r, s.beta0, s.beta1).map(f64::abs))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut out = ExperimentResult::default();
    out.scalar("count", roots.len() as f64)?;
    if let Some(gamma) = (1..=10)
        .map(|k| 2.0 * k as f64)
        .find(|&g| !roots.is_empty() && periodicity_condition_check(&roots, g, 1e-6, true))
    {
        out.scalar("gamma_periodic", gamma)?;
    }
    out.column("index", (0..roots.len()).map(|i| i as f64).collect());
    out.column("root", roots);
    out.column("residual", residuals);
    Ok(out)
}

/// `‖D_λ‖` over the configured λ values and the log-log slope.
pub fn decay(cfg: &RunConfig) -> Result<ExperimentResult> {
    let grid = cfg.grid()?;
    let sampler = DirectionSampler { n_directions: cfg.directions, seed: cfg.seed };
    let norms = cfg
        .lambdas
        .iter()
        .map(|l| dirichlet_norm(*l, cfg.spec.p, grid, sampler))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let pts: Vec<(f64, f64)> = cfg.lambdas.iter().zip(&norms).map(|(l, n)| (l.ln(), n.ln())).collect();
    let mut out = ExperimentResult::default();
    out.scalar("decay_slope", least_squares_slope(&pts))?;
    out.scalar("expected_slope", -0.5 / cfg.spec.p)?;
    out.column("lambda", cfg.lambdas.clone());
    out.column("norm", norms);
    Ok(out)
}
