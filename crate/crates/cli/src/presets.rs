//! Fixed experiment table. Each preset is a parameter set plus a pipeline
//! whose verdicts can be recomputed from the emitted columns.

use std::fmt;
use std::str::FromStr;

use dynwave_core::dalembert::{boundary_flux_sine, miyadera_integral};
use dynwave_core::evolve::{closed_form_trace_solution, recurrence_defect};
use dynwave_core::grid::lp_norm;
use dynwave_core::spectral::{factorization_residual, spectral_equivalence_check, BoundaryClosure, Coupling};
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::{decay, initial_data, trajectory, trajectory_columns};
use crate::config::{resolve, Assignment, Command, RunConfig};
use crate::error::{CliError, Result};
use crate::experiment::ExperimentResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Preset {
    #[serde(rename = "prop73_3")]
    PeriodTwo,
    #[serde(rename = "prop73_2")]
    BoundedDissipative,
    #[serde(rename = "prop71_decay")]
    LiftDecay,
    #[serde(rename = "charroots_match")]
    CharRootsMatch,
    #[serde(rename = "blockformula")]
    BlockFormula,
    #[serde(rename = "acoustic1d")]
    Acoustic1d,
    #[serde(rename = "miyadera")]
    FluxSineIntegral,
    #[serde(rename = "factorization")]
    Factorization,
}

pub const ALL_PRESETS: [Preset; 8] = [
    Preset::PeriodTwo,
    Preset::BoundedDissipative,
    Preset::LiftDecay,
    Preset::CharRootsMatch,
    Preset::BlockFormula,
    Preset::Acoustic1d,
    Preset::FluxSineIntegral,
    Preset::Factorization,
];

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::PeriodTwo => "prop73_3",
            Preset::BoundedDissipative => "prop73_2",
            Preset::LiftDecay => "prop71_decay",
            Preset::CharRootsMatch => "charroots_match",
            Preset::BlockFormula => "blockformula",
            Preset::Acoustic1d => "acoustic1d",
            Preset::FluxSineIntegral => "miyadera",
            Preset::Factorization => "factorization",
        }
    }

    /// Loads the preset's parameters into `cfg`.
    pub fn configure(self, cfg: &mut RunConfig) {
        let s = &mut cfg.spec;
        let d = &mut cfg.data;
        match self {
            Preset::PeriodTwo => {
                d.f_modes = vec![0.0, 0.0, 1.0, 0.0, 0.5];
                cfg.t_final = 4.0;
                cfg.record_every = 10;
            }
            Preset::BoundedDissipative => {
                (s.alpha0, s.alpha1, s.beta0, s.beta1) = (1.0, -1.0, -1.0, -1.0);
                s.closure = BoundaryClosure::Conservative;
                (d.h0, d.h1) = (0.5, -0.5);
                d.f_modes = vec![0.5, 0.0, 0.3];
                cfg.t_final = 50.0;
            }
            Preset::LiftDecay => cfg.n = 20_000,
            Preset::CharRootsMatch => {
                (s.alpha0, s.alpha1, s.beta0, s.beta1) = (1.0, -1.0, -1.0, -1.0);
            }
            Preset::BlockFormula => {
                (d.h0, d.h1, d.j0, d.j1) = (0.5, -0.25, 0.3, 0.2);
                d.f_modes = vec![1.0, 0.3];
                d.g_modes = vec![0.0, 0.0, 0.5];
                cfg.t_final = 2.0;
                cfg.record_every = 50;
            }
            Preset::Acoustic1d => {
                s.coupling = Coupling::NormalDerivative;
                (s.ac_q0, s.ac_q1, s.ac_r0, s.ac_r1) = (-1.0, -1.0, -0.5, -0.5);
                d.f_modes = vec![1.0];
                (d.j0, d.j1) = (0.5, -0.5);
                cfg.t_final = 50.0;
            }
            Preset::FluxSineIntegral => {
                cfg.n = 4096;
                (s.alpha0, s.alpha1) = (1.0, 1.0);
                d.f_modes = vec![1.0];
            }
            Preset::Factorization => {
                cfg.n = 60;
                (s.alpha0, s.alpha1, s.beta0, s.beta1) = (1.0, -1.0, -1.0, -1.0);
            }
        }
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ALL_PRESETS
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset '{s}'"))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn l2(u: &dynwave_core::GridFunction) -> f64 {
    lp_norm(u, 2.0).expect("p = 2")
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

pub fn run_preset(preset: Preset, cfg: &RunConfig) -> Result<ExperimentResult> {
    let mut out = ExperimentResult::default();
    match preset {
        Preset::PeriodTwo => {
            let period = 2.0;
            let spec = cfg.problem()?;
            let traj = trajectory(cfg, &spec)?;
            let scale = l2(&traj.states[0].u).max(f64::MIN_POSITIVE);
            let (mut t0, mut defect) = (Vec::new(), Vec::new());
            for (i, &t) in traj.times.iter().enumerate() {
                if let Some(k) = traj.index_of(t + period) {
                    t0.push(t);
                    defect.push(l2(&(&traj.states[k].u - &traj.states[i].u)) / scale);
                }
            }
            if t0.is_empty() {
                return Err(CliError::Config(format!("T = {} does not cover one period", cfg.t_final)));
            }
            out.verdict("period2_defect", max_of(&defect), 5e-3)?;
            out.column("t0", t0);
            out.column("defect", defect);
        }
        Preset::BoundedDissipative => {
            let spec = cfg.problem()?;
            let traj = trajectory(cfg, &spec)?;
            let e0 = traj.energies[0];
            let drift = traj.energies.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max) / e0.abs().max(f64::MIN_POSITIVE);
            let l2s: Vec<f64> = traj.states.iter().map(|s| l2(&s.u)).collect();
            out.verdict("relative_energy_drift", drift, 1e-6)?;
            out.verdict("l2_growth", max_of(&l2s) / l2s[0], 1.1)?;
            let window = (10.0f64.min(cfg.t_final), 40.0f64.min(cfg.t_final));
            out.scalar("recurrence_defect", recurrence_defect(&traj, window))?;
            trajectory_columns(&traj, &mut out);
        }
        Preset::LiftDecay => {
            let r = decay(cfg)?;
            let slope = r.get("decay_slope").unwrap();
            out.scalar("decay_slope", slope)?;
            out.verdict("decay_slope_error", (slope + 0.5 / cfg.spec.p).abs(), 0.02)?;
            out.columns = r.columns;
        }
        Preset::CharRootsMatch => {
            let grid = cfg.grid()?;
            let report = spectral_equivalence_check(&cfg.problem()?, grid)?;
            if report.match_residuals.is_empty() {
                return Err(CliError::Config("no eigenvalue to match in the window".into()));
            }
            out.verdict("max_char_residual", report.max_residual(), 0.05)?;
            if !report.root_distances.is_empty() {
                out.verdict("max_root_distance", report.max_root_distance(), 0.05)?;
            }
            let roots: Vec<f64> = report.char_roots.iter().copied().filter(|r| *r <= -0.05).collect();
            let lambda = [report.matched_eigenvalues.clone(), roots.clone()].concat();
            let is_root = (0..lambda.len()).map(|i| (i >= report.matched_eigenvalues.len()) as u8 as f64).collect();
            out.column("lambda", lambda);
            out.column("is_root", is_root);
            out.column("measure", [report.match_residuals, report.root_distances].concat());
        }
        Preset::BlockFormula => {
            let spec = cfg.problem()?;
            if spec.coupling != Coupling::Trace || spec.has_flux_coupling() || spec.beta0 != 0.0 || spec.beta1 != 0.0 {
                return Err(CliError::Config("blockformula needs the decoupled trace problem (alpha = beta = 0)".into()));
            }
            let traj = trajectory(cfg, &spec)?;
            let (f, g) = initial_data(cfg, &spec)?;
            let (h, j) = cfg.boundary();
            let mut defect = Vec::with_capacity(traj.len());
            for (t, s) in traj.times.iter().zip(&traj.states) {
                let exact = closed_form_trace_solution(&f, &g, h, j, *t, spec.grid())?;
                defect.push((&s.u - &exact.u).max_abs());
            }
            out.verdict("max_defect", max_of(&defect), 1e-2)?;
            out.column("t", traj.times.clone());
            out.column("defect", defect);
        }
        Preset::Acoustic1d => {
            let spec = cfg.problem()?;
            let traj = trajectory(cfg, &spec)?;
            let l2s: Vec<f64> = traj.states.iter().map(|s| l2(&s.u)).collect();
            out.verdict("l2_growth", max_of(&l2s) / l2s[0], 1.2)?;
            trajectory_columns(&traj, &mut out);
        }
        Preset::FluxSineIntegral => {
            let grid = cfg.grid()?;
            let (a0, a1) = (cfg.spec.alpha0, cfg.spec.alpha1);
            let spec = cfg.problem()?;
            let (f, _) = initial_data(cfg, &spec)?;
            let integrand: Vec<f64> = grid.nodes().map(|s| boundary_flux_sine(&f, s, a0, a1).l1()).collect();
            let integral = miyadera_integral(&f, a0, a1);
            let expect = (a0.abs() + a1.abs()) * lp_norm(&f, 1.0)?;
            out.scalar("integral", integral)?;
            out.scalar("expected", expect)?;
            out.verdict("abs_error", (integral - expect).abs(), 1e-6)?;
            out.column("s", grid.nodes().collect());
            out.column("integrand", integrand);
        }
        Preset::Factorization => {
            let grid = cfg.grid()?;
            let spec = cfg.problem()?;
            let lambdas = vec![0.5, 1.0, -2.0];
            let residuals = lambdas
                .par_iter()
                .map(|l| factorization_residual(*l, &spec, grid))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            out.verdict("max_residual", max_of(&residuals), 1e-10)?;
            out.column("lambda", lambdas);
            out.column("residual", residuals);
        }
    }
    Ok(out)
}

/// Config of `preset` with its own defaults plus `extra` assignments.
pub fn preset_config(preset: Preset, extra: &[Assignment]) -> Result<RunConfig> {
    let mut all = vec![
        Assignment { origin: "preset".into(), key: "preset".into(), value: preset.name().into() },
        Assignment { origin: "preset".into(), key: "command".into(), value: Command::Verify.to_string() },
    ];
    all.extend_from_slice(extra);
    resolve(&all)
}

/// Every preset with its defaults, in table order.
pub fn run_all() -> Vec<(Preset, RunConfig, Result<ExperimentResult>)> {
    ALL_PRESETS
        .par_iter()
        .map(|&p| match preset_config(p, &[]) {
            Ok(cfg) => {
                let r = run_preset(p, &cfg);
                (p, cfg, r)
            }
            Err(e) => (p, RunConfig::default(), Err(e)),
        })
        .collect()
}
