//! `key=value` run configuration.

use std::fmt;
use std::str::FromStr;

use dynwave_core::spectral::{BoundaryClosure, Coupling, ProblemSpec, MAX_DENSE_DIM};
use dynwave_core::{BoundaryPair, Grid, GridFunction};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::presets::Preset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Simulate,
    Spectrum,
    Charroots,
    Decay,
    Verify,
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Command as clap::ValueEnum>::from_str(s, false)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).map_err(|_| fmt::Error)?;
        f.write_str(s.as_str().unwrap_or_default())
    }
}

/// Coefficients of the coupled problem. `q` and `r` are constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecParams {
    pub coupling: Coupling,
    pub closure: BoundaryClosure,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub damp_c0: f64,
    pub damp_c1: f64,
    pub damp_ct0: f64,
    pub damp_ct1: f64,
    pub ac_p0: f64,
    pub ac_p1: f64,
    pub ac_q0: f64,
    pub ac_q1: f64,
    pub ac_r0: f64,
    pub ac_r1: f64,
}

impl Default for SpecParams {
    fn default() -> Self {
        SpecParams {
            coupling: Coupling::Trace,
            closure: BoundaryClosure::OneSided,
            p: 2.0,
            q: 0.0,
            r: 0.0,
            alpha0: 0.0,
            alpha1: 0.0,
            beta0: 0.0,
            beta1: 0.0,
            damp_c0: 0.0,
            damp_c1: 0.0,
            damp_ct0: 0.0,
            damp_ct1: 0.0,
            ac_p0: 0.0,
            ac_p1: 0.0,
            ac_q0: 0.0,
            ac_q1: 0.0,
            ac_r0: 0.0,
            ac_r1: 0.0,
        }
    }
}

impl SpecParams {
    pub fn to_spec(&self, grid: Grid) -> Result<ProblemSpec> {
        let constant = |c: f64| GridFunction::constant(grid, c).map_err(CliError::from);
        let mut spec = ProblemSpec::new(grid)
            .with_alpha(self.alpha0, self.alpha1)
            .with_beta(self.beta0, self.beta1)
            .with_closure(self.closure)
            .with_coefficients(constant(self.q)?, constant(self.r)?)
            .with_trace_damping([self.damp_c0, self.damp_c1], [self.damp_ct0, self.damp_ct1])
            .with_acoustic([self.ac_p0, self.ac_p1], [self.ac_q0, self.ac_q1], [self.ac_r0, self.ac_r1]);
        spec.coupling = self.coupling;
        spec.lp_exponent = self.p;
        spec.validate(grid)?;
        Ok(spec)
    }
}

/// Initial data, built so the compatibility conditions hold by construction.
///
/// Trace mode: `f = D₀h + Σ aₖ sin kπx`, `g = D₀j + Σ bₖ sin kπx`.
/// Normal-derivative mode: `f = ψ_h + Σ aₖ cos kπx` with `ψ_h` a quadratic
/// with outward fluxes `h`, `g = Σ bₖ cos kπx`, and `j` the flux velocity.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct InitialData {
    pub f_modes: Vec<f64>,
    pub g_modes: Vec<f64>,
    pub h0: f64,
    pub h1: f64,
    pub j0: f64,
    pub j1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub preset: Option<Preset>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub dt: f64,
    pub record_every: usize,
    pub output: Option<String>,
    pub seed: u64,
    pub directions: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambdas: Vec<f64>,
    pub spec: SpecParams,
    pub data: InitialData,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Simulate,
            preset: None,
            n: 200,
            t_final: 10.0,
            dt: 0.0025,
            record_every: 1,
            output: None,
            seed: 0,
            directions: 16,
            lambda_min: -50.0,
            lambda_max: 0.0,
            lambdas: vec![1e2, 1e3, 1e4, 1e5, 1e6],
            spec: SpecParams::default(),
            data: InitialData::default(),
        }
    }
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n).map_err(CliError::from)
    }

    pub fn problem(&self) -> Result<ProblemSpec> {
        self.spec.to_spec(self.grid()?)
    }

    pub fn boundary(&self) -> (BoundaryPair, BoundaryPair) {
        let d = &self.data;
        (BoundaryPair::new(d.h0, d.h1), BoundaryPair::new(d.j0, d.j1))
    }
}

/// A `key=value` assignment and where it came from, for error messages.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub origin: String,
    pub key: String,
    pub value: String,
}

/// Splits config text into assignments. Blank lines and `#` comments are
/// skipped.
pub fn tokenize(text: &str) -> Result<Vec<Assignment>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let origin = format!("line {}", i + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{origin}: expected key=value, got '{line}'")))?;
        out.push(Assignment { origin, key: key.trim().to_string(), value: value.trim().to_string() });
    }
    Ok(out)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    resolve(&tokenize(text)?)
}

fn number<T: FromStr>(a: &Assignment) -> Result<T> {
    a.value
        .parse()
        .map_err(|_| CliError::Config(format!("{}: cannot parse '{}' for {}", a.origin, a.value, a.key)))
}

fn real(a: &Assignment) -> Result<f64> {
    let v: f64 = number(a)?;
    if !v.is_finite() {
        return Err(CliError::Config(format!("{}: {} must be finite", a.origin, a.key)));
    }
    Ok(v)
}

fn list(a: &Assignment) -> Result<Vec<f64>> {
    if a.value.is_empty() {
        return Ok(Vec::new());
    }
    a.value
        .split(',')
        .map(|s| {
            let piece = Assignment { value: s.trim().to_string(), ..a.clone() };
            real(&piece)
        })
        .collect()
}

fn apply(cfg: &mut RunConfig, a: &Assignment, dt_set: &mut bool) -> Result<()> {
    let bad = |what: &str| CliError::Config(format!("{}: {what}", a.origin));
    let s = &mut cfg.spec;
    let d = &mut cfg.data;
    match a.key.as_str() {
        "command" => cfg.command = a.value.parse().map_err(|_| bad(&format!("unknown command '{}'", a.value)))?,
        "preset" => {} // applied first
        "N" => cfg.n = number(a)?,
        "T" => cfg.t_final = real(a)?,
        "dt" => {
            cfg.dt = real(a)?;
            *dt_set = true;
        }
        "record_every" => cfg.record_every = number(a)?,
        "output" => cfg.output = Some(a.value.clone()),
        "seed" => cfg.seed = number(a)?,
        "directions" => cfg.directions = number(a)?,
        "lambda_min" => cfg.lambda_min = real(a)?,
        "lambda_max" => cfg.lambda_max = real(a)?,
        "lambdas" => cfg.lambdas = list(a)?,
        "coupling" => {
            s.coupling = match a.value.as_str() {
                "trace" => Coupling::Trace,
                "normal_derivative" | "acoustic" => Coupling::NormalDerivative,
                other => return Err(bad(&format!("unknown coupling '{other}'"))),
            }
        }
        "closure" => {
            s.closure = match a.value.as_str() {
                "one_sided" => BoundaryClosure::OneSided,
                "conservative" => BoundaryClosure::Conservative,
                other => return Err(bad(&format!("unknown closure '{other}'"))),
            }
        }
        "p" | "lp_exponent" => s.p = real(a)?,
        "q" => s.q = real(a)?,
        "r" => s.r = real(a)?,
        "alpha0" => s.alpha0 = real(a)?,
        "alpha1" => s.alpha1 = real(a)?,
        "beta0" => s.beta0 = real(a)?,
        "beta1" => s.beta1 = real(a)?,
        "damp_c0" => s.damp_c0 = real(a)?,
        "damp_c1" => s.damp_c1 = real(a)?,
        "damp_ct0" => s.damp_ct0 = real(a)?,
        "damp_ct1" => s.damp_ct1 = real(a)?,
        "ac_p0" => s.ac_p0 = real(a)?,
        "ac_p1" => s.ac_p1 = real(a)?,
        "ac_q0" => s.ac_q0 = real(a)?,
        "ac_q1" => s.ac_q1 = real(a)?,
        "ac_r0" => s.ac_r0 = real(a)?,
        "ac_r1" => s.ac_r1 = real(a)?,
        "f_modes" => d.f_modes = list(a)?,
        "g_modes" => d.g_modes = list(a)?,
        "h0" => d.h0 = real(a)?,
        "h1" => d.h1 = real(a)?,
        "j0" => d.j0 = real(a)?,
        "j1" => d.j1 = real(a)?,
        other => return Err(bad(&format!("unknown key '{other}'"))),
    }
    Ok(())
}

/// Builds a validated config: preset defaults first, then the assignments
/// in order, so later assignments win.
pub fn resolve(assignments: &[Assignment]) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut dt_set = false;
    if let Some(a) = assignments.iter().rev().find(|a| a.key == "preset") {
        let preset: Preset = a
            .value
            .parse()
            .map_err(|_| CliError::Config(format!("{}: unknown preset '{}'", a.origin, a.value)))?;
        preset.configure(&mut cfg);
        cfg.preset = Some(preset);
    }
    for a in assignments {
        apply(&mut cfg, a, &mut dt_set)?;
    }
    if !dt_set {
        cfg.dt = 0.5 / cfg.n.max(1) as f64;
    }
    validate(&cfg, assignments)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig, assignments: &[Assignment]) -> Result<()> {
    // name the line that set the offending key, when there is one
    let at = |key: &str| {
        assignments
            .iter()
            .rev()
            .find(|a| a.key == key)
            .map(|a| format!("{}: ", a.origin))
            .unwrap_or_default()
    };
    let fail = |key: &str, msg: String| Err(CliError::Config(format!("{}{msg}", at(key))));
    if cfg.n < 4 {
        return fail("N", format!("N must be at least 4, got {}", cfg.n));
    }
    if cfg.n > 1_000_000 {
        return fail("N", format!("N must be at most 1000000, got {}", cfg.n));
    }
    if cfg.command == Command::Spectrum && cfg.n + 3 > MAX_DENSE_DIM {
        return fail("N", format!("spectrum needs N + 3 <= {MAX_DENSE_DIM}, got N = {}", cfg.n));
    }
    if !(cfg.t_final > 0.0) {
        return fail("T", format!("T must be positive, got {}", cfg.t_final));
    }
    let h = 1.0 / cfg.n as f64;
    if !(cfg.dt > 0.0 && cfg.dt <= 0.5 * h * (1.0 + 1e-12)) {
        return fail("dt", format!("dt must lie in (0, h/2] = (0, {}], got {}", 0.5 * h, cfg.dt));
    }
    if cfg.record_every == 0 {
        return fail("record_every", "record_every must be at least 1".into());
    }
    if cfg.directions < 8 {
        return fail("directions", format!("directions must be at least 8, got {}", cfg.directions));
    }
    if !(cfg.spec.p >= 1.0) {
        return fail("p", format!("p must be at least 1, got {}", cfg.spec.p));
    }
    if cfg.lambda_min >= cfg.lambda_max {
        return fail("lambda_min", "lambda_min must be below lambda_max".into());
    }
    if cfg.lambdas.len() < 3
        || cfg.lambdas.iter().any(|l| *l <= 0.0)
        || cfg.lambdas.windows(2).any(|w| w[1] <= w[0])
    {
        return fail("lambdas", "lambdas must be at least three positive increasing values".into());
    }
    let grid = cfg.grid()?;
    cfg.spec
        .to_spec(grid)
        .map_err(|e| CliError::Config(format!("{}{e}", at("closure"))))?;
    Ok(())
}
