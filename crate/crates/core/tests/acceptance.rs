//! Acceptance criteria 1-11. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dynwave_core::dalembert::{cosine_apply, miyadera_integral, sine_apply};
use dynwave_core::dirichlet::{decay_exponent_fit, dirichlet_closed_form};
use dynwave_core::evolve::{
    closed_form_trace_solution, closed_form_trajectory, periodicity_defect, simulate_with, smoothness_diagnostic,
    SimulationOptions, Trajectory,
};
use dynwave_core::grid::lp_norm;
use dynwave_core::spectral::{
    assemble, discrete_dirichlet_spectrum, eigenvalues, factorization_residual, spectral_equivalence_check,
    BoundaryClosure, ProblemSpec,
};
use dynwave_core::{BoundaryPair, Grid, GridFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<Vec<Check>, String>;

/// One measured quantity against its bound.
struct Check {
    label: String,
    value: f64,
    pass: bool,
}

fn le(label: impl Into<String>, value: f64, bound: f64) -> Check {
    Check { label: format!("{} <= {bound:.1e}", label.into()), value, pass: value <= bound }
}

/// Reported but not judged.
fn info(label: impl Into<String>, value: f64) -> Check {
    Check { label: format!("{} (info)", label.into()), value, pass: true }
}

fn within(label: impl Into<String>, value: f64, lo: f64, hi: f64) -> Check {
    Check { label: format!("{} in [{lo}, {hi}]", label.into()), value, pass: (lo..=hi).contains(&value) }
}

fn grid(n: usize) -> Grid {
    Grid::new(n).unwrap()
}

fn l2(f: &GridFunction) -> f64 {
    lp_norm(f, 2.0).unwrap()
}

fn trajectory(spec: &ProblemSpec, f: &GridFunction, g: &GridFunction, h: BoundaryPair, j: BoundaryPair, t: f64, every: usize)
    -> Result<Trajectory, String> {
    let grid = spec.grid();
    simulate_with(spec, grid, f, g, h, j, t, 0.5 * grid.h(), SimulationOptions { record_every: every })
        .map_err(|e| e.to_string())
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// 1
fn period_two() -> Outcome {
    let data = |n: usize| {
        let g = grid(n);
        let f = g.sample(|x| (3.0 * PI * x).sin() + 0.5 * (5.0 * PI * x).sin()).unwrap();
        let v = g.sample(|x| x * (1.0 - x)).unwrap();
        (g, f, v)
    };
    let (g, f, v) = data(200);
    let times: Vec<f64> = (0..=80).map(|k| k as f64 * 0.05).collect();
    let kernel = closed_form_trajectory(&f, &v, BoundaryPair::ZERO, BoundaryPair::ZERO, &times, g).map_err(err)?;
    let exact = periodicity_defect(&kernel, 2.0).map_err(err)?;

    let leapfrog = |n: usize| -> Result<f64, String> {
        let (g, f, v) = data(n);
        let traj = trajectory(&ProblemSpec::new(g), &f, &v, BoundaryPair::ZERO, BoundaryPair::ZERO, 4.0, n / 20)?;
        periodicity_defect(&traj, 2.0).map_err(err)
    };
    let (d200, d400) = (leapfrog(200)?, leapfrog(400)?);
    Ok(vec![
        le("kernel defect", exact, 1e-12),
        le("leapfrog defect N=200", d200, 5e-3),
        within("refinement ratio 200/400", d200 / d400, 3.0, 5.0),
    ])
}

// 2
fn dirichlet_spectrum() -> Outcome {
    let n = 400;
    let g = grid(n);
    let m = assemble(&ProblemSpec::new(g), g).map_err(err)?;
    let ev = eigenvalues(&m.interior_block()).map_err(err)?;
    let mut top: Vec<f64> = ev.iter().map(|z| z.re).collect();
    top.sort_by(|a, b| b.total_cmp(a));
    let mut discrete = discrete_dirichlet_spectrum(n);
    discrete.sort_by(|a, b| b.total_cmp(a));
    let mut rel_exact: f64 = 0.0;
    let mut rel_discrete: f64 = 0.0;
    for k in 0..5 {
        let exact = -((k + 1) as f64 * PI).powi(2);
        rel_exact = rel_exact.max(((top[k] - exact) / exact).abs());
        rel_discrete = rel_discrete.max(((top[k] - discrete[k]) / discrete[k]).abs());
    }
    Ok(vec![
        le("first five vs -k²π², relative", rel_exact, 2e-3),
        le("vs discrete closed form, relative", rel_discrete, 1e-8),
    ])
}

// 3
fn characteristic_match() -> Outcome {
    let report = |n: usize| {
        let g = grid(n);
        spectral_equivalence_check(&ProblemSpec::dissipative(g, -1.0, -1.0), g).map_err(err)
    };
    let (r200, r400) = (report(200)?, report(400)?);
    if r200.matched_eigenvalues.is_empty() || r200.root_distances.is_empty() {
        return Err("nothing to match".into());
    }
    Ok(vec![
        le("max |char(λ)| N=200", r200.max_residual(), 0.05),
        within("residual ratio 200/400", r200.max_residual() / r400.max_residual(), 3.0, 5.0),
        le("max root-to-eigenvalue distance N=200", r200.max_root_distance(), 0.05),
    ])
}

// 4
fn decay_fit() -> Outcome {
    let g = grid(20_000);
    let lambdas = [1e2, 1e3, 1e4, 1e5, 1e6];
    let mut checks = Vec::new();
    for p in [1.0, 2.0, 4.0] {
        let slope = decay_exponent_fit(p, &lambdas, g).map_err(err)?;
        checks.push(le(format!("|slope + 1/(2p)| at p={p}"), (slope + 0.5 / p).abs(), 0.02));
    }
    Ok(checks)
}

// 5
fn miyadera() -> Outcome {
    let g = grid(4096);
    let f = g.sample(|x| (PI * x).sin()).unwrap();
    Ok([(1.0, 1.0), (3.0, 0.0), (2.0, -5.0)]
        .into_iter()
        .map(|(a0, a1): (f64, f64)| {
            let expect = (a0.abs() + a1.abs()) * 2.0 / PI;
            le(format!("error at α=({a0},{a1})"), (miyadera_integral(&f, a0, a1) - expect).abs(), 1e-6)
        })
        .collect())
}

// 6
fn factorization() -> Outcome {
    let g = grid(60);
    let sets = [
        ("dissipative", ProblemSpec::dissipative(g, -1.0, -1.0)),
        (
            "one-sided with q, r",
            ProblemSpec::new(g)
                .with_alpha(2.0, 0.5)
                .with_beta(0.3, -1.5)
                .with_coefficients(g.sample(|x| x).unwrap(), g.sample(|x| x * x - 1.0).unwrap()),
        ),
        (
            "conservative with q, r",
            ProblemSpec::dissipative(g, -0.5, -2.0)
                .with_closure(BoundaryClosure::Conservative)
                .with_coefficients(g.sample(|x| 0.5 * (PI * x).sin()).unwrap(), GridFunction::constant(g, -2.0).unwrap()),
        ),
    ];
    let mut checks = Vec::new();
    for (name, spec) in &sets {
        for lambda in [0.5, 1.0, -2.0] {
            let r = factorization_residual(lambda, spec, g).map_err(err)?;
            checks.push(le(format!("{name}, λ={lambda}"), r, 1e-10));
        }
    }
    Ok(checks)
}

// 7
fn block_formula() -> Outcome {
    let h = BoundaryPair::new(0.5, -0.25);
    let j = BoundaryPair::new(0.3, 0.2);
    let sample_times: Vec<f64> = (1..=8).map(|k| k as f64 * 0.25).collect();
    let defect = |n: usize| -> Result<f64, String> {
        let g = grid(n);
        let d0h = dirichlet_closed_form(0.0, h, g).map_err(err)?.profile;
        let d0j = dirichlet_closed_form(0.0, j, g).map_err(err)?.profile;
        let f = &d0h + &g.sample(|x| (PI * x).sin() + 0.3 * (2.0 * PI * x).sin()).unwrap();
        let v = &d0j + &g.sample(|x| 0.5 * (3.0 * PI * x).sin()).unwrap();
        let traj = trajectory(&ProblemSpec::new(g), &f, &v, h, j, 2.0, n / 50)?;
        let mut worst: f64 = 0.0;
        for &t in &sample_times {
            let sim = traj.state_at(t).ok_or("missing sample")?;
            let cf = closed_form_trace_solution(&f, &v, h, j, t, g).map_err(err)?;
            worst = worst.max((&sim.u - &cf.u).max_abs());
        }
        Ok(worst)
    };
    let (e200, e400) = (defect(200)?, defect(400)?);

    // linear growth: f = D₀h with h = 0, g = D₀j, j = (1, 0)
    let g = grid(200);
    let j1 = BoundaryPair::new(1.0, 0.0);
    let d0j = dirichlet_closed_form(0.0, j1, g).map_err(err)?.profile;
    let target = l2(&d0j);
    let growth_times: Vec<f64> = (20..=80).map(|k| k as f64 * 0.25).collect();
    let mut pts = Vec::new();
    for &t in &growth_times {
        let s = closed_form_trace_solution(&g.zeros(), &d0j, BoundaryPair::ZERO, j1, t, g).map_err(err)?;
        pts.push((t, l2(&s.u)));
    }
    let slope_cf = slope(&pts);
    let traj = trajectory(&ProblemSpec::new(g), &g.zeros(), &d0j, BoundaryPair::ZERO, j1, 20.0, 50)?;
    let pts: Vec<(f64, f64)> = growth_times.iter().map(|&t| (t, l2(&traj.state_at(t).unwrap().u))).collect();
    let slope_sim = slope(&pts);

    // j = 0: bounded
    let hb = BoundaryPair::new(1.0, 0.5);
    let d0h = dirichlet_closed_form(0.0, hb, g).map_err(err)?.profile;
    let f = &d0h + &g.sample(|x| 0.2 * (2.0 * PI * x).sin()).unwrap();
    let traj = trajectory(&ProblemSpec::new(g), &f, &g.zeros(), hb, BoundaryPair::ZERO, 50.0, 1)?;
    let n0 = traj.step_l2[0];
    let band = traj.step_l2.iter().map(|v| (v / n0 - 1.0).abs()).fold(0.0, f64::max);

    Ok(vec![
        le("closed form vs leapfrog N=200", e200, 1e-2),
        within("observed order", (e200 / e400).log2(), 1.7, 2.3),
        le("closed-form growth slope relative error", (slope_cf / target - 1.0).abs(), 0.05),
        le("leapfrog growth slope relative error", (slope_sim / target - 1.0).abs(), 0.05),
        le("j=0: max |‖u(t)‖/‖u(0)‖ - 1|", band, 0.1),
    ])
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

// 8
fn energy() -> Outcome {
    let g = grid(400);
    let undamped = ProblemSpec::dissipative(g, -1.0, -0.5)
        .with_closure(BoundaryClosure::Conservative)
        .with_coefficients(g.zeros(), GridFunction::constant(g, -1.0).unwrap());
    let damped = undamped.clone().with_trace_damping([0.0, 0.0], [-1.0, -1.0]);
    let f = g.sample(|x| 1.0 + 0.5 * (PI * x).sin() - 0.3 * (2.5 * PI * x).cos()).unwrap();
    let v = g.sample(|x| 0.5 * (3.0 * PI * x).sin() + x).unwrap();
    let (h, j) = (f.trace(), v.trace());

    let run = trajectory(&undamped, &f, &v, h, j, 20.0, 4000)?;
    let drift = run.relative_energy_drift();
    let run = trajectory(&damped, &f, &v, h, j, 20.0, 4000)?;
    let increase = run.max_energy_increase().max(0.0);

    let long = |spec: &ProblemSpec| -> Result<f64, String> {
        let t = trajectory(spec, &f, &v, h, j, 50.0, 10_000)?;
        Ok(t.step_l2.iter().copied().fold(0.0, f64::max) / t.step_l2[0])
    };
    Ok(vec![
        le("undamped relative energy drift", drift, 1e-6),
        le("damped max energy increase per step", increase, 1e-8),
        // the undamped flow conserves energy, not the L² norm
        info("undamped sup ‖u‖/‖u(0)‖", long(&undamped)?),
        le("damped sup ‖u‖/‖u(0)‖", long(&damped)?, 1.1),
    ])
}

// 9
fn functional_equation() -> Outcome {
    let n = 64;
    let g = grid(n);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut fe, mut even, mut id, mut rate) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let coef: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f = g
            .sample(|x| coef.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * PI * x).sin()).sum())
            .unwrap();
        let t = rng.random_range(-400i64..400) as f64 * g.h();
        let s = rng.random_range(-400i64..400) as f64 * g.h();
        let lhs = &cosine_apply(&f, t + s) + &cosine_apply(&f, t - s);
        let rhs = cosine_apply(&cosine_apply(&f, s), t).scale(2.0);
        fe = fe.max((&lhs - &rhs).max_abs());
        even = even.max((&cosine_apply(&f, -t) - &cosine_apply(&f, t)).max_abs());
        id = id.max((&cosine_apply(&f, 0.0) - &f).max_abs());
        // (S(t+h) - S(t))/h against the trapezoid average of C(t), C(t+h)
        let ds = (&sine_apply(&f, t + g.h()) - &sine_apply(&f, t)).scale(1.0 / g.h());
        let avg = (&cosine_apply(&f, t) + &cosine_apply(&f, t + g.h())).scale(0.5);
        rate = rate.max((&ds - &avg).max_abs());
    }
    Ok(vec![
        le("functional equation", fe, 1e-10),
        le("evenness", even, 1e-10),
        le("C(0) = I", id, 1e-10),
        le("∂ₜS = C", rate, 1e-10),
    ])
}

// 10
fn acoustic() -> Outcome {
    let a = 0.5;
    let j = BoundaryPair::new(a, -a);
    let spec_for = |g: Grid| ProblemSpec::acoustic(g).with_acoustic([0.0; 2], [-1.0; 2], [-0.5; 2]);
    let g = grid(200);
    let f = g.sample(|x| (PI * x).cos()).unwrap();
    let long = trajectory(&spec_for(g), &f, &g.zeros(), BoundaryPair::ZERO, j, 50.0, 10_000)?;
    let growth = long.step_l2.iter().copied().fold(0.0, f64::max) / long.step_l2[0];

    let at_one = |n: usize| -> Result<Vec<f64>, String> {
        let g = grid(n);
        let f = g.sample(|x| (PI * x).cos()).unwrap();
        let t = trajectory(&spec_for(g), &f, &g.zeros(), BoundaryPair::ZERO, j, 1.0, usize::MAX)?;
        Ok(t.final_state().unwrap().u.values().to_vec())
    };
    let reference = at_one(800)?;
    let error = |n: usize| -> Result<f64, String> {
        let u = at_one(n)?;
        let stride = 800 / n;
        Ok((1..n).map(|i| (u[i] - reference[i * stride]).abs()).fold(0.0, f64::max))
    };
    let (e200, e400) = (error(200)?, error(400)?);
    Ok(vec![
        le("sup ‖u‖/‖u(0)‖ over [0, 50]", growth, 1.2),
        within("observed order vs N=800", (e200 / e400).log2(), 1.5, 2.5),
    ])
}

// 11
fn smoothness() -> Outcome {
    let bump = |x: f64| if x <= 0.0 || x >= 1.0 { 0.0 } else { (-1.0 / (x * (1.0 - x))).exp() };
    let g = grid(200);
    let f = g.sample(bump).unwrap();
    let kernel = closed_form_trajectory(&f, &g.zeros(), BoundaryPair::ZERO, BoundaryPair::ZERO, &[0.0, 1.0], g)
        .map_err(err)?;
    let ek = smoothness_diagnostic(&kernel);
    let sim = trajectory(&ProblemSpec::new(g), &f, &g.zeros(), BoundaryPair::ZERO, BoundaryPair::ZERO, 1.0, 400)?;
    let es = smoothness_diagnostic(&sim);
    Ok(vec![
        le("kernel |exponent(1) - exponent(0)|", (ek[1] - ek[0]).abs(), 1.0),
        le("leapfrog |exponent(1) - exponent(0)|", (es[es.len() - 1] - es[0]).abs(), 1.0),
    ])
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 11] = [
        (1, "period-2 solutions", Duration::from_secs(5), period_two),
        (2, "Dirichlet spectrum", Duration::from_secs(10), dirichlet_spectrum),
        (3, "characteristic equation vs spectrum", Duration::from_secs(30), characteristic_match),
        (4, "Dirichlet lift decay exponent", Duration::from_secs(5), decay_fit),
        (5, "flux-sine integral constant", Duration::from_secs(1), miyadera),
        (6, "factorization identity", Duration::from_secs(5), factorization),
        (7, "block cosine formula and growth", Duration::from_secs(60), block_formula),
        (8, "energy conservation and dissipation", Duration::from_secs(60), energy),
        (9, "functional equation suite", Duration::from_secs(60), functional_equation),
        (10, "acoustic boundary mode", Duration::from_secs(60), acoustic),
        (11, "smoothness preservation", Duration::from_secs(60), smoothness),
    ];
    let mut failures = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let (pass, detail) = match &outcome {
            Ok(checks) => (
                checks.iter().all(|c| c.pass) && in_time,
                checks
                    .iter()
                    .map(|c| format!("{}{}: {:.3e}", if c.pass { "" } else { "!" }, c.label, c.value))
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {id:>2}: {} {name} [{:.2}s of {}s{}] {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" },
        );
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
