//! The boundary symbol `B_λ = B̃ + B D_λ` and the scalar characteristic
//! equation `det(λ - B_λ) = 0` of the flux coupling `α₀ = 1, α₁ = -1`.

use std::f64::consts::PI;

use nalgebra::Matrix2;

use super::assemble::trace_boundary_rows;
use super::problem::{Coupling, ProblemSpec};
use crate::dirichlet::{discrete_dirichlet, dirichlet_pole_near, POLE_GUARD};
use crate::error::{Error, Result};
use crate::grid::{BoundaryPair, Grid};

/// `(√λ coth √λ, √λ / sinh √λ)` continued to `λ ≤ 0` through
/// `σ cot σ, σ / sin σ` with `σ = √-λ`. Both equal 1 at `λ = 0`.
pub fn lift_symbols(lambda: f64) -> Result<(f64, f64)> {
    if !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda = {lambda}")));
    }
    if lambda.abs() < 1e-12 {
        return Ok((1.0 + lambda / 3.0, 1.0 - lambda / 6.0));
    }
    if lambda > 0.0 {
        let a = lambda.sqrt();
        let s = if a > 700.0 { 0.0 } else { a / a.sinh() };
        return Ok((a / a.tanh(), s));
    }
    let sigma = (-lambda).sqrt();
    let k = (sigma / PI).round();
    if k >= 1.0 && (sigma - k * PI).abs() < POLE_GUARD {
        return Err(Error::Singular(format!(
            "lambda = {lambda} is within the pole guard of -({k}π)²"
        )));
    }
    let (sn, cs) = sigma.sin_cos();
    Ok((sigma * cs / sn, sigma / sn))
}

/// Left-hand side of the characteristic equation,
/// `λ² + λ(1 + 2g - (β₀+β₁)) - (β₀+β₁) g + β₀β₁` with `g = √λ coth √λ`.
pub fn char_eval(lambda: f64, beta0: f64, beta1: f64) -> Result<f64> {
    let (g, _) = lift_symbols(lambda)?;
    let sb = beta0 + beta1;
    Ok(lambda * lambda + lambda * (1.0 + 2.0 * g - sb) - sb * g + beta0 * beta1)
}

/// Analytic `B_λ` for `A = d²/dx²`:
/// `[[β₀ - α₀g, α₀s], [-α₁s, β₁ + α₁g]]`.
pub fn analytic_b_lambda(lambda: f64, alpha0: f64, alpha1: f64, beta0: f64, beta1: f64) -> Result<Matrix2<f64>> {
    let (g, s) = lift_symbols(lambda)?;
    Ok(Matrix2::new(
        beta0 - alpha0 * g,
        alpha0 * s,
        -alpha1 * s,
        beta1 + alpha1 * g,
    ))
}

/// Discrete `B_λ`: the boundary rows of the assembled operator applied to
/// the discrete Dirichlet lifts of the unit vectors.
pub fn b_lambda(lambda: f64, spec: &ProblemSpec, grid: Grid) -> Result<Matrix2<f64>> {
    spec.validate(grid)?;
    if spec.coupling != Coupling::Trace {
        return Err(Error::Argument("B_lambda is defined for the trace coupling only".into()));
    }
    guard_poles(lambda, spec, grid)?;
    let rows = trace_boundary_rows(spec);
    let mut out = Matrix2::zeros();
    for (j, e) in [BoundaryPair::new(1.0, 0.0), BoundaryPair::new(0.0, 1.0)].into_iter().enumerate() {
        let lift = discrete_dirichlet(lambda, e, grid, &spec.q_coef, &spec.r_coef)?;
        for (k, row) in rows.iter().enumerate() {
            out[(k, j)] = row.iter().map(|(c, v)| v * lift.profile.at(*c)).sum();
        }
    }
    Ok(out)
}

/// Rejects `λ` near the continuous Dirichlet poles and, for the bare second
/// difference, near its closed-form discrete spectrum.
pub(crate) fn guard_poles(lambda: f64, spec: &ProblemSpec, grid: Grid) -> Result<()> {
    if let Some(k) = dirichlet_pole_near(lambda) {
        return Err(Error::Singular(format!(
            "lambda = {lambda} lies within {POLE_GUARD:e} of -({k}π)²"
        )));
    }
    if spec.is_pure_laplacian() {
        let close = super::eigs::discrete_dirichlet_spectrum(grid.n_cells())
            .into_iter()
            .any(|mu| (lambda - mu).abs() < POLE_GUARD * mu.abs().max(1.0));
        if close {
            return Err(Error::Singular(format!(
                "lambda = {lambda} is a discrete Dirichlet eigenvalue"
            )));
        }
    }
    Ok(())
}

/// Scan step of the root search.
pub const ROOT_SCAN_STEP: f64 = 0.01 * PI * PI;
/// Bisection stops once the bracket is this narrow.
pub const ROOT_TOL: f64 = 1e-10;

/// Real roots of [`char_eval`] in `[λ_min, λ_max]`, sorted ascending.
///
/// The interval is split at the poles `-k²π²`, each pole-free piece is
/// scanned with step at most [`ROOT_SCAN_STEP`] and every sign change is
/// refined by bisection. Samples that evaluate to exactly zero are roots.
pub fn char_roots(beta0: f64, beta1: f64, lambda_min: f64, lambda_max: f64) -> Vec<f64> {
    if !(lambda_min < lambda_max) || !lambda_min.is_finite() || !lambda_max.is_finite() {
        return Vec::new();
    }
    let f = |l: f64| char_eval(l, beta0, beta1).ok();
    // pole-free pieces [a, b]
    let mut cuts = vec![lambda_min];
    let kmax = ((-lambda_min).max(0.0).sqrt() / PI).ceil() as i64 + 1;
    for k in 1..=kmax {
        let pole = -((k as f64) * PI).powi(2);
        if pole > lambda_min && pole < lambda_max {
            cuts.push(pole);
        }
    }
    cuts.push(lambda_max);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut roots = Vec::new();
    for w in cuts.windows(2) {
        // step off the poles by much more than the guard radius
        let margin = |x: f64| {
            if dirichlet_pole_near(x).is_some() {
                1e-6 * x.abs().max(1.0)
            } else {
                0.0
            }
        };
        let a = w[0] + margin(w[0]);
        let b = w[1] - margin(w[1]);
        if a >= b {
            continue;
        }
        let steps = ((b - a) / ROOT_SCAN_STEP).ceil().max(1.0) as usize;
        let xs: Vec<f64> = (0..=steps)
            .map(|i| if i == steps { b } else { a + (b - a) * i as f64 / steps as f64 })
            .collect();
        let mut prev: Option<(f64, f64)> = None;
        for &x in &xs {
            let Some(fx) = f(x) else {
                prev = None;
                continue;
            };
            if fx == 0.0 {
                roots.push(x);
            } else if let Some((xp, fp)) = prev {
                if fp != 0.0 && fp.signum() != fx.signum() {
                    if let Some(r) = bisect(&f, xp, fp, x) {
                        roots.push(r);
                    }
                }
            }
            prev = Some((x, fx));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 10.0 * ROOT_TOL);
    roots
}

fn bisect(f: &impl Fn(f64) -> Option<f64>, mut a: f64, mut fa: f64, mut b: f64) -> Option<f64> {
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// True iff every root lies within `tol` of `-(2π/γ)² n²` for an integer
/// `n ≥ 1`, or `n ≥ 0` when `admit_zero` is set.
pub fn periodicity_condition_check(roots: &[f64], gamma: f64, tol: f64, admit_zero: bool) -> bool {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return false;
    }
    let base = (2.0 * PI / gamma).powi(2);
    roots.iter().all(|&r| {
        if !(r <= tol) {
            return false;
        }
        let n = ((-r).max(0.0) / base).sqrt().round();
        let n = if n < 1.0 && !admit_zero { 1.0 } else { n };
        (r + base * n * n).abs() <= tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn char_eval_examples() {
        assert_eq!(char_eval(0.0, 0.0, 0.0).unwrap(), 0.0);
        let v = char_eval(-1.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(v, -2.0 / 1f64.tan(), epsilon = 1e-14);
        assert_abs_diff_eq!(v, -1.2841852, epsilon = 1e-6);
        assert!(matches!(char_eval(-PI * PI, 0.0, 0.0), Err(Error::Singular(_))));
    }

    #[test]
    fn char_eval_is_continuous_at_zero() {
        for b in [(0.0, 0.0), (-1.0, -1.0), (0.5, -2.0)] {
            let at0 = char_eval(0.0, b.0, b.1).unwrap();
            let l = char_eval(-1e-7, b.0, b.1).unwrap();
            let r = char_eval(1e-7, b.0, b.1).unwrap();
            assert!((at0 - l).abs() < 1e-6 && (at0 - r).abs() < 1e-6);
        }
    }

    #[test]
    fn char_eval_is_the_analytic_determinant() {
        for lambda in [-20.0, -5.0, -0.5, 0.0, 0.5, 3.0, 40.0] {
            for (b0, b1) in [(0.0, 0.0), (-1.0, -1.0), (-0.3, -2.0)] {
                let m = analytic_b_lambda(lambda, 1.0, -1.0, b0, b1).unwrap();
                let det = (Matrix2::identity() * lambda - m).determinant();
                let c = char_eval(lambda, b0, b1).unwrap();
                assert!((det - c).abs() < 1e-10 * c.abs().max(1.0), "{lambda}: {det} {c}");
            }
        }
    }

    #[test]
    fn b_lambda_examples() {
        let g = Grid::new(400).unwrap();
        let decoupled = ProblemSpec::new(g).with_beta(-1.0, -3.0);
        let m = b_lambda(2.0, &decoupled, g).unwrap();
        assert_eq!(m, Matrix2::new(-1.0, 0.0, 0.0, -3.0));

        let spec = ProblemSpec::dissipative(g, 0.0, 0.0);
        let m = b_lambda(1.0, &spec, g).unwrap();
        let a = analytic_b_lambda(1.0, 1.0, -1.0, 0.0, 0.0).unwrap();
        let coth = 1.0 / 1f64.tanh();
        let csch = 1.0 / 1f64.sinh();
        assert_abs_diff_eq!(a[(0, 0)], -coth, epsilon = 1e-15);
        assert_abs_diff_eq!(a[(0, 1)], csch, epsilon = 1e-15);
        assert_abs_diff_eq!(a[(1, 0)], csch, epsilon = 1e-15);
        assert_abs_diff_eq!(a[(1, 1)], -coth, epsilon = 1e-15);
        assert!((m - a).abs().max() < 1e-5);

        let m = b_lambda(1e-8, &spec, g).unwrap();
        assert!((m - Matrix2::new(-1.0, 1.0, 1.0, -1.0)).abs().max() < 1e-6);
    }

    #[test]
    fn b_lambda_rejects_poles_and_acoustic() {
        let g = Grid::new(50).unwrap();
        let spec = ProblemSpec::dissipative(g, 0.0, 0.0);
        assert!(matches!(b_lambda(-PI * PI, &spec, g), Err(Error::Singular(_))));
        let mu = super::super::eigs::discrete_dirichlet_spectrum(50)[0];
        assert!(matches!(b_lambda(mu, &spec, g), Err(Error::Singular(_))));
        assert!(b_lambda(1.0, &ProblemSpec::acoustic(g), g).is_err());
    }

    #[test]
    fn determinant_identity_is_second_order() {
        for (b0, b1) in [(0.0, 0.0), (-1.0, -1.0)] {
            for lambda in [-0.5, -2.0, -5.0, 0.5, 1.0] {
                let err = |n: usize| {
                    let g = Grid::new(n).unwrap();
                    let spec = ProblemSpec::dissipative(g, b0, b1);
                    let m = b_lambda(lambda, &spec, g).unwrap();
                    let det = (Matrix2::identity() * lambda - m).determinant();
                    (det - char_eval(lambda, b0, b1).unwrap()).abs()
                };
                let (e1, e2) = (err(100), err(200));
                assert!(e1 < 1e-2, "{lambda}: {e1}");
                assert!(e1 / e2 > 3.5, "{lambda}: {}", e1 / e2);
            }
        }
    }

    #[test]
    fn roots_include_zero_and_satisfy_rearrangement() {
        let roots = char_roots(0.0, 0.0, -50.0, 0.0);
        assert!(roots.contains(&0.0));
        let roots = char_roots(0.0, 0.0, -50.0, -0.1);
        assert!(!roots.is_empty());
        for r in roots {
            // with β = 0: λ² + λ(1 + 2g) = 0, i.e. |λ| = 1 + 2σ cot σ
            let sigma = (-r).sqrt();
            let rhs = 1.0 + 2.0 * sigma / sigma.tan();
            assert!((r.abs() - rhs).abs() < 1e-7, "{r}: {rhs}");
        }
    }

    #[test]
    fn roots_interlace_with_poles() {
        let roots = char_roots(-1.0, -1.0, -50.0, 0.0);
        for r in &roots {
            assert!(char_eval(*r, -1.0, -1.0).unwrap().abs() < 1e-6);
        }
        // at least one root between consecutive poles
        for k in 1..2 {
            let lo = -((k + 1) as f64 * PI).powi(2);
            let hi = -(k as f64 * PI).powi(2);
            assert!(roots.iter().any(|r| *r > lo && *r < hi), "no root in ({lo}, {hi})");
        }
    }

    #[test]
    fn periodicity_examples() {
        let p2 = PI * PI;
        assert!(periodicity_condition_check(&[-p2, -4.0 * p2], 2.0, 1e-9, false));
        assert!(!periodicity_condition_check(&[-2.5], 2.0, 1e-9, false));
        assert!(periodicity_condition_check(&[-p2 / 4.0], 4.0, 1e-9, false));
        assert!(!periodicity_condition_check(&[0.0], 2.0, 1e-9, false));
        assert!(periodicity_condition_check(&[0.0, -p2], 2.0, 1e-9, true));
        assert!(periodicity_condition_check(&[], 2.0, 1e-9, false));
        assert!(!periodicity_condition_check(&[-p2], 0.0, 1e-9, false));
    }
}
