use std::f64::consts::PI;

use nalgebra::{Complex, Matrix2};

use super::assemble::assemble;
use super::characteristic::{b_lambda, char_eval, char_roots, periodicity_condition_check};
use super::eigs::{eigs, real_eigenvalues};
use super::problem::{Coupling, ProblemSpec};
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Window of the spectral match and of the root scan.
pub const SPECTRAL_WINDOW: (f64, f64) = (-50.0, 0.0);
/// Eigenvalues closer than this to `-k²π²` are not matched.
pub const MATCH_RADIUS: f64 = 0.5;
/// Largest `k` tried for the period `2k`.
pub const MAX_PERIOD_MULTIPLE: u32 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    /// Full spectrum of the assembled matrix, sorted by real part.
    pub eigenvalues: Vec<Complex<f64>>,
    /// Real eigenvalues in the window and off the Dirichlet spectrum.
    pub matched_eigenvalues: Vec<f64>,
    /// Residual of the characteristic equation at each matched eigenvalue.
    pub match_residuals: Vec<f64>,
    /// Residuals come from the closed-form characteristic function rather
    /// than the discrete `det(λ - B_λ)`.
    pub analytic: bool,
    pub char_roots: Vec<f64>,
    /// Distance from each root in `[-50, -0.05]` to the nearest real eigenvalue.
    pub root_distances: Vec<f64>,
    pub gamma_periodic: Option<f64>,
}

impl SpectralReport {
    pub fn max_residual(&self) -> f64 {
        self.match_residuals.iter().fold(0.0, |m, v| m.max(*v))
    }

    pub fn max_root_distance(&self) -> f64 {
        self.root_distances.iter().fold(0.0, |m, v| m.max(*v))
    }
}

pub fn distance_to_dirichlet_spectrum(lambda: f64) -> f64 {
    if lambda >= 0.0 {
        return lambda + PI * PI;
    }
    let k = ((-lambda).sqrt() / PI).round().max(1.0);
    [k - 1.0, k, k + 1.0]
        .iter()
        .filter(|k| **k >= 1.0)
        .map(|k| (lambda + (k * PI).powi(2)).abs())
        .fold(f64::INFINITY, f64::min)
}

/// The closed-form characteristic function applies to this configuration.
pub fn has_analytic_characteristic(spec: &ProblemSpec) -> bool {
    spec.coupling == Coupling::Trace
        && spec.alpha0 == 1.0
        && spec.alpha1 == -1.0
        && spec.is_pure_laplacian()
}

/// Matches the real eigenvalues of the assembled operator against the
/// characteristic equation, and the roots of the equation against the
/// eigenvalues.
pub fn spectral_equivalence_check(spec: &ProblemSpec, grid: Grid) -> Result<SpectralReport> {
    if spec.coupling != Coupling::Trace {
        return Err(Error::Argument("spectral equivalence needs the trace coupling".into()));
    }
    let op = assemble(spec, grid)?;
    let eigenvalues = eigs(&op)?;
    let real = real_eigenvalues(&eigenvalues);
    let (lo, hi) = SPECTRAL_WINDOW;
    let analytic = has_analytic_characteristic(spec);

    let mut matched_eigenvalues = Vec::new();
    let mut match_residuals = Vec::new();
    for &lambda in &real {
        if lambda < lo || lambda > hi + 1e-9 || distance_to_dirichlet_spectrum(lambda) <= MATCH_RADIUS {
            continue;
        }
        let residual = if analytic {
            char_eval(lambda, spec.beta0, spec.beta1).map(f64::abs)
        } else {
            b_lambda(lambda, spec, grid)
                .map(|b| (Matrix2::identity() * lambda - b).determinant().abs())
        };
        if let Ok(r) = residual {
            matched_eigenvalues.push(lambda);
            match_residuals.push(r);
        }
    }

    let char_roots = if analytic {
        char_roots(spec.beta0, spec.beta1, lo, hi)
    } else {
        Vec::new()
    };
    let root_distances = char_roots
        .iter()
        .filter(|r| **r <= -0.05)
        .map(|r| real.iter().map(|l| (l - r).abs()).fold(f64::INFINITY, f64::min))
        .collect();
    let gamma_periodic = if char_roots.is_empty() {
        None
    } else {
        (1..=MAX_PERIOD_MULTIPLE)
            .map(|k| 2.0 * k as f64)
            .find(|&gamma| periodicity_condition_check(&char_roots, gamma, 1e-6, true))
    };

    Ok(SpectralReport {
        eigenvalues,
        matched_eigenvalues,
        match_residuals,
        analytic,
        char_roots,
        root_distances,
        gamma_periodic,
    })
}
