use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};

/// Which boundary variable carries its own dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// Boundary unknowns are the traces `u(0), u(1)`.
    #[default]
    Trace,
    /// Boundary unknowns are the outward normal derivatives (acoustic type).
    NormalDerivative,
}

/// Discretization of the flux `u'(j)` in the trace-mode boundary rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryClosure {
    /// Second-order one-sided stencil, `(-3u₀ + 4u₁ - u₂)/(2h)`.
    #[default]
    OneSided,
    /// Half-cell balance: the flux is recovered from `(u₁ - u₀)/h` and the
    /// interior equation at the node, which adds `α h/2` to the boundary mass.
    /// With `α₀ = 1, α₁ = -1, q ≡ 0` the scheme has a symmetric energy.
    Conservative,
}

/// All coefficients of the coupled problem.
///
/// Trace mode:
/// `ü = u'' + q u' + r u`, `ẍⱼ = αⱼ u'(j) + βⱼ xⱼ + (cⱼ + c̃ⱼ) ẋⱼ`, `u(j) = xⱼ`.
///
/// Normal-derivative mode:
/// `ü = u'' + q u' + r u`, `δ̈ⱼ = pⱼ u̇(j) + qⱼ δⱼ + rⱼ δ̇ⱼ`, `∂ᵥu(j) = δⱼ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub coupling: Coupling,
    pub closure: BoundaryClosure,
    pub lp_exponent: f64,
    pub q_coef: GridFunction,
    pub r_coef: GridFunction,
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

impl ProblemSpec {
    /// Trace coupling, all coefficients zero, `p = 2`.
    pub fn new(grid: Grid) -> Self {
        ProblemSpec {
            coupling: Coupling::Trace,
            closure: BoundaryClosure::OneSided,
            lp_exponent: 2.0,
            q_coef: grid.zeros(),
            r_coef: grid.zeros(),
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

    /// `α₀ = 1, α₁ = -1`: the self-adjoint flux coupling.
    pub fn dissipative(grid: Grid, beta0: f64, beta1: f64) -> Self {
        ProblemSpec::new(grid).with_alpha(1.0, -1.0).with_beta(beta0, beta1)
    }

    pub fn acoustic(grid: Grid) -> Self {
        ProblemSpec {
            coupling: Coupling::NormalDerivative,
            ..ProblemSpec::new(grid)
        }
    }

    pub fn with_alpha(mut self, alpha0: f64, alpha1: f64) -> Self {
        self.alpha0 = alpha0;
        self.alpha1 = alpha1;
        self
    }

    pub fn with_beta(mut self, beta0: f64, beta1: f64) -> Self {
        self.beta0 = beta0;
        self.beta1 = beta1;
        self
    }

    pub fn with_closure(mut self, closure: BoundaryClosure) -> Self {
        self.closure = closure;
        self
    }

    pub fn with_coefficients(mut self, q: GridFunction, r: GridFunction) -> Self {
        self.q_coef = q;
        self.r_coef = r;
        self
    }

    pub fn with_trace_damping(mut self, c: [f64; 2], ct: [f64; 2]) -> Self {
        [self.damp_c0, self.damp_c1] = c;
        [self.damp_ct0, self.damp_ct1] = ct;
        self
    }

    pub fn with_acoustic(mut self, p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> Self {
        [self.ac_p0, self.ac_p1] = p;
        [self.ac_q0, self.ac_q1] = q;
        [self.ac_r0, self.ac_r1] = r;
        self
    }

    pub fn grid(&self) -> Grid {
        self.q_coef.grid()
    }

    /// True when the interior operator is the bare second derivative.
    pub fn is_pure_laplacian(&self) -> bool {
        self.q_coef.max_abs() == 0.0 && self.r_coef.max_abs() == 0.0
    }

    pub fn has_flux_coupling(&self) -> bool {
        self.alpha0 != 0.0 || self.alpha1 != 0.0
    }

    pub fn has_damping(&self) -> bool {
        match self.coupling {
            Coupling::Trace => [self.damp_c0, self.damp_c1, self.damp_ct0, self.damp_ct1]
                .iter()
                .any(|c| *c != 0.0),
            Coupling::NormalDerivative => [self.ac_p0, self.ac_p1, self.ac_r0, self.ac_r1]
                .iter()
                .any(|c| *c != 0.0),
        }
    }

    /// Effective boundary masses `(m₀, m₁)` of the trace-mode rows.
    pub fn boundary_masses(&self) -> (f64, f64) {
        match self.closure {
            BoundaryClosure::OneSided => (1.0, 1.0),
            BoundaryClosure::Conservative => {
                let h = self.grid().h();
                let (c0, c1) = self.conservative_flux_factors();
                (1.0 + 0.5 * h * c0, 1.0 - 0.5 * h * c1)
            }
        }
    }

    /// `cⱼ` such that `αⱼ u'(j)` is `cⱼ` times the half-cell flux expression.
    pub(crate) fn conservative_flux_factors(&self) -> (f64, f64) {
        let h = self.grid().h();
        let n = self.grid().n_cells();
        let c0 = self.alpha0 / (1.0 - 0.5 * h * self.q_coef.at(0));
        let c1 = self.alpha1 / (1.0 + 0.5 * h * self.q_coef.at(n));
        (c0, c1)
    }

    pub fn validate(&self, grid: Grid) -> Result<()> {
        if self.q_coef.grid() != grid || self.r_coef.grid() != grid {
            return Err(Error::Argument(format!(
                "coefficient samples live on N = {}, expected N = {}",
                self.q_coef.grid().n_cells(),
                grid.n_cells()
            )));
        }
        if !(self.lp_exponent >= 1.0) || !self.lp_exponent.is_finite() {
            return Err(Error::Argument(format!(
                "lp_exponent must lie in [1, inf), got {}",
                self.lp_exponent
            )));
        }
        let scalars = [
            ("alpha0", self.alpha0),
            ("alpha1", self.alpha1),
            ("beta0", self.beta0),
            ("beta1", self.beta1),
            ("damp_c0", self.damp_c0),
            ("damp_c1", self.damp_c1),
            ("damp_ct0", self.damp_ct0),
            ("damp_ct1", self.damp_ct1),
            ("ac_p0", self.ac_p0),
            ("ac_p1", self.ac_p1),
            ("ac_q0", self.ac_q0),
            ("ac_q1", self.ac_q1),
            ("ac_r0", self.ac_r0),
            ("ac_r1", self.ac_r1),
        ];
        if let Some((name, v)) = scalars.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Argument(format!("{name} = {v} is not finite")));
        }
        if self.coupling == Coupling::Trace && self.closure == BoundaryClosure::Conservative {
            let (m0, m1) = self.boundary_masses();
            if !(m0 > 0.0 && m1 > 0.0 && m0.is_finite() && m1.is_finite()) {
                return Err(Error::Argument(format!(
                    "conservative closure gives non-positive boundary mass ({m0}, {m1})"
                )));
            }
        }
        Ok(())
    }
}
