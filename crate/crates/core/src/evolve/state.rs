use crate::error::{Error, Result};
use crate::grid::{one_sided_derivative, BoundaryPair, Endpoint, Grid, GridFunction};
use crate::spectral::{Coupling, ProblemSpec};

/// Trace compatibility tolerance for initial data.
pub const TRACE_TOL: f64 = 1e-10;

/// `(u, u̇, x, ẋ)`. In trace mode `x` is the boundary displacement and equals
/// the endpoint values of `u`; in normal-derivative mode it holds the fluxes
/// `δ = ∂ᵥu`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub u: GridFunction,
    pub v: GridFunction,
    pub x: BoundaryPair,
    pub xdot: BoundaryPair,
}

impl PhaseState {
    pub fn zeros(grid: Grid) -> Self {
        PhaseState {
            u: grid.zeros(),
            v: grid.zeros(),
            x: BoundaryPair::ZERO,
            xdot: BoundaryPair::ZERO,
        }
    }

    pub fn grid(&self) -> Grid {
        self.u.grid()
    }

    /// `|u(0) - x₀| + |u(1) - x₁|` in trace mode; the same with the outward
    /// normal derivatives in normal-derivative mode.
    pub fn constraint_defect(&self, coupling: Coupling) -> f64 {
        match coupling {
            Coupling::Trace => (self.u.trace() - self.x).l1(),
            Coupling::NormalDerivative => {
                let flux = outward_flux(&self.u);
                (flux - self.x).l1()
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.xdot.is_finite()
    }
}

/// `(-u'(0), u'(1))` by the one-sided stencils.
pub fn outward_flux(u: &GridFunction) -> BoundaryPair {
    BoundaryPair::new(
        -one_sided_derivative(u, Endpoint::Left),
        one_sided_derivative(u, Endpoint::Right),
    )
}

/// Flux compatibility tolerance of normal-derivative data, `100 h²·max(1, ‖f‖∞)`.
pub fn flux_tolerance(f: &GridFunction) -> f64 {
    let h = f.grid().h();
    100.0 * h * h * f.max_abs().max(1.0)
}

fn check_grid(name: &str, f: &GridFunction, grid: Grid) -> Result<()> {
    if f.grid() != grid {
        return Err(Error::Argument(format!(
            "{name} lives on N = {}, expected N = {}",
            f.grid().n_cells(),
            grid.n_cells()
        )));
    }
    Ok(())
}

pub(crate) fn check_traces(name: &str, f: &GridFunction, target: BoundaryPair, what: &str) -> Result<()> {
    for (end, got, want) in [("x=0", f.at(0), target.at0), ("x=1", f.at(f.grid().n_cells()), target.at1)] {
        if (got - want).abs() > TRACE_TOL {
            return Err(Error::Precondition(format!(
                "trace of {name} at {end} is {got}, but {what} requires {want}"
            )));
        }
    }
    Ok(())
}

/// Validates initial data `u(0) = f, u̇(0) = g` with boundary data `h, j`.
///
/// Trace mode requires `f|∂ = h` and `g|∂ = j`. Normal-derivative mode
/// requires `∂ᵥf = h` up to the discretization tolerance and places no
/// condition on `g`.
pub fn init_state(
    f: &GridFunction,
    g: &GridFunction,
    h: BoundaryPair,
    j: BoundaryPair,
    spec: &ProblemSpec,
) -> Result<PhaseState> {
    let grid = spec.grid();
    check_grid("f", f, grid)?;
    check_grid("g", g, grid)?;
    if !h.is_finite() || !j.is_finite() {
        return Err(Error::Domain("boundary data must be finite".into()));
    }
    let n = grid.n_cells();
    match spec.coupling {
        Coupling::Trace => {
            check_traces("f", f, h, "Lf = h")?;
            check_traces("g", g, j, "Lg = j")?;
            let mut u = f.values().to_vec();
            let mut v = g.values().to_vec();
            [u[0], u[n]] = [h.at0, h.at1];
            [v[0], v[n]] = [j.at0, j.at1];
            Ok(PhaseState {
                u: GridFunction::new(grid, u)?,
                v: GridFunction::new(grid, v)?,
                x: h,
                xdot: j,
            })
        }
        Coupling::NormalDerivative => {
            let flux = outward_flux(f);
            let tol = flux_tolerance(f);
            for (end, got, want) in [("x=0", flux.at0, h.at0), ("x=1", flux.at1, h.at1)] {
                if (got - want).abs() > tol {
                    return Err(Error::Precondition(format!(
                        "outward normal derivative of f at {end} is {got}, but the flux datum is {want}"
                    )));
                }
            }
            Ok(PhaseState { u: f.clone(), v: g.clone(), x: h, xdot: j })
        }
    }
}
