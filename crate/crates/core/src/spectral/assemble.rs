use nalgebra::DMatrix;

use super::problem::{BoundaryClosure, Coupling, ProblemSpec};
use crate::error::Result;
use crate::grid::{Endpoint, Grid};

/// Index layout of an [`OperatorMatrix`].
///
/// Nodes `0..=N` always occupy indices `0..=N`. In trace mode the two
/// boundary unknowns *are* the endpoint nodes, so `dim = N + 1`. In
/// normal-derivative mode the fluxes `δ₀, δ₁` are appended at `N+1, N+2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofMap {
    pub coupling: Coupling,
    pub n_cells: usize,
}

impl DofMap {
    pub fn dim(&self) -> usize {
        match self.coupling {
            Coupling::Trace => self.n_cells + 1,
            Coupling::NormalDerivative => self.n_cells + 3,
        }
    }

    #[inline]
    pub fn node(&self, i: usize) -> usize {
        debug_assert!(i <= self.n_cells);
        i
    }

    /// Index of the boundary degree of freedom at `endpoint`.
    pub fn boundary(&self, endpoint: Endpoint) -> usize {
        match (self.coupling, endpoint) {
            (Coupling::Trace, Endpoint::Left) => 0,
            (Coupling::Trace, Endpoint::Right) => self.n_cells,
            (Coupling::NormalDerivative, Endpoint::Left) => self.n_cells + 1,
            (Coupling::NormalDerivative, Endpoint::Right) => self.n_cells + 2,
        }
    }

    pub fn is_boundary(&self, idx: usize) -> bool {
        idx == self.boundary(Endpoint::Left) || idx == self.boundary(Endpoint::Right)
    }

    /// Interior nodes `1..N`.
    pub fn interior(&self) -> std::ops::Range<usize> {
        1..self.n_cells
    }

    pub fn label(&self, idx: usize) -> String {
        match self.coupling {
            Coupling::Trace if idx == 0 => "x0 (= u_0)".to_string(),
            Coupling::Trace if idx == self.n_cells => format!("x1 (= u_{})", self.n_cells),
            Coupling::NormalDerivative if idx == self.n_cells + 1 => "delta0".to_string(),
            Coupling::NormalDerivative if idx == self.n_cells + 2 => "delta1".to_string(),
            _ => format!("u_{idx}"),
        }
    }
}

/// Dense position-to-acceleration map `ü = 𝒜u` of the coupled system.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub dim: usize,
    pub entries: DMatrix<f64>,
    pub dof_map: DofMap,
}

impl OperatorMatrix {
    /// Interior block acting on nodes `1..N` with zero boundary values.
    pub fn interior_block(&self) -> DMatrix<f64> {
        let r = self.dof_map.interior();
        self.entries
            .view((r.start, r.start), (r.len(), r.len()))
            .into_owned()
    }

    /// Nonzero entries of each row.
    pub fn sparse_rows(&self) -> Vec<Vec<(usize, f64)>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .filter_map(|j| {
                        let v = self.entries[(i, j)];
                        (v != 0.0).then_some((j, v))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Interior stencil at node `i`: `(west, centre, east)` coefficients.
pub(crate) fn interior_stencil(spec: &ProblemSpec, i: usize) -> (f64, f64, f64) {
    let h = spec.grid().h();
    let inv_h2 = 1.0 / (h * h);
    let qi = spec.q_coef.at(i) * 0.5 / h;
    (inv_h2 - qi, -2.0 * inv_h2 + spec.r_coef.at(i), inv_h2 + qi)
}

/// Trace-mode boundary rows as sparse functionals on the node values.
pub(crate) fn trace_boundary_rows(spec: &ProblemSpec) -> [Vec<(usize, f64)>; 2] {
    let grid = spec.grid();
    let n = grid.n_cells();
    let h = grid.h();
    match spec.closure {
        BoundaryClosure::OneSided => {
            let a0 = spec.alpha0 / (2.0 * h);
            let a1 = spec.alpha1 / (2.0 * h);
            [
                vec![(0, -3.0 * a0 + spec.beta0), (1, 4.0 * a0), (2, -a0)],
                vec![(n - 2, a1), (n - 1, -4.0 * a1), (n, 3.0 * a1 + spec.beta1)],
            ]
        }
        BoundaryClosure::Conservative => {
            let (c0, c1) = spec.conservative_flux_factors();
            let (m0, m1) = spec.boundary_masses();
            let r0 = spec.r_coef.at(0);
            let rn = spec.r_coef.at(n);
            [
                vec![
                    (0, (-c0 / h + 0.5 * h * c0 * r0 + spec.beta0) / m0),
                    (1, c0 / h / m0),
                ],
                vec![
                    (n - 1, -c1 / h / m1),
                    (n, (c1 / h - 0.5 * h * c1 * rn + spec.beta1) / m1),
                ],
            ]
        }
    }
}

/// Assembles the coupled operator matrix.
pub fn assemble(spec: &ProblemSpec, grid: Grid) -> Result<OperatorMatrix> {
    spec.validate(grid)?;
    let n = grid.n_cells();
    let h = grid.h();
    let dof_map = DofMap { coupling: spec.coupling, n_cells: n };
    let dim = dof_map.dim();
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    for i in 1..n {
        let (w, c, e) = interior_stencil(spec, i);
        a[(i, i - 1)] = w;
        a[(i, i)] = c;
        a[(i, i + 1)] = e;
    }
    match spec.coupling {
        Coupling::Trace => {
            let rows = trace_boundary_rows(spec);
            for (row, entries) in [0, n].into_iter().zip(rows) {
                for (col, v) in entries {
                    a[(row, col)] += v;
                }
            }
        }
        Coupling::NormalDerivative => {
            // ghost values u_{-1} = u_1 + 2h δ₀ and u_{N+1} = u_{N-1} + 2h δ₁
            let inv_h2 = 1.0 / (h * h);
            let d0 = dof_map.boundary(Endpoint::Left);
            let d1 = dof_map.boundary(Endpoint::Right);
            a[(0, 0)] = -2.0 * inv_h2 + spec.r_coef.at(0);
            a[(0, 1)] = 2.0 * inv_h2;
            a[(0, d0)] = 2.0 / h - spec.q_coef.at(0);
            a[(n, n)] = -2.0 * inv_h2 + spec.r_coef.at(n);
            a[(n, n - 1)] = 2.0 * inv_h2;
            a[(n, d1)] = 2.0 / h + spec.q_coef.at(n);
            a[(d0, d0)] = spec.ac_q0;
            a[(d1, d1)] = spec.ac_q1;
        }
    }
    Ok(OperatorMatrix { dim, entries: a, dof_map })
}
