//! Uniform grids on [0, 1], sampled functions, and the norms and stencils
//! shared by every other module.
//!
//! Endpoint samples double as trace values: on the unit interval every
//! `W^{1,p}` function is continuous, so `u(0)` and `u(1)` are well defined.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible number of cells.
pub const MIN_CELLS: usize = 4;

/// Uniform partition of [0, 1] into `n_cells` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    n_cells: usize,
}

impl Grid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < MIN_CELLS {
            return Err(Error::Argument(format!(
                "grid needs at least {MIN_CELLS} cells, got {n_cells}"
            )));
        }
        Ok(Grid { n_cells })
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    #[inline]
    pub fn h(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// Node `i`, computed as `i / N` so that the last node is exactly 1.
    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        i as f64 / self.n_cells as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_cells).map(move |i| self.node(i))
    }

    /// Trapezoid weights: `h/2` at the endpoints, `h` inside.
    pub fn trapezoid_weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.n_cells {
            0.5 * self.h()
        } else {
            self.h()
        }
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Result<GridFunction> {
        GridFunction::new(*self, self.nodes().map(f).collect())
    }

    pub fn zeros(&self) -> GridFunction {
        GridFunction {
            grid: *self,
            values: vec![0.0; self.n_nodes()],
        }
    }

    /// Composite trapezoid rule applied to node values.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_nodes());
        let n = self.n_cells;
        let inner: f64 = values[1..n].iter().sum();
        self.h() * (inner + 0.5 * (values[0] + values[n]))
    }
}

/// Real samples `u(x_i)` on every node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_nodes() {
            return Err(Error::Argument(format!(
                "grid function needs {} samples, got {}",
                grid.n_nodes(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite sample at node {i}")));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        GridFunction::new(grid, vec![c; grid.n_nodes()])
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Trace `(u(0), u(1))`.
    pub fn trace(&self) -> BoundaryPair {
        BoundaryPair::new(self.values[0], self.values[self.grid.n_cells()])
    }

    pub fn scale(&self, c: f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn zip_with(&self, other: &GridFunction, op: impl Fn(f64, f64) -> f64) -> GridFunction {
        assert_eq!(self.grid, other.grid, "grid functions live on different grids");
        GridFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| op(*a, *b))
                .collect(),
        }
    }
}

impl Add for &GridFunction {
    type Output = GridFunction;
    fn add(self, rhs: &GridFunction) -> GridFunction {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &GridFunction {
    type Output = GridFunction;
    fn sub(self, rhs: &GridFunction) -> GridFunction {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<&GridFunction> for f64 {
    type Output = GridFunction;
    fn mul(self, rhs: &GridFunction) -> GridFunction {
        rhs.scale(self)
    }
}

/// An element of the boundary space: one real value per endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryPair {
    pub at0: f64,
    pub at1: f64,
}

impl BoundaryPair {
    pub const ZERO: BoundaryPair = BoundaryPair { at0: 0.0, at1: 0.0 };

    pub const fn new(at0: f64, at1: f64) -> Self {
        BoundaryPair { at0, at1 }
    }

    pub fn is_finite(&self) -> bool {
        self.at0.is_finite() && self.at1.is_finite()
    }

    /// The l1 norm, the default norm on the boundary space.
    pub fn l1(&self) -> f64 {
        self.at0.abs() + self.at1.abs()
    }

    pub fn get(&self, endpoint: Endpoint) -> f64 {
        match endpoint {
            Endpoint::Left => self.at0,
            Endpoint::Right => self.at1,
        }
    }

    pub fn scale(&self, c: f64) -> BoundaryPair {
        BoundaryPair::new(c * self.at0, c * self.at1)
    }
}

impl Add for BoundaryPair {
    type Output = BoundaryPair;
    fn add(self, rhs: BoundaryPair) -> BoundaryPair {
        BoundaryPair::new(self.at0 + rhs.at0, self.at1 + rhs.at1)
    }
}

impl Sub for BoundaryPair {
    type Output = BoundaryPair;
    fn sub(self, rhs: BoundaryPair) -> BoundaryPair {
        BoundaryPair::new(self.at0 - rhs.at0, self.at1 - rhs.at1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Left,
    Right,
}

/// Trapezoid approximation of `(∫₀¹ |f|^p)^{1/p}`.
pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::Domain(format!("Lebesgue exponent must lie in [1, inf), got {p}")));
    }
    if f.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite samples".into()));
    }
    let grid = f.grid;
    if p == 1.0 {
        let abs: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
        return Ok(grid.trapezoid(&abs));
    }
    // Factor out the largest sample so that |f|^p cannot overflow.
    let scale = f.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let pow: Vec<f64> = f.values.iter().map(|v| (v.abs() / scale).powf(p)).collect();
    Ok(scale * grid.trapezoid(&pow).powf(1.0 / p))
}

/// Second-order one-sided derivative at an endpoint.
pub fn one_sided_derivative(f: &GridFunction, endpoint: Endpoint) -> f64 {
    let u = &f.values;
    let inv2h = 0.5 / f.grid.h();
    match endpoint {
        Endpoint::Left => (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv2h,
        Endpoint::Right => {
            let n = f.grid.n_cells();
            (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) * inv2h
        }
    }
}

/// Node-wise derivative: centered inside, second-order one-sided at the ends.
pub fn derivative(f: &GridFunction) -> GridFunction {
    let n = f.grid.n_cells();
    let inv2h = 0.5 / f.grid.h();
    let u = &f.values;
    let mut d = Vec::with_capacity(n + 1);
    d.push(one_sided_derivative(f, Endpoint::Left));
    d.extend((1..n).map(|i| (u[i + 1] - u[i - 1]) * inv2h));
    d.push(one_sided_derivative(f, Endpoint::Right));
    GridFunction { grid: f.grid, values: d }
}

/// L² norm of the node-wise derivative.
pub fn sobolev_seminorm(f: &GridFunction) -> f64 {
    let d = derivative(f);
    let sq: Vec<f64> = d.values.iter().map(|v| v * v).collect();
    f.grid.trapezoid(&sq).sqrt()
}
