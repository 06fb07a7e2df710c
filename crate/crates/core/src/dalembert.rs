//! Exact cosine and sine operator kernels for the Dirichlet second
//! derivative on (0, 1).
//!
//! The cosine function acts by `C(t)f(x) = (f̃(x+t) + f̃(x-t)) / 2`, where
//! `f̃` is the odd, 2-periodic extension of `f`. The sine function is its
//! time integral, `S(t)f(x) = (F̃(x+t) - F̃(x-t)) / 2`, with `F̃` the (even,
//! 2-periodic) antiderivative of `f̃`.
//!
//! Shifts that are integer multiples of the mesh width are evaluated by
//! index arithmetic on the node lattice and involve no interpolation. Other
//! shifts fall back to linear interpolation, which is second order.

use serde::{Deserialize, Serialize};

use crate::grid::{BoundaryPair, Grid, GridFunction};

/// Shifts within this many mesh widths of a lattice point are treated as
/// grid-aligned.
const ALIGN_TOL: f64 = 1e-9;

/// Returns `Some(m)` when `t = m·h` up to [`ALIGN_TOL`].
pub fn lattice_shift(grid: Grid, t: f64) -> Option<i64> {
    let m = t * grid.n_cells() as f64;
    let r = m.round();
    if (m - r).abs() <= ALIGN_TOL * r.abs().max(1.0) && r.abs() < (i64::MAX / 4) as f64 {
        Some(r as i64)
    } else {
        None
    }
}

/// A grid function viewed through its odd, 2-periodic extension, together
/// with the cumulative-trapezoid antiderivative of the base samples.
#[derive(Debug, Clone)]
pub struct ExtendedFunction {
    base: GridFunction,
    antiderivative: Vec<f64>,
}

impl ExtendedFunction {
    pub fn new(base: GridFunction) -> Self {
        let h = base.grid().h();
        let v = base.values();
        let mut antiderivative = Vec::with_capacity(v.len());
        antiderivative.push(0.0);
        let mut acc = 0.0;
        for w in v.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            antiderivative.push(acc);
        }
        ExtendedFunction { base, antiderivative }
    }

    pub fn base(&self) -> &GridFunction {
        &self.base
    }

    pub fn grid(&self) -> Grid {
        self.base.grid()
    }

    pub fn antiderivative(&self) -> &[f64] {
        &self.antiderivative
    }

    /// Reduces a lattice index into `(-N, N]`.
    #[inline]
    fn reduce(&self, k: i64) -> i64 {
        let n = self.grid().n_cells() as i64;
        let r = k.rem_euclid(2 * n);
        if r > n {
            r - 2 * n
        } else {
            r
        }
    }

    /// `f̃(k·h)`, exact.
    #[inline]
    pub fn value_at_lattice(&self, k: i64) -> f64 {
        let r = self.reduce(k);
        if r >= 0 {
            self.base.at(r as usize)
        } else {
            -self.base.at((-r) as usize)
        }
    }

    /// `F̃(k·h)`, exact with respect to the stored antiderivative.
    #[inline]
    pub fn antiderivative_at_lattice(&self, k: i64) -> f64 {
        self.antiderivative[self.reduce(k).unsigned_abs() as usize]
    }

    /// Reduces `x` into `(-1, 1]`.
    fn reduce_real(x: f64) -> f64 {
        let y = x.rem_euclid(2.0);
        if y > 1.0 {
            y - 2.0
        } else {
            y
        }
    }

    fn interpolate(&self, samples: &[f64], y: f64) -> f64 {
        let n = self.grid().n_cells();
        let s = y * n as f64;
        let i = (s.floor() as usize).min(n - 1);
        let frac = s - i as f64;
        samples[i] * (1.0 - frac) + samples[i + 1] * frac
    }

    /// `f̃(x)` for arbitrary real `x`.
    pub fn eval(&self, x: f64) -> f64 {
        if let Some(k) = lattice_shift(self.grid(), x) {
            return self.value_at_lattice(k);
        }
        let y = Self::reduce_real(x);
        let v = self.interpolate(self.base.values(), y.abs());
        if y < 0.0 {
            -v
        } else {
            v
        }
    }

    /// `F̃(x)` for arbitrary real `x`.
    pub fn eval_antiderivative(&self, x: f64) -> f64 {
        if let Some(k) = lattice_shift(self.grid(), x) {
            return self.antiderivative_at_lattice(k);
        }
        let y = Self::reduce_real(x);
        self.interpolate(&self.antiderivative, y.abs())
    }

    /// `C(t)f` on the grid.
    pub fn cosine(&self, t: f64) -> GridFunction {
        let grid = self.grid();
        let values = match lattice_shift(grid, t) {
            Some(m) => (0..grid.n_nodes() as i64)
                .map(|i| 0.5 * (self.value_at_lattice(i + m) + self.value_at_lattice(i - m)))
                .collect(),
            None => grid
                .nodes()
                .map(|x| 0.5 * (self.eval(x + t) + self.eval(x - t)))
                .collect(),
        };
        GridFunction::new(grid, values).expect("cosine of finite samples is finite")
    }

    /// `S(t)f` on the grid.
    pub fn sine(&self, t: f64) -> GridFunction {
        let grid = self.grid();
        let values = match lattice_shift(grid, t) {
            Some(m) => (0..grid.n_nodes() as i64)
                .map(|i| {
                    0.5 * (self.antiderivative_at_lattice(i + m)
                        - self.antiderivative_at_lattice(i - m))
                })
                .collect(),
            None => grid
                .nodes()
                .map(|x| 0.5 * (self.eval_antiderivative(x + t) - self.eval_antiderivative(x - t)))
                .collect(),
        };
        GridFunction::new(grid, values).expect("sine of finite samples is finite")
    }

    /// `∂ₜ C(t)f = (f̃'(x+t) - f̃'(x-t)) / 2`, with `f̃'` taken by centered
    /// differences on the lattice.
    pub fn cosine_rate(&self, t: f64) -> GridFunction {
        let grid = self.grid();
        let inv2h = 0.5 * grid.n_cells() as f64;
        let d = |k: i64| (self.value_at_lattice(k + 1) - self.value_at_lattice(k - 1)) * inv2h;
        let values = match lattice_shift(grid, t) {
            Some(m) => (0..grid.n_nodes() as i64)
                .map(|i| 0.5 * (d(i + m) - d(i - m)))
                .collect(),
            None => {
                let h = grid.h();
                let dx = |x: f64| (self.eval(x + h) - self.eval(x - h)) * inv2h;
                grid.nodes().map(|x| 0.5 * (dx(x + t) - dx(x - t))).collect()
            }
        };
        GridFunction::new(grid, values).expect("finite")
    }
}

pub fn extend_eval(e: &ExtendedFunction, x: f64) -> f64 {
    e.eval(x)
}

pub fn cosine_apply(f: &GridFunction, t: f64) -> GridFunction {
    ExtendedFunction::new(f.clone()).cosine(t)
}

pub fn sine_apply(f: &GridFunction, t: f64) -> GridFunction {
    ExtendedFunction::new(f.clone()).sine(t)
}

/// `B S(t) f = (α₀ f̃(t), -α₁ f̃(1-t))` for the flux coupling `Bu = (α₀u'(0), α₁u'(1))`.
pub fn boundary_flux_sine(f: &GridFunction, t: f64, alpha0: f64, alpha1: f64) -> BoundaryPair {
    let e = ExtendedFunction::new(f.clone());
    flux_sine_of(&e, t, alpha0, alpha1)
}

fn flux_sine_of(e: &ExtendedFunction, t: f64, alpha0: f64, alpha1: f64) -> BoundaryPair {
    BoundaryPair::new(alpha0 * e.eval(t), -alpha1 * e.eval(1.0 - t))
}

/// Norm carried by the two-dimensional boundary space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BoundaryNorm {
    #[default]
    L1,
    L2,
    Max,
}

impl BoundaryNorm {
    pub fn of(&self, y: BoundaryPair) -> f64 {
        match self {
            BoundaryNorm::L1 => y.at0.abs() + y.at1.abs(),
            BoundaryNorm::L2 => y.at0.hypot(y.at1),
            BoundaryNorm::Max => y.at0.abs().max(y.at1.abs()),
        }
    }
}

/// Trapezoid quadrature of `∫₀¹ ‖B S(s) f‖ ds` with the l1 boundary norm.
pub fn miyadera_integral(f: &GridFunction, alpha0: f64, alpha1: f64) -> f64 {
    miyadera_integral_with(f, alpha0, alpha1, BoundaryNorm::L1)
}

pub fn miyadera_integral_with(
    f: &GridFunction,
    alpha0: f64,
    alpha1: f64,
    norm: BoundaryNorm,
) -> f64 {
    let e = ExtendedFunction::new(f.clone());
    let grid = f.grid();
    let integrand: Vec<f64> = grid
        .nodes()
        .map(|s| norm.of(flux_sine_of(&e, s, alpha0, alpha1)))
        .collect();
    grid.trapezoid(&integrand)
}
