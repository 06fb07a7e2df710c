use nalgebra::DMatrix;

use super::assemble::assemble;
use super::characteristic::{b_lambda, guard_poles};
use super::problem::{Coupling, ProblemSpec};
use crate::dirichlet::discrete_dirichlet;
use crate::error::{Error, Result};
use crate::grid::{BoundaryPair, Grid};

/// Max-norm of `(𝒜 - λ) - 𝒜_λ ℒ_λ` on the trace-mode discretization, in the
/// coordinates `(u₁..u_{N-1}, x₀, x₁)`, where
///
/// `ℒ_λ = [[I, -D_λ], [0, I]]` and `𝒜_λ = [[A₀ - λ, 0], [B, B_λ - λ]]`.
///
/// `D_λ` is assembled column by column from discrete Dirichlet solves and
/// `B_λ` comes from [`b_lambda`], so this is an independent check of the
/// two against the assembled matrix.
pub fn factorization_residual(lambda: f64, spec: &ProblemSpec, grid: Grid) -> Result<f64> {
    if spec.coupling != Coupling::Trace {
        return Err(Error::Argument("factorization is defined for the trace coupling".into()));
    }
    guard_poles(lambda, spec, grid)?;
    let op = assemble(spec, grid)?;
    let n = grid.n_cells();
    let m = n - 1;
    let dim = m + 2;
    // permutation from the (interior, boundary) layout to node indices
    let node_of = |k: usize| if k < m { k + 1 } else if k == m { 0 } else { n };

    let full = DMatrix::from_fn(dim, dim, |r, c| op.entries[(node_of(r), node_of(c))]);
    let shifted = &full - DMatrix::identity(dim, dim) * lambda;

    let mut d = DMatrix::<f64>::zeros(m, 2);
    for (j, e) in [BoundaryPair::new(1.0, 0.0), BoundaryPair::new(0.0, 1.0)].into_iter().enumerate() {
        let lift = discrete_dirichlet(lambda, e, grid, &spec.q_coef, &spec.r_coef)?;
        for i in 0..m {
            d[(i, j)] = lift.profile.at(i + 1);
        }
    }
    let bl = b_lambda(lambda, spec, grid)?;

    let mut l = DMatrix::<f64>::identity(dim, dim);
    l.view_mut((0, m), (m, 2)).copy_from(&(-&d));

    let mut a = DMatrix::<f64>::zeros(dim, dim);
    a.view_mut((0, 0), (m, m)).copy_from(&shifted.view((0, 0), (m, m)));
    // B restricted to interior unknowns
    a.view_mut((m, 0), (2, m)).copy_from(&full.view((m, 0), (2, m)));
    for r in 0..2 {
        for c in 0..2 {
            a[(m + r, m + c)] = bl[(r, c)] - if r == c { lambda } else { 0.0 };
        }
    }
    let diff = shifted - a * l;
    Ok(diff.amax())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::BoundaryClosure;
    use std::f64::consts::PI;

    #[test]
    fn decoupled_identity() {
        let g = Grid::new(60).unwrap();
        let r = factorization_residual(1.0, &ProblemSpec::new(g), g).unwrap();
        assert!(r <= 1e-10, "{r}");
    }

    #[test]
    fn dissipative_identity() {
        let g = Grid::new(60).unwrap();
        let spec = ProblemSpec::dissipative(g, -1.0, -1.0);
        let r = factorization_residual(0.5, &spec, g).unwrap();
        assert!(r <= 1e-10, "{r}");
    }

    #[test]
    fn pole_is_rejected() {
        let g = Grid::new(60).unwrap();
        let spec = ProblemSpec::dissipative(g, -1.0, -1.0);
        assert!(matches!(factorization_residual(-PI * PI, &spec, g), Err(Error::Singular(_))));
    }

    #[test]
    fn identity_with_coefficients_and_either_closure() {
        let g = Grid::new(60).unwrap();
        let q = g.sample(|x| 0.5 - x).unwrap();
        let r = g.sample(|x| -1.0 - x * x).unwrap();
        for closure in [BoundaryClosure::OneSided, BoundaryClosure::Conservative] {
            let spec = ProblemSpec::new(g)
                .with_alpha(2.0, -0.5)
                .with_beta(0.3, -1.0)
                .with_coefficients(q.clone(), r.clone())
                .with_closure(closure);
            for lambda in [0.5, 1.0, -2.0] {
                let res = factorization_residual(lambda, &spec, g).unwrap();
                assert!(res <= 1e-10, "{closure:?} {lambda}: {res}");
            }
        }
    }
}
