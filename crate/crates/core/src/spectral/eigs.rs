use nalgebra::{Complex, DMatrix, Schur};

use super::assemble::OperatorMatrix;
use crate::error::{Error, Result};

/// Largest matrix handed to the dense eigensolver.
pub const MAX_DENSE_DIM: usize = 2000;

/// Eigenvalues of the assembled operator, sorted by real part.
pub fn eigs(m: &OperatorMatrix) -> Result<Vec<Complex<f64>>> {
    eigenvalues(&m.entries)
}

/// Eigenvalues of a dense real matrix through the real Schur form, sorted by
/// real part and then imaginary part.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    if !m.is_square() {
        return Err(Error::Argument(format!("matrix is {}x{}", m.nrows(), m.ncols())));
    }
    let n = m.nrows();
    if n > MAX_DENSE_DIM {
        return Err(Error::Argument(format!(
            "dense eigensolve limited to dim <= {MAX_DENSE_DIM}, got {n}"
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let iterations = 100 * n.max(1);
    let schur = Schur::try_new(m.clone(), f64::EPSILON, iterations)
        .ok_or(Error::NonConvergence { iterations })?;
    let mut ev: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ev)
}

/// Real parts of the eigenvalues whose imaginary part is negligible.
pub fn real_eigenvalues(ev: &[Complex<f64>]) -> Vec<f64> {
    ev.iter()
        .filter(|z| z.im.abs() <= 1e-8 * z.re.abs().max(1.0))
        .map(|z| z.re)
        .collect()
}

/// Closed-form spectrum of the Dirichlet second-difference matrix,
/// `-(4/h²) sin²(kπh/2)`, `k = 1..N-1`.
pub fn discrete_dirichlet_spectrum(n_cells: usize) -> Vec<f64> {
    let h = 1.0 / n_cells as f64;
    (1..n_cells)
        .map(|k| -(4.0 / (h * h)) * (k as f64 * std::f64::consts::PI * h / 2.0).sin().powi(2))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::spectral::{assemble, ProblemSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let ev = eigenvalues(&m).unwrap();
        let re: Vec<f64> = ev.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![1.0, 2.0, 3.0]);
        assert!(ev.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn rotation_has_complex_pair() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let ev = eigenvalues(&m).unwrap();
        assert!((ev[0].im.abs() - 1.0).abs() < 1e-14);
        assert!(real_eigenvalues(&ev).is_empty());
    }

    #[test]
    fn dirichlet_block_matches_closed_form() {
        let g = Grid::new(100).unwrap();
        let m = assemble(&ProblemSpec::new(g), g).unwrap();
        let ev = eigenvalues(&m.interior_block()).unwrap();
        let mut exact = discrete_dirichlet_spectrum(100);
        exact.sort_by(f64::total_cmp);
        for (z, e) in ev.iter().zip(&exact) {
            assert!(((z.re - e) / e).abs() < 1e-8, "{} vs {e}", z.re);
        }
    }

    #[test]
    fn similarity_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 12;
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        // well conditioned: identity plus a small perturbation
        let t = DMatrix::identity(n, n) + DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.1..0.1));
        let tinv = t.clone().try_inverse().unwrap();
        let a = eigenvalues(&m).unwrap();
        let b = eigenvalues(&(&tinv * &m * &t)).unwrap();
        assert_eq!(a.len(), b.len());
        for x in &a {
            let d = b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-8, "{x}: {d}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(eigenvalues(&DMatrix::zeros(2, 3)).is_err());
        let mut m = DMatrix::<f64>::zeros(2, 2);
        m[(0, 1)] = f64::NAN;
        assert!(eigenvalues(&m).is_err());
    }
}
