//! Operator matrix of the coupled problem, its spectrum, the boundary
//! symbol `B_λ` and the characteristic equation.

mod assemble;
mod characteristic;
mod eigs;
mod factorization;
mod problem;
mod report;

pub use assemble::{assemble, DofMap, OperatorMatrix};
pub use characteristic::{
    analytic_b_lambda, b_lambda, char_eval, char_roots, lift_symbols, periodicity_condition_check,
    ROOT_SCAN_STEP, ROOT_TOL,
};
pub use eigs::{discrete_dirichlet_spectrum, eigenvalues, eigs, real_eigenvalues, MAX_DENSE_DIM};
pub use factorization::factorization_residual;
pub use problem::{BoundaryClosure, Coupling, ProblemSpec};
pub use report::{
    distance_to_dirichlet_spectrum, has_analytic_characteristic, spectral_equivalence_check,
    SpectralReport, MATCH_RADIUS, SPECTRAL_WINDOW,
};
