//! Numeric realization of the cusp cylinder (N cap Gamma)\N x (y_lo, y_hi)
//! with the invariant weighted measure: Fourier-mode assembly of the
//! Laplacian and the pseudo-Laplacian, positivity of its fragments, tail and
//! truncation estimates, the gradient identity, and discrete spectra.

mod cutoff;
mod grid;
mod op;
mod spectrum;

pub use cutoff::{cutoff_beta_t, cutoff_phi_t, cutoff_tau, RadialCutoff, SMOOTHSTEP_D1, SMOOTHSTEP_D2};
pub use grid::{build_grid, CylinderGrid, GridFunction, Mode};
pub use op::{
    assemble, apply_pseudocusp_constraint, b1_norm, check_sy_splitting, check_tail_bound,
    check_truncation_bound, fragment_perturbed, fragment_radial, fragment_tangential,
    gradient_identity_check, quadratic_form, tail_norm, DiscreteOperator,
};
pub use spectrum::{spectrum, SpectrumResult};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CuspError {
    #[error("bad domain: {0}")]
    BadDomain(String),
    #[error("derived operator does not match the family pattern: {0}")]
    MissingDiffOp(String),
    #[error("cut height lies outside the radial domain")]
    CutOutsideDomain,
    #[error("grid mismatch between function and operator")]
    GridMismatch,
    #[error("function violates the pseudo-cuspform constraint")]
    ConstraintViolated,
    #[error("eigen/linear solver failure: {0}")]
    SolverFailure(String),
    #[error("bad cutoff parameters: {0}")]
    BadParameters(String),
}
