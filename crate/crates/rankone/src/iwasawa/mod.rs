//! Iwasawa-coordinate side of the derivation: exact verification of the
//! group-level commutation relations with a symbolic parameter, the
//! first-order actions of the generators read off from those relations, and
//! the composition of the reduced Casimir element into an explicit
//! differential operator, compared exactly against the closed formulas.

mod actions;
mod chart;
mod diffop;
mod relations;
mod tpoly;

pub use actions::{generator_actions, ActionTerm, VectorFieldAction};
pub use diffop::{
    casimir_to_diffop, compare_diffop, reference_diffop, renormalization_for, CoordFrame, DiffOp,
    FormalMono, FormalSym, PolyY, Renormalization,
};
pub use relations::{verify_iwasawa_relations, RelationReport};
pub use tpoly::{TPoly, TpMatrix};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IwasawaError {
    #[error("relation {relation} failed; first offending entry ({row},{col})")]
    RelationFailed {
        relation: String,
        row: usize,
        col: usize,
    },
    #[error("unknown generator {0} in the action table")]
    UnknownGenerator(String),
    #[error("coordinate frames differ: {0}")]
    FrameMismatch(String),
    #[error("coefficient matrix is not orthogonal: residual {0:.3e}")]
    NotOrthogonal(f64),
    #[error("sample {0} is not positive definite (min eigenvalue {1:.3e})")]
    NotPositiveDefinite(usize, f64),
    #[error("{0}")]
    Exact(#[from] crate::exact::ExactError),
    #[error("chart extraction failed: {0}")]
    ChartFailed(String),
    #[error("coordinate {0} carries odd derivative order {1}, cannot rescale exactly")]
    OddOrderRescale(String, u32),
}
