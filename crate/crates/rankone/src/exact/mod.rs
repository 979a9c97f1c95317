//! Exact scalar arithmetic: rationals, the quadratic extension Q(sqrt 2),
//! composition scalars (real, complex, rational quaternions), and exact
//! linear algebra over them.

mod matrix;
mod quadrat;
mod scalar;

pub use matrix::{solve_linear, ExactMatrix};
pub use quadrat::{rat, rat_i, QuadRat, Rat};
pub use scalar::{CompositionScalar, ScalarKind};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("trace pairing is degenerate")]
    DegeneratePairing,
    #[error("word {0:?} does not match any implemented rewrite pattern")]
    NonReducibleWord(Vec<String>),
    #[error("inconsistent linear system")]
    InconsistentSystem,
}
