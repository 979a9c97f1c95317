//! Lie-algebra bases for the rank-one families, the trace pairing with its
//! dual bases, and the Casimir element with its reduction modulo the
//! maximal-compact subalgebra.

mod basis;
mod casimir;
mod form;
mod json;

pub use basis::{
    bracket, build_basis, dual_basis, dual_coefficients, trace_pairing, GenClass, Generator,
    LieBasis, PairingMatrix,
};
pub use casimir::{casimir, pbw_normal_form, reduce_mod_k, CasimirElement, ReducedCasimir};
pub use form::{Family, FormSpec, Place};
pub use json::{basis_to_json, casimir_to_json};
