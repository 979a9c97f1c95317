//! Invariant Laplacians for the rank-one families O(r,1), U(r,1), Sp*(r,1)
//! and general Q-rank-one orthogonal groups, derived exactly from Lie-algebra
//! data in Iwasawa coordinates, together with desk-scale numerical
//! realizations: weighted-cylinder discretizations of the Laplacian and
//! pseudo-Laplacian, tail and truncation estimates, discrete spectra,
//! Eisenstein series with resolvent continuation, and affine heights over Q.

pub mod exact;
pub mod iwasawa;
pub mod lie;
