use crate::exact::{CompositionScalar, ExactError, ExactMatrix, QuadRat, ScalarKind};

/// The rank-one families handled by the exact layer.
///
/// `GeneralQ` stands for one archimedean place of a Q-rank-one orthogonal
/// group: a real place with middle-block signature (p, q), or a complex
/// place (bilinear orthogonal group over C).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Family {
    O,
    U,
    Sp,
    GeneralQ,
}

/// One archimedean place of the general family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Place {
    Real { p: usize, q: usize },
    Complex,
}

/// The data fixing one isometry algebra: the family, the rank parameter r,
/// the form matrix S, and how conjugate-transposition and the trace pairing
/// are taken for this family.
#[derive(Clone)]
pub struct FormSpec {
    pub family: Family,
    pub r: usize,
    pub place: Option<Place>,
    pub s: ExactMatrix,
    pub kind: ScalarKind,
    /// Whether the isometry condition uses plain or conjugate transpose.
    pub conjugate: bool,
    /// Scale on Re(tr(xy)); 2 at complex places of the general family.
    pub pairing_scale: QuadRat,
}

impl FormSpec {
    pub fn new(family: Family, r: usize) -> Result<Self, ExactError> {
        if r < 2 {
            return Err(ExactError::UnsupportedFamily(format!(
                "rank parameter r = {r} must be at least 2"
            )));
        }
        let spec = match family {
            Family::O => FormSpec {
                family,
                r,
                place: None,
                s: hyperbolic_form(ScalarKind::Real, r, &middle_identity(ScalarKind::Real, r - 1)),
                kind: ScalarKind::Real,
                conjugate: false,
                pairing_scale: QuadRat::one(),
            },
            Family::U => FormSpec {
                family,
                r,
                place: None,
                s: hyperbolic_form(
                    ScalarKind::Complex,
                    r,
                    &middle_identity(ScalarKind::Complex, r - 1),
                ),
                kind: ScalarKind::Complex,
                conjugate: true,
                pairing_scale: QuadRat::one(),
            },
            Family::Sp => FormSpec {
                family,
                r,
                place: None,
                s: hyperbolic_form(
                    ScalarKind::Quaternion,
                    r,
                    &middle_identity(ScalarKind::Quaternion, r - 1),
                ),
                kind: ScalarKind::Quaternion,
                conjugate: true,
                pairing_scale: QuadRat::one(),
            },
            Family::GeneralQ => {
                return Err(ExactError::UnsupportedFamily(
                    "general family needs an explicit place; use general_real/general_complex"
                        .into(),
                ))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Real place of the general family with middle-block signature (p, q).
    pub fn general_real(r: usize, p: usize, q: usize) -> Result<Self, ExactError> {
        if r < 2 || p + q != r - 1 {
            return Err(ExactError::UnsupportedFamily(format!(
                "real place needs p + q = r - 1, got r = {r}, p = {p}, q = {q}"
            )));
        }
        let mut mid = ExactMatrix::zero(ScalarKind::Real, r - 1, r - 1);
        for i in 0..(r - 1) {
            mid[(i, i)] = if i < p {
                CompositionScalar::from_int(1)
            } else {
                CompositionScalar::from_int(-1)
            };
        }
        let spec = FormSpec {
            family: Family::GeneralQ,
            r,
            place: Some(Place::Real { p, q }),
            s: hyperbolic_form(ScalarKind::Real, r, &mid),
            kind: ScalarKind::Real,
            conjugate: false,
            pairing_scale: QuadRat::one(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Complex place of the general family: the bilinear orthogonal group
    /// over C, with the trace pairing doubled by tr_{C/R}.
    pub fn general_complex(r: usize) -> Result<Self, ExactError> {
        if r < 2 {
            return Err(ExactError::UnsupportedFamily(format!("r = {r} too small")));
        }
        let spec = FormSpec {
            family: Family::GeneralQ,
            r,
            place: Some(Place::Complex),
            s: hyperbolic_form(
                ScalarKind::Complex,
                r,
                &middle_identity(ScalarKind::Complex, r - 1),
            ),
            kind: ScalarKind::Complex,
            conjugate: false,
            pairing_scale: QuadRat::from_int(2),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Conjugate/plain transpose, as appropriate for the family.
    pub fn dagger(&self, m: &ExactMatrix) -> ExactMatrix {
        if self.conjugate {
            m.conj_transpose()
        } else {
            m.transpose()
        }
    }

    /// Exact check of the isometry-algebra condition dagger(g) S + S g = 0.
    pub fn in_algebra(&self, g: &ExactMatrix) -> bool {
        let lhs = &(&self.dagger(g) * &self.s) + &(&self.s * g);
        lhs.is_zero()
    }

    /// Membership in the maximal-compact subalgebra: fixed points of the
    /// Cartan involution, i.e. conjugate-transpose equals -g. At complex
    /// places of the general family the form is bilinear but the involution
    /// is still conjugate-linear.
    pub fn in_k(&self, g: &ExactMatrix) -> bool {
        (&g.conj_transpose() + g).is_zero()
    }

    /// Real dimension of the isometry algebra.
    pub fn algebra_dim(&self) -> usize {
        let r = self.r;
        match self.family {
            Family::O => (r + 1) * r / 2,
            Family::U => (r + 1) * (r + 1),
            Family::Sp => (r + 1) * (2 * r + 3),
            Family::GeneralQ => match self.place.unwrap() {
                Place::Real { .. } => (r + 1) * r / 2,
                // real dimension of o(r+1, C)
                Place::Complex => (r + 1) * r,
            },
        }
    }

    fn validate(&self) -> Result<(), ExactError> {
        let n = self.r + 1;
        if self.s.rows != n || self.s.cols != n {
            return Err(ExactError::DimensionMismatch("form matrix size".into()));
        }
        // symmetric (or hermitian) and nondegenerate, with unit hyperbolic corners
        if self.dagger(&self.s) != self.s {
            return Err(ExactError::UnsupportedFamily("form not self-dagger".into()));
        }
        let one = CompositionScalar::one(self.kind);
        if self.s[(0, n - 1)] != one || self.s[(n - 1, 0)] != one {
            return Err(ExactError::UnsupportedFamily("corner entries must be 1".into()));
        }
        if self.kind != ScalarKind::Quaternion {
            let det = self.s.determinant()?;
            if det.is_zero() {
                return Err(ExactError::SingularMatrix);
            }
        }
        Ok(())
    }
}

fn middle_identity(kind: ScalarKind, n: usize) -> ExactMatrix {
    ExactMatrix::identity(kind, n)
}

/// The antidiagonal-hyperbolic bordered form: unit corners, given middle block.
fn hyperbolic_form(kind: ScalarKind, r: usize, middle: &ExactMatrix) -> ExactMatrix {
    let n = r + 1;
    let mut s = ExactMatrix::zero(kind, n, n);
    s[(0, n - 1)] = CompositionScalar::one(kind);
    s[(n - 1, 0)] = CompositionScalar::one(kind);
    for i in 0..(r - 1) {
        for j in 0..(r - 1) {
            s[(i + 1, j + 1)] = middle[(i, j)].clone();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_shapes() {
        let spec = FormSpec::new(Family::O, 3).unwrap();
        assert_eq!(spec.s.rows, 4);
        assert!(spec.in_algebra(&ExactMatrix::zero(ScalarKind::Real, 4, 4)));
        let spec = FormSpec::general_real(4, 2, 1).unwrap();
        assert_eq!(spec.s[(2, 2)], CompositionScalar::from_int(1));
        assert_eq!(spec.s[(3, 3)], CompositionScalar::from_int(-1));
    }

    #[test]
    fn small_r_rejected() {
        assert!(FormSpec::new(Family::O, 1).is_err());
        assert!(FormSpec::general_real(3, 1, 0).is_err());
    }
}
