use super::tpoly::{TPoly, TpMatrix};
use super::IwasawaError;
use crate::exact::{CompositionScalar, ExactMatrix, QuadRat, ScalarKind};
use crate::lie::{Family, FormSpec, Place};

/// Iwasawa coordinate chart for one family: builds unipotent elements from
/// coordinate polynomials and extracts coordinates back out of products,
/// verifying the factorization exactly.
pub(crate) struct Chart<'a> {
    pub spec: &'a FormSpec,
}

fn tp_scale(p: &TPoly, s: &CompositionScalar) -> TPoly {
    let mut out = TPoly::zero(p.kind.max(s.kind));
    for (k, c) in p.coeffs.iter().enumerate() {
        let sc = s * c;
        if !sc.is_zero() {
            out = &out + &TPoly::monomial(sc, k);
        }
    }
    out
}

impl<'a> Chart<'a> {
    pub fn new(spec: &'a FormSpec) -> Self {
        Chart { spec }
    }

    /// Coordinate names along N, in frame order.
    pub fn coord_names(&self) -> Vec<String> {
        super::diffop::CoordFrame::for_family(self.spec.family, self.spec.place, self.spec.r)
            .coords
    }

    /// Number of vector blocks and central coordinates.
    fn shape(&self) -> (usize, usize) {
        match (self.spec.family, self.spec.place) {
            (Family::O, _) => (1, 0),
            (Family::U, _) => (2, 1),
            (Family::Sp, _) => (4, 3),
            (Family::GeneralQ, Some(Place::Real { .. })) | (Family::GeneralQ, None) => (1, 0),
            (Family::GeneralQ, Some(Place::Complex)) => (2, 0),
        }
    }

    /// Middle metric entry epsilon_l (always +1 except at general real
    /// places with mixed signature).
    fn eps(&self, l: usize) -> i64 {
        if self.spec.s[(l, l)] == CompositionScalar::from_int(1) {
            1
        } else {
            -1
        }
    }

    /// Whether the middle-right column uses conjugation (sesquilinear
    /// families) or plain transposition (bilinear ones).
    fn conjugated(&self) -> bool {
        self.spec.conjugate
    }

    /// Build the unipotent element from coordinate polynomials in frame
    /// order.
    pub fn n_matrix(&self, coords: &[TPoly]) -> TpMatrix {
        let r = self.spec.r;
        let n = r + 1;
        let kind = self.spec.kind;
        let (blocks, central) = self.shape();
        assert_eq!(coords.len(), blocks * (r - 1) + central);
        let mut m = TpMatrix::identity(kind, n);

        // z_l as a scalar polynomial combining the blocks
        let z = |l: usize| -> TPoly {
            let mut acc = coords[l - 1].clone();
            for b in 1..blocks {
                let unit = CompositionScalar::unit(kind, b);
                acc = &acc + &tp_scale(&coords[b * (r - 1) + l - 1], &unit);
            }
            acc
        };

        // corner = -1/2 * sum_l eps_l * z_l * bar(z_l)  (+ central part), or
        // the plain bilinear square at complex places of the general family.
        let mut corner = TPoly::zero(kind);
        for l in 1..r {
            let zl = z(l);
            let zbar = if self.conjugated() {
                TPoly {
                    coeffs: zl.coeffs.iter().map(|c| c.conj()).collect(),
                    kind,
                }
            } else {
                zl.clone()
            };
            let sq = &zl * &zbar;
            let eps = QuadRat::from_rat(crate::exact::rat(-self.eps(l), 2));
            corner = &corner + &tp_scale(&sq, &CompositionScalar::real(eps));
        }
        for c in 0..central {
            let unit = CompositionScalar::unit(kind, c + 1);
            corner = &corner + &tp_scale(&coords[blocks * (r - 1) + c], &unit);
        }

        for l in 1..r {
            let zl = z(l);
            m.set(0, l, zl.clone());
            // middle-right column: -(S')^{-1} z^dagger; with the diagonal
            // middle block this is -eps_l * conj-or-plain(z_l)
            let zcol = if self.conjugated() {
                TPoly {
                    coeffs: zl.coeffs.iter().map(|c| c.conj()).collect(),
                    kind,
                }
            } else {
                zl
            };
            m.set(
                l,
                n - 1,
                tp_scale(&zcol, &CompositionScalar::from_int(-self.eps(l))),
            );
        }
        m.set(0, n - 1, corner);
        m
    }

    /// diag(y, 1, .., 1, 1/y)
    pub fn m_y(&self, y: &QuadRat) -> ExactMatrix {
        let n = self.spec.r + 1;
        let mut m = ExactMatrix::identity(self.spec.kind, n);
        m[(0, 0)] = CompositionScalar::real(y.clone());
        m[(n - 1, n - 1)] = CompositionScalar::real(y.inv());
        m
    }

    /// Extract (coords(t), y) from a product known to be n_{x(t)} m_y, and
    /// verify the factorization exactly by rebuilding.
    pub fn extract(&self, p: &TpMatrix) -> Result<(Vec<TPoly>, QuadRat), IwasawaError> {
        let r = self.spec.r;
        let n = r + 1;
        let kind = self.spec.kind;
        let (blocks, central) = self.shape();

        let p00 = p.entry(0, 0);
        if p00.degree() > Some(0) || p00.is_zero() {
            return Err(IwasawaError::ChartFailed("top-left entry not a constant".into()));
        }
        let y_scalar = p00.coeff(0);
        if !(y_scalar.c[1].is_zero() && y_scalar.c[2].is_zero() && y_scalar.c[3].is_zero()) {
            return Err(IwasawaError::ChartFailed("ray coordinate not real".into()));
        }
        let y = y_scalar.re();

        let mut coords = vec![TPoly::zero(ScalarKind::Real); blocks * (r - 1) + central];
        for l in 1..r {
            let zl = p.entry(0, l);
            for b in 0..blocks {
                let mut comp = TPoly::zero(ScalarKind::Real);
                for (k, c) in zl.coeffs.iter().enumerate() {
                    if !c.c[b].is_zero() {
                        comp = &comp
                            + &TPoly::monomial(
                                CompositionScalar::real(c.c[b].clone()),
                                k,
                            );
                    }
                }
                coords[b * (r - 1) + l - 1] = comp;
            }
            // any scalar component outside the family's blocks must vanish
            for b in blocks..4 {
                if zl.coeffs.iter().any(|c| !c.c[b].is_zero()) {
                    return Err(IwasawaError::ChartFailed(format!(
                        "coordinate row has an unexpected component in slot {b}"
                    )));
                }
            }
        }

        if central > 0 {
            // corner * y = -|z|^2/2 + central imaginary parts
            let corner = tp_scale(p.entry(0, n - 1), &CompositionScalar::real(y.clone()));
            // recompute -|z|^2/2 from the extracted blocks
            let mut half_norm = TPoly::zero(kind);
            for l in 1..r {
                let mut zl = TPoly::zero(kind);
                for b in 0..blocks {
                    let unit = if b == 0 {
                        CompositionScalar::one(kind)
                    } else {
                        CompositionScalar::unit(kind, b)
                    };
                    zl = &zl + &tp_scale(&coords[b * (r - 1) + l - 1], &unit);
                }
                let zbar = TPoly {
                    coeffs: zl.coeffs.iter().map(|c| c.conj()).collect(),
                    kind,
                };
                half_norm = &half_norm + &(&zl * &zbar);
            }
            let minus_half = CompositionScalar::real(QuadRat::from_ratio(-1, 2));
            let expected_real = tp_scale(&half_norm, &minus_half);
            let central_part = &corner - &expected_real;
            for c in 0..central {
                let mut comp = TPoly::zero(ScalarKind::Real);
                for (k, s) in central_part.coeffs.iter().enumerate() {
                    if !s.c[c + 1].is_zero() {
                        comp = &comp
                            + &TPoly::monomial(CompositionScalar::real(s.c[c + 1].clone()), k);
                    }
                }
                coords[blocks * (r - 1) + c] = comp;
            }
            if central_part.coeffs.iter().any(|s| !s.c[0].is_zero()) {
                return Err(IwasawaError::ChartFailed("corner has a stray real part".into()));
            }
        }

        // rebuild and compare exactly
        let rebuilt = self
            .n_matrix(&coords)
            .mul(&TpMatrix::from_constant(&self.m_y(&y)));
        let diff = rebuilt.sub(p);
        if let Some((i, j)) = diff.first_nonzero() {
            return Err(IwasawaError::ChartFailed(format!(
                "rebuild mismatch at ({i},{j})"
            )));
        }
        Ok((coords, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iwasawa::tpoly::TpMatrix;
    use crate::lie::{build_basis, Family, FormSpec};

    #[test]
    fn debug_extract_o3() {
        let spec = FormSpec::new(Family::O, 3).unwrap();
        let basis = build_basis(&spec).unwrap();
        let chart = Chart::new(&spec);
        for g in ["X1", "X2"] {
            let x = &basis.gen(g).unwrap().mat;
            let egt = TpMatrix::exp_nilpotent(x).unwrap();
            match chart.extract(&egt) {
                Ok((coords, y)) => {
                    assert_eq!(y, QuadRat::one());
                    println!("{g}: coords {:?}", coords);
                }
                Err(e) => panic!("{g}: {e:?}"),
            }
        }
    }

    #[test]
    fn debug_extract_o2() {
        let spec = FormSpec::new(Family::O, 2).unwrap();
        let basis = build_basis(&spec).unwrap();
        let chart = Chart::new(&spec);
        let x1 = &basis.gen("X1").unwrap().mat;
        let egt = TpMatrix::exp_nilpotent(x1).unwrap();
        let built = chart.n_matrix(&[egt.entry(0, 1).clone()]);
        for i in 0..3 {
            for j in 0..3 {
                if built.entry(i, j) != egt.entry(i, j) {
                    panic!(
                        "mismatch at ({i},{j}): built {:?} vs exp {:?}",
                        built.entry(i, j),
                        egt.entry(i, j)
                    );
                }
            }
        }
    }
}
