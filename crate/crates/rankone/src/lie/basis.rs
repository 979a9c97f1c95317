use super::casimir::CasimirElement;
use super::form::{Family, FormSpec, Place};
use crate::exact::{
    solve_linear, CompositionScalar, ExactError, ExactMatrix, QuadRat, ScalarKind,
};

/// How a generator behaves under the reduction modulo the maximal compact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenClass {
    /// The split torus generator H.
    Split,
    /// N-side generator whose square survives (X-type, and the upper Z-type).
    KeptN,
    /// Equal to sign * keep + (combination lying in k).
    Partner { keep: String, sign: i64 },
    /// Lies in k, acts by zero on functions on G/K.
    InK,
    /// Middle-block generator of the general family, kept opaquely in Omega'.
    MOne,
}

#[derive(Clone)]
pub struct Generator {
    pub name: String,
    pub mat: ExactMatrix,
    pub class: GenClass,
}

/// Ordered list of named generators for one isometry algebra.
pub struct LieBasis {
    pub spec: FormSpec,
    pub gens: Vec<Generator>,
}

/// Gram matrix of the trace pairing over a generator list.
pub struct PairingMatrix {
    pub gram: ExactMatrix,
}

/// B(x, y) = scale * Re(tr(xy)); the scale is 1 except at complex places of
/// the general family where the paper composes with tr_{C/R}.
pub fn trace_pairing(
    spec: &FormSpec,
    a: &ExactMatrix,
    b: &ExactMatrix,
) -> Result<QuadRat, ExactError> {
    if !a.is_square() || a.rows != b.rows || a.cols != b.cols {
        return Err(ExactError::DimensionMismatch("trace pairing".into()));
    }
    Ok(&(a * b).re_trace() * &spec.pairing_scale)
}

/// ab - ba, exactly.
pub fn bracket(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
    if !a.is_square() || a.rows != b.rows || a.cols != b.cols {
        return Err(ExactError::DimensionMismatch("bracket".into()));
    }
    Ok(&(a * b) - &(b * a))
}

impl LieBasis {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn gen(&self, name: &str) -> Option<&Generator> {
        self.gens.iter().find(|g| g.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    /// Gram matrix of the trace pairing; entries are rational.
    pub fn pairing_matrix(&self) -> Result<PairingMatrix, ExactError> {
        let n = self.gens.len();
        let mut gram = ExactMatrix::zero(ScalarKind::Real, n, n);
        for i in 0..n {
            for j in i..n {
                let b = trace_pairing(&self.spec, &self.gens[i].mat, &self.gens[j].mat)?;
                gram[(i, j)] = CompositionScalar::real(b.clone());
                gram[(j, i)] = CompositionScalar::real(b);
            }
        }
        Ok(PairingMatrix { gram })
    }

    /// Expand a matrix exactly in the span of the generators.
    pub fn expand_in_basis(&self, m: &ExactMatrix) -> Result<Vec<(QuadRat, String)>, ExactError> {
        let n = self.spec.r + 1;
        let dim = n * n * 4;
        let k = self.gens.len();
        // Coordinates: all 4 scalar components of every entry.
        let coords = |mat: &ExactMatrix| -> Vec<QuadRat> {
            let mut v = Vec::with_capacity(dim);
            for i in 0..n {
                for j in 0..n {
                    for c in 0..4 {
                        v.push(mat[(i, j)].c[c].clone());
                    }
                }
            }
            v
        };
        let cols: Vec<Vec<QuadRat>> = self.gens.iter().map(|g| coords(&g.mat)).collect();
        let mut rhs = coords(m);
        // Least-structure exact solve: eliminate over the rows.
        let mut coef = vec![QuadRat::zero(); k];
        let mut used_rows: Vec<usize> = Vec::new();
        let mut reduced: Vec<Vec<QuadRat>> = (0..dim)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; k];
        for col in 0..k {
            let piv = (0..dim).find(|&r| !used_rows.contains(&r) && !reduced[r][col].is_zero());
            let Some(p) = piv else {
                return Err(ExactError::SingularMatrix);
            };
            used_rows.push(p);
            pivot_of_col[col] = Some(p);
            let inv = reduced[p][col].inv();
            for c in 0..k {
                reduced[p][c] = &reduced[p][c] * &inv;
            }
            rhs[p] = &rhs[p] * &inv;
            for r in 0..dim {
                if r == p || reduced[r][col].is_zero() {
                    continue;
                }
                let f = reduced[r][col].clone();
                for c in 0..k {
                    let sub = &f * &reduced[p][c];
                    reduced[r][c] = &reduced[r][c] - &sub;
                }
                let sub = &f * &rhs[p];
                rhs[r] = &rhs[r] - &sub;
            }
        }
        for col in 0..k {
            coef[col] = rhs[pivot_of_col[col].unwrap()].clone();
        }
        // Consistency: rows outside the pivots must have zero residual.
        for r in 0..dim {
            if !used_rows.contains(&r) && !rhs[r].is_zero() {
                return Err(ExactError::InconsistentSystem);
            }
        }
        Ok(self
            .gens
            .iter()
            .enumerate()
            .filter(|(i, _)| !coef[*i].is_zero())
            .map(|(i, g)| (coef[i].clone(), g.name.clone()))
            .collect())
    }
}

/// Dual basis with respect to the trace pairing: for each generator x_i the
/// exact combination x_i' with B(x_i, x_j') = delta_ij.
pub fn dual_basis(basis: &LieBasis) -> Result<Vec<(String, CasimirElement)>, ExactError> {
    let coeffs = dual_coefficients(basis)?;
    Ok(basis
        .gens
        .iter()
        .zip(coeffs.iter())
        .map(|(g, col)| {
            let mut elem = CasimirElement::zero();
            for (j, c) in col.iter().enumerate() {
                if !c.is_zero() {
                    elem.add_term(c.clone(), vec![basis.gens[j].name.clone()]);
                }
            }
            (g.name.clone(), elem)
        })
        .collect())
}

/// Columns of the inverse Gram matrix: x_i' = sum_j coeff[i][j] x_j.
pub fn dual_coefficients(basis: &LieBasis) -> Result<Vec<Vec<QuadRat>>, ExactError> {
    let n = basis.gens.len();
    let pm = basis.pairing_matrix()?;
    let det = pm.gram.determinant()?;
    if det.is_zero() {
        return Err(ExactError::DegeneratePairing);
    }
    let inv = solve_linear(&pm.gram, &ExactMatrix::identity(ScalarKind::Real, n))
        .map_err(|_| ExactError::DegeneratePairing)?;
    Ok((0..n)
        .map(|i| (0..n).map(|j| inv[(j, i)].re()).collect())
        .collect())
}

/// Construct the named generator list for the family fixed by `spec`.
pub fn build_basis(spec: &FormSpec) -> Result<LieBasis, ExactError> {
    let r = spec.r;
    let n = r + 1;
    let kind = spec.kind;
    let mut gens: Vec<Generator> = Vec::new();

    let e = |i: usize, j: usize, s: CompositionScalar| -> ExactMatrix {
        let mut m = ExactMatrix::zero(kind, n, n);
        m[(i, j)] = s;
        m
    };
    let one = || CompositionScalar::one(kind);
    let unit = |slot: usize| CompositionScalar::unit(kind, slot);
    let inv_s2 = QuadRat::inv_sqrt2();

    // H = diag(1, 0, .., 0, -1) in every family.
    let h = &e(0, 0, one()) - &e(n - 1, n - 1, one());
    gens.push(Generator {
        name: "H".into(),
        mat: h,
        class: GenClass::Split,
    });

    match (spec.family, spec.place) {
        (Family::O, _) | (Family::GeneralQ, Some(Place::Real { .. })) => {
            // Middle metric entries (+1/-1) of the form matrix.
            let eps: Vec<i64> = (0..r - 1)
                .map(|i| {
                    if spec.s[(i + 1, i + 1)] == CompositionScalar::from_int(1) {
                        1
                    } else {
                        -1
                    }
                })
                .collect();
            for l in 1..r {
                let sgn = CompositionScalar::from_int(eps[l - 1]);
                let x = &e(0, l, one()) - &e(l, n - 1, sgn.clone());
                let y = x.transpose();
                gens.push(Generator {
                    name: format!("X{l}"),
                    mat: x,
                    class: GenClass::KeptN,
                });
                gens.push(Generator {
                    name: format!("Y{l}"),
                    mat: y,
                    class: GenClass::Partner {
                        keep: format!("X{l}"),
                        sign: 1,
                    },
                });
            }
            let theta_class = if spec.family == Family::O {
                GenClass::InK
            } else {
                GenClass::MOne
            };
            for i in 1..r {
                for j in (i + 1)..r {
                    let m = if eps[i - 1] == eps[j - 1] {
                        (&e(i, j, one()) - &e(j, i, one())).scale(&inv_s2)
                    } else {
                        (&e(i, j, one()) + &e(j, i, one())).scale(&inv_s2)
                    };
                    gens.push(Generator {
                        name: format!("Th.{i}.{j}"),
                        mat: m,
                        class: theta_class.clone(),
                    });
                }
            }
        }
        (Family::U, _) => {
            let i_ = || unit(1);
            gens.push(Generator {
                name: "Ht".into(),
                mat: &e(0, 0, i_()) + &e(n - 1, n - 1, i_()),
                class: GenClass::InK,
            });
            for l in 1..r {
                let x = &e(0, l, one()) - &e(l, n - 1, one());
                let xt = &e(0, l, i_()) + &e(l, n - 1, i_());
                let y = &e(l, 0, one()) - &e(n - 1, l, one());
                let yt = &e(l, 0, i_()) + &e(n - 1, l, i_());
                gens.push(Generator {
                    name: format!("X{l}"),
                    mat: x,
                    class: GenClass::KeptN,
                });
                gens.push(Generator {
                    name: format!("Xt{l}"),
                    mat: xt,
                    class: GenClass::KeptN,
                });
                gens.push(Generator {
                    name: format!("Y{l}"),
                    mat: y,
                    class: GenClass::Partner {
                        keep: format!("X{l}"),
                        sign: 1,
                    },
                });
                gens.push(Generator {
                    name: format!("Yt{l}"),
                    mat: yt,
                    class: GenClass::Partner {
                        keep: format!("Xt{l}"),
                        sign: -1,
                    },
                });
            }
            gens.push(Generator {
                name: "Z".into(),
                mat: e(n - 1, 0, i_()),
                class: GenClass::Partner {
                    keep: "Zt".into(),
                    sign: -1,
                },
            });
            gens.push(Generator {
                name: "Zt".into(),
                mat: e(0, n - 1, i_()),
                class: GenClass::KeptN,
            });
            // u(r-1) block: i on the diagonal, skew and i*symmetric off it.
            for l in 1..r {
                gens.push(Generator {
                    name: format!("Thd.{l}"),
                    mat: e(l, l, i_()),
                    class: GenClass::InK,
                });
            }
            for i in 1..r {
                for j in (i + 1)..r {
                    gens.push(Generator {
                        name: format!("Tha.{i}.{j}"),
                        mat: (&e(i, j, one()) - &e(j, i, one())).scale(&inv_s2),
                        class: GenClass::InK,
                    });
                    gens.push(Generator {
                        name: format!("Thb.{i}.{j}"),
                        mat: (&e(i, j, i_()) + &e(j, i, i_())).scale(&inv_s2),
                        class: GenClass::InK,
                    });
                }
            }
        }
        (Family::Sp, _) => {
            let units = [unit(1), unit(2), unit(3)];
            let tags = ["i", "j", "k"];
            for (t, u) in tags.iter().zip(units.iter()) {
                gens.push(Generator {
                    name: format!("H{t}"),
                    mat: &e(0, 0, u.clone()) + &e(n - 1, n - 1, u.clone()),
                    class: GenClass::InK,
                });
            }
            for l in 1..r {
                let x = &e(0, l, one()) - &e(l, n - 1, one());
                let y = &e(l, 0, one()) - &e(n - 1, l, one());
                gens.push(Generator {
                    name: format!("X{l}"),
                    mat: x,
                    class: GenClass::KeptN,
                });
                gens.push(Generator {
                    name: format!("Y{l}"),
                    mat: y,
                    class: GenClass::Partner {
                        keep: format!("X{l}"),
                        sign: 1,
                    },
                });
                for (t, u) in tags.iter().zip(units.iter()) {
                    let xu = &e(0, l, u.clone()) + &e(l, n - 1, u.clone());
                    let yu = &e(l, 0, u.clone()) + &e(n - 1, l, u.clone());
                    gens.push(Generator {
                        name: format!("X{t}{l}"),
                        mat: xu,
                        class: GenClass::KeptN,
                    });
                    gens.push(Generator {
                        name: format!("Y{t}{l}"),
                        mat: yu,
                        class: GenClass::Partner {
                            keep: format!("X{t}{l}"),
                            sign: -1,
                        },
                    });
                }
            }
            for (t, u) in tags.iter().zip(units.iter()) {
                gens.push(Generator {
                    name: format!("Z{t}m"),
                    mat: e(n - 1, 0, u.clone()),
                    class: GenClass::Partner {
                        keep: format!("Z{t}p"),
                        sign: -1,
                    },
                });
                gens.push(Generator {
                    name: format!("Z{t}p"),
                    mat: e(0, n - 1, u.clone()),
                    class: GenClass::KeptN,
                });
            }
            // sp*(r-1) block.
            for l in 1..r {
                for (t, u) in tags.iter().zip(units.iter()) {
                    gens.push(Generator {
                        name: format!("Thd{t}.{l}"),
                        mat: e(l, l, u.clone()),
                        class: GenClass::InK,
                    });
                }
            }
            for i in 1..r {
                for j in (i + 1)..r {
                    gens.push(Generator {
                        name: format!("Tha.{i}.{j}"),
                        mat: (&e(i, j, one()) - &e(j, i, one())).scale(&inv_s2),
                        class: GenClass::InK,
                    });
                    for (t, u) in tags.iter().zip(units.iter()) {
                        gens.push(Generator {
                            name: format!("Thb{t}.{i}.{j}"),
                            mat: (&e(i, j, u.clone()) + &e(j, i, u.clone())).scale(&inv_s2),
                            class: GenClass::InK,
                        });
                    }
                }
            }
        }
        (Family::GeneralQ, Some(Place::Complex)) => {
            let i_ = || unit(1);
            gens.push(Generator {
                name: "Ht".into(),
                mat: &e(0, 0, i_()) - &e(n - 1, n - 1, i_()),
                class: GenClass::InK,
            });
            for l in 1..r {
                let x = &e(0, l, one()) - &e(l, n - 1, one());
                let xt = &e(0, l, i_()) - &e(l, n - 1, i_());
                let y = &e(l, 0, one()) - &e(n - 1, l, one());
                let yt = &e(l, 0, i_()) - &e(n - 1, l, i_());
                gens.push(Generator {
                    name: format!("X{l}"),
                    mat: x,
                    class: GenClass::KeptN,
                });
                gens.push(Generator {
                    name: format!("Xt{l}"),
                    mat: xt,
                    class: GenClass::KeptN,
                });
                gens.push(Generator {
                    name: format!("Y{l}"),
                    mat: y,
                    class: GenClass::Partner {
                        keep: format!("X{l}"),
                        sign: 1,
                    },
                });
                gens.push(Generator {
                    name: format!("Yt{l}"),
                    mat: yt,
                    class: GenClass::Partner {
                        keep: format!("Xt{l}"),
                        sign: -1,
                    },
                });
            }
            // o(r-1, C) block as a real algebra.
            for i in 1..r {
                for j in (i + 1)..r {
                    gens.push(Generator {
                        name: format!("Tha.{i}.{j}"),
                        mat: (&e(i, j, one()) - &e(j, i, one())).scale(&inv_s2),
                        class: GenClass::MOne,
                    });
                    gens.push(Generator {
                        name: format!("Thb.{i}.{j}"),
                        mat: (&e(i, j, i_()) - &e(j, i, i_())).scale(&inv_s2),
                        class: GenClass::MOne,
                    });
                }
            }
        }
        (Family::GeneralQ, None) => {
            return Err(ExactError::UnsupportedFamily("general family needs a place".into()))
        }
    }

    let basis = LieBasis {
        spec: spec.clone(),
        gens,
    };
    // Every generator must satisfy the isometry-algebra condition exactly,
    // and the count must equal the real dimension of the algebra.
    for g in &basis.gens {
        if !spec.in_algebra(&g.mat) {
            return Err(ExactError::UnsupportedFamily(format!(
                "generator {} violates the algebra condition",
                g.name
            )));
        }
    }
    if basis.gens.len() != spec.algebra_dim() {
        return Err(ExactError::UnsupportedFamily(format!(
            "generator count {} != algebra dimension {}",
            basis.gens.len(),
            spec.algebra_dim()
        )));
    }
    // Classes must be structurally sound: InK generators and the partner
    // combinations sign*keep - partner must lie in k.
    for g in &basis.gens {
        match &g.class {
            GenClass::InK => {
                if !spec.in_k(&g.mat) {
                    return Err(ExactError::UnsupportedFamily(format!(
                        "{} tagged InK but not fixed by the Cartan involution",
                        g.name
                    )));
                }
            }
            GenClass::Partner { keep, sign } => {
                let keep_mat = &basis.gen(keep).expect("partner target exists").mat;
                let combo = &g.mat - &keep_mat.scale(&QuadRat::from_int(*sign));
                if !spec.in_k(&combo) {
                    return Err(ExactError::UnsupportedFamily(format!(
                        "{} - ({sign})*{keep} does not lie in k",
                        g.name
                    )));
                }
            }
            _ => {}
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn dimension_counts() {
        // dim o(4) = 6 for r = 3
        let b = build_basis(&FormSpec::new(Family::O, 3).unwrap()).unwrap();
        assert_eq!(b.gens.len(), 6);
        // dim_R u(3) = 9 for r = 2
        let b = build_basis(&FormSpec::new(Family::U, 2).unwrap()).unwrap();
        assert_eq!(b.gens.len(), 9);
        // dim sp*(2,1) = 21
        let b = build_basis(&FormSpec::new(Family::Sp, 2).unwrap()).unwrap();
        assert_eq!(b.gens.len(), 21);
        // general real place with (p, q) = (2, 1), r = 4: dim o(5) = 10
        let b = build_basis(&FormSpec::general_real(4, 2, 1).unwrap()).unwrap();
        assert_eq!(b.gens.len(), 10);
        // complex place, r = 3: dim_R o(4, C) = 12
        let b = build_basis(&FormSpec::general_complex(3).unwrap()).unwrap();
        assert_eq!(b.gens.len(), 12);
    }

    #[test]
    fn x1_matrix_for_o_r2() {
        // first row (0, 1, 0), middle-right column -1
        let b = build_basis(&FormSpec::new(Family::O, 2).unwrap()).unwrap();
        let x1 = &b.gen("X1").unwrap().mat;
        assert_eq!(x1[(0, 1)], CompositionScalar::from_int(1));
        assert_eq!(x1[(1, 2)], CompositionScalar::from_int(-1));
        assert!(x1[(0, 0)].is_zero() && x1[(0, 2)].is_zero());
    }

    #[test]
    fn bracket_tables_o() {
        let b = build_basis(&FormSpec::new(Family::O, 4).unwrap()).unwrap();
        let h = &b.gen("H").unwrap().mat;
        let x1 = &b.gen("X1").unwrap().mat;
        let x2 = &b.gen("X2").unwrap().mat;
        let y1 = &b.gen("Y1").unwrap().mat;
        assert_eq!(&bracket(x1, y1).unwrap(), h);
        assert!(bracket(h, h).unwrap().is_zero());
        assert!(bracket(x1, x2).unwrap().is_zero());
    }

    #[test]
    fn pairing_tables_o() {
        let spec = FormSpec::new(Family::O, 3).unwrap();
        let b = build_basis(&spec).unwrap();
        let h = &b.gen("H").unwrap().mat;
        let x1 = &b.gen("X1").unwrap().mat;
        let y1 = &b.gen("Y1").unwrap().mat;
        let y2 = &b.gen("Y2").unwrap().mat;
        assert_eq!(trace_pairing(&spec, h, h).unwrap(), QuadRat::from_int(2));
        assert_eq!(trace_pairing(&spec, x1, y1).unwrap(), QuadRat::from_int(2));
        assert_eq!(trace_pairing(&spec, x1, y2).unwrap(), QuadRat::zero());
        assert_eq!(trace_pairing(&spec, h, x1).unwrap(), QuadRat::zero());
    }

    #[test]
    fn dual_tables() {
        // O: H' = H/2, X' = Y/2, theta' = -theta
        let b = build_basis(&FormSpec::new(Family::O, 3).unwrap()).unwrap();
        let duals = dual_basis(&b).unwrap();
        let get = |n: &str| &duals.iter().find(|(g, _)| g == n).unwrap().1;
        let mut expect = CasimirElement::zero();
        expect.add_term(QuadRat::from_rat(rat(1, 2)), vec!["H".into()]);
        assert_eq!(get("H"), &expect);
        let mut expect = CasimirElement::zero();
        expect.add_term(QuadRat::from_rat(rat(1, 2)), vec!["Y1".into()]);
        assert_eq!(get("X1"), &expect);
        let mut expect = CasimirElement::zero();
        expect.add_term(QuadRat::from_int(-1), vec!["Th.1.2".into()]);
        assert_eq!(get("Th.1.2"), &expect);

        // U: Z' = -Zt, Ht' = -Ht/2
        let b = build_basis(&FormSpec::new(Family::U, 2).unwrap()).unwrap();
        let duals = dual_basis(&b).unwrap();
        let get = |n: &str| &duals.iter().find(|(g, _)| g == n).unwrap().1;
        let mut expect = CasimirElement::zero();
        expect.add_term(QuadRat::from_int(-1), vec!["Zt".into()]);
        assert_eq!(get("Z"), &expect);
        let mut expect = CasimirElement::zero();
        expect.add_term(QuadRat::from_rat(rat(-1, 2)), vec!["Ht".into()]);
        assert_eq!(get("Ht"), &expect);
    }

    #[test]
    fn orthonormal_basis_is_self_dual() {
        // A toy abelian basis which happens to be orthonormal for B.
        let spec = FormSpec::new(Family::O, 2).unwrap();
        // Use 3x3 diagonal idempotent-like matrices with B(x, x) = 1.
        let mut m1 = ExactMatrix::zero(ScalarKind::Real, 3, 3);
        m1[(1, 1)] = CompositionScalar::from_int(1);
        let mut m2 = ExactMatrix::zero(ScalarKind::Real, 3, 3);
        m2[(0, 0)] = CompositionScalar::real(QuadRat::inv_sqrt2());
        m2[(2, 2)] = CompositionScalar::real(-QuadRat::inv_sqrt2());
        let basis = LieBasis {
            spec,
            gens: vec![
                Generator {
                    name: "a".into(),
                    mat: m1,
                    class: GenClass::KeptN,
                },
                Generator {
                    name: "b".into(),
                    mat: m2,
                    class: GenClass::KeptN,
                },
            ],
        };
        for (name, dual) in dual_basis(&basis).unwrap() {
            let mut expect = CasimirElement::zero();
            expect.add_term(QuadRat::one(), vec![name.clone()]);
            assert_eq!(dual, expect);
        }
    }

    #[test]
    fn bracket_tables_u_and_sp() {
        let b = build_basis(&FormSpec::new(Family::U, 3).unwrap()).unwrap();
        let h = &b.gen("H").unwrap().mat;
        let m = |n: &str| &b.gen(n).unwrap().mat;
        assert_eq!(&bracket(m("X1"), m("Y1")).unwrap(), h);
        assert_eq!(&bracket(m("Xt2"), m("Yt2")).unwrap(), &-h);
        assert_eq!(&bracket(m("Z"), m("Zt")).unwrap(), h);

        let b = build_basis(&FormSpec::new(Family::Sp, 2).unwrap()).unwrap();
        let h = &b.gen("H").unwrap().mat;
        let m = |n: &str| &b.gen(n).unwrap().mat;
        for t in ["i", "j", "k"] {
            assert_eq!(&bracket(m(&format!("Z{t}m")), m(&format!("Z{t}p"))).unwrap(), h);
            assert_eq!(
                &bracket(m(&format!("X{t}1")), m(&format!("Y{t}1"))).unwrap(),
                &-h
            );
        }
        assert_eq!(&bracket(m("X1"), m("Y1")).unwrap(), h);
    }

    #[test]
    fn expand_in_basis_roundtrip() {
        let b = build_basis(&FormSpec::new(Family::U, 2).unwrap()).unwrap();
        let h = &b.gen("H").unwrap().mat;
        let z = &b.gen("Z").unwrap().mat;
        let combo = &h.scale(&QuadRat::from_ratio(3, 7)) - &z.scale(&QuadRat::from_int(2));
        let expansion = b.expand_in_basis(&combo).unwrap();
        assert_eq!(expansion.len(), 2);
        for (c, name) in expansion {
            match name.as_str() {
                "H" => assert_eq!(c, QuadRat::from_ratio(3, 7)),
                "Z" => assert_eq!(c, QuadRat::from_int(-2)),
                other => panic!("unexpected generator {other}"),
            }
        }
    }
}
