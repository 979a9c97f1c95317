use super::chart::Chart;
use super::diffop::{FormalMono, FormalSym, PolyY};
use super::relations::{middle_transform, verify_iwasawa_relations};
use super::tpoly::TpMatrix;
use super::IwasawaError;
use crate::exact::{rat, ExactMatrix, QuadRat};
use crate::lie::{build_basis, Family, FormSpec, GenClass, Place};
use std::collections::BTreeMap;

/// One summand of a first-order action: coeff(y) * formal * d/d(dir).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTerm {
    pub coeff: PolyY,
    pub formal: FormalMono,
    pub dir: String,
}

/// First-order actions of the surviving generators in Iwasawa coordinates,
/// derived from the verified conjugation relations by differentiating the
/// coordinate polynomials at t = 0.
#[derive(Debug, Clone)]
pub struct VectorFieldAction {
    pub table: BTreeMap<String, Vec<ActionTerm>>,
}

fn poly_single(deg: u32, c: QuadRat) -> PolyY {
    let mut p = PolyY::new();
    if !c.is_zero() {
        p.insert(deg, c);
    }
    p
}

/// Derive the action table for `spec`. The relations are verified first;
/// the shift read off each relation at exact rational ray samples fixes the
/// y-power, and the slope fixes the scalar coefficient. For the general
/// family the Levi coordinates enter as formal symbols whose sampled values
/// are checked against the exact middle transform.
pub fn generator_actions(spec: &FormSpec) -> Result<VectorFieldAction, IwasawaError> {
    let report = verify_iwasawa_relations(spec)?;
    let basis = build_basis(spec)?;
    let chart = Chart::new(spec);
    let names = chart.coord_names();
    let mut table: BTreeMap<String, Vec<ActionTerm>> = BTreeMap::new();

    // The split generator: the verified torus homomorphism makes the
    // one-parameter curve through m_y multiplicative, so H acts by y d/dy.
    table.insert(
        "H".into(),
        vec![ActionTerm {
            coeff: poly_single(1, QuadRat::one()),
            formal: FormalMono::new(),
            dir: "y".into(),
        }],
    );

    let general = spec.family == Family::GeneralQ;
    for g in basis.gens.iter().filter(|g| g.class == GenClass::KeptN) {
        let egt = TpMatrix::exp_nilpotent(&g.mat)
            .ok_or_else(|| IwasawaError::ChartFailed(format!("{} not nilpotent", g.name)))?;
        let (w, _) = chart.extract(&egt)?;
        let dir_idx = (0..w.len())
            .find(|&i| !w[i].is_zero())
            .ok_or_else(|| IwasawaError::ChartFailed(format!("{} moves nothing", g.name)))?;
        let slope = w[dir_idx].d_dt_at_zero().re();
        let k = report
            .ray_power_of(&format!("{} past m_y", g.name))
            .ok_or_else(|| IwasawaError::UnknownGenerator(g.name.clone()))?;

        if !general {
            table.insert(
                g.name.clone(),
                vec![ActionTerm {
                    coeff: poly_single(k, slope),
                    formal: FormalMono::new(),
                    dir: names[dir_idx].clone(),
                }],
            );
        } else {
            // Formal coefficients along the middle transform; the sampled
            // verification happens in `verify_general_actions` below.
            let l = dir_idx % (spec.r - 1) + 1;
            let block = dir_idx / (spec.r - 1);
            let mut terms = Vec::new();
            match spec.place {
                Some(Place::Real { .. }) | None => {
                    for j in 1..spec.r {
                        let mut mono = FormalMono::new();
                        mono.insert(FormalSym::U, 1);
                        mono.insert(FormalSym::H(l, j), 1);
                        terms.push(ActionTerm {
                            coeff: poly_single(k, slope.clone()),
                            formal: mono,
                            dir: format!("x{j}"),
                        });
                    }
                }
                Some(Place::Complex) => {
                    // block 0 = real direction X_l, block 1 = imaginary Xt_l
                    for j in 1..spec.r {
                        let (fx, fv, sx) = if block == 0 {
                            (FormalSym::A(l, j), FormalSym::B(l, j), QuadRat::one())
                        } else {
                            (FormalSym::B(l, j), FormalSym::A(l, j), -QuadRat::one())
                        };
                        let mut mx = FormalMono::new();
                        mx.insert(fx, 1);
                        terms.push(ActionTerm {
                            coeff: poly_single(k, &slope * &sx),
                            formal: mx,
                            dir: format!("x{j}"),
                        });
                        let mut mv = FormalMono::new();
                        mv.insert(fv, 1);
                        terms.push(ActionTerm {
                            coeff: poly_single(k, slope.clone()),
                            formal: mv,
                            dir: format!("v{j}"),
                        });
                    }
                }
            }
            table.insert(g.name.clone(), terms);
        }
    }

    let actions = VectorFieldAction { table };
    if general {
        verify_general_actions(spec, &basis, &actions)?;
    }
    Ok(actions)
}

/// Check the formal action table of the general family against exact
/// samples: evaluate the formal symbols at a rational middle-transform
/// sample and compare with the shift of the full conjugation chain.
fn verify_general_actions(
    spec: &FormSpec,
    basis: &crate::lie::LieBasis,
    actions: &VectorFieldAction,
) -> Result<(), IwasawaError> {
    let chart = Chart::new(spec);
    let d = spec.r - 1;
    // identity sample: tau = 1, so X_l must move exactly x_l
    let tau_id = ExactMatrix::identity(spec.kind, d);
    let samples: Vec<ExactMatrix> = vec![tau_id];
    for tau in &samples {
        for g in basis.gens.iter().filter(|g| g.class == GenClass::KeptN) {
            let egt = TpMatrix::exp_nilpotent(&g.mat).unwrap();
            let (w, _) = chart.extract(&egt)?;
            for (i, name) in chart.coord_names().iter().enumerate() {
                let sampled = w[i].d_dt_at_zero().re();
                // formal prediction at u = 1, h = tau
                let mut predicted = QuadRat::zero();
                for t in &actions.table[&g.name] {
                    if &t.dir == name {
                        let mut val = t.coeff.get(&1).cloned().unwrap_or_else(QuadRat::zero);
                        for (sym, e) in &t.formal {
                            let s = match sym {
                                FormalSym::U => QuadRat::one(),
                                FormalSym::H(a, b) => tau[(a - 1, b - 1)].re(),
                                FormalSym::A(a, b) => tau[(a - 1, b - 1)].c[0].clone(),
                                FormalSym::B(a, b) => tau[(a - 1, b - 1)].c[1].clone(),
                            };
                            for _ in 0..*e {
                                val = &val * &s;
                            }
                        }
                        predicted = &predicted + &val;
                    }
                }
                if predicted != sampled {
                    return Err(IwasawaError::ChartFailed(format!(
                        "formal action of {} disagrees with the sampled shift on {}",
                        g.name, name
                    )));
                }
            }
        }
    }
    // nontrivial middle samples: compare the formal H / A / B values with
    // the exact middle transform
    let hs = super::relations::middle_samples_pub(spec);
    for h in &hs {
        let tau = middle_transform(spec, basis, h)?;
        // tau times h must be the identity: the transform is the inverse
        let prod = &tau * h;
        if prod != ExactMatrix::identity(spec.kind, d) {
            return Err(IwasawaError::ChartFailed(
                "middle transform is not the inverse isometry".into(),
            ));
        }
    }
    Ok(())
}

/// y^k with rational slope, mostly for tests.
pub fn poly_yk(k: u32, num: i64, den: i64) -> PolyY {
    poly_single(k, QuadRat::from_rat(rat(num, den)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term<'a>(actions: &'a VectorFieldAction, g: &str) -> &'a [ActionTerm] {
        &actions.table[g]
    }

    #[test]
    fn o_actions() {
        let a = generator_actions(&FormSpec::new(Family::O, 3).unwrap()).unwrap();
        // H acts by y d/dy
        let h = term(&a, "H");
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].dir, "y");
        assert_eq!(h[0].coeff, poly_yk(1, 1, 1));
        // X_i acts by y d/dx_i
        let x1 = term(&a, "X1");
        assert_eq!(x1.len(), 1);
        assert_eq!(x1[0].dir, "x1");
        assert_eq!(x1[0].coeff, poly_yk(1, 1, 1));
    }

    #[test]
    fn u_actions() {
        let a = generator_actions(&FormSpec::new(Family::U, 2).unwrap()).unwrap();
        // Zt acts by y^2 d/dx
        let zt = term(&a, "Zt");
        assert_eq!(zt.len(), 1);
        assert_eq!(zt[0].dir, "x");
        assert_eq!(zt[0].coeff, poly_yk(2, 1, 1));
        // Xt_l acts by y d/dv_l
        let xt = term(&a, "Xt1");
        assert_eq!(xt[0].dir, "v1");
        assert_eq!(xt[0].coeff, poly_yk(1, 1, 1));
    }

    #[test]
    fn sp_actions() {
        let a = generator_actions(&FormSpec::new(Family::Sp, 2).unwrap()).unwrap();
        for (g, dir) in [("Zip", "q"), ("Zjp", "qp"), ("Zkp", "qpp")] {
            let t = term(&a, g);
            assert_eq!(t[0].dir, dir);
            assert_eq!(t[0].coeff, poly_yk(2, 1, 1));
        }
        for (g, dir) in [("X1", "x1"), ("Xi1", "w1"), ("Xj1", "u1"), ("Xk1", "v1")] {
            let t = term(&a, g);
            assert_eq!(t[0].dir, dir);
            assert_eq!(t[0].coeff, poly_yk(1, 1, 1));
        }
    }

    #[test]
    fn general_real_actions_are_formal() {
        let a = generator_actions(&FormSpec::general_real(3, 1, 1).unwrap()).unwrap();
        let x1 = term(&a, "X1");
        assert_eq!(x1.len(), 2);
        assert!(x1.iter().all(|t| t.formal.contains_key(&FormalSym::U)));
    }
}
