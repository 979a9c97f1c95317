use super::basis::LieBasis;
use super::casimir::CasimirElement;
use serde_json::{json, Value};

/// Serialize a basis to the documented JSON shape: generator names, matrix
/// entries as exact component strings ("num/den", with a "*s2" suffix for
/// sqrt-2 parts), and the k-classification tag.
pub fn basis_to_json(basis: &LieBasis) -> Value {
    let gens: Vec<Value> = basis
        .gens
        .iter()
        .map(|g| {
            let n = g.mat.rows;
            let entries: Vec<Vec<Value>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let s = &g.mat[(i, j)];
                            json!({
                                "re": s.c[0].to_exact_string(),
                                "i": s.c[1].to_exact_string(),
                                "j": s.c[2].to_exact_string(),
                                "k": s.c[3].to_exact_string(),
                            })
                        })
                        .collect()
                })
                .collect();
            json!({
                "name": g.name,
                "class": format!("{:?}", g.class),
                "matrix": entries,
            })
        })
        .collect();
    json!({
        "family": format!("{:?}", basis.spec.family),
        "r": basis.spec.r,
        "pairing_scale": basis.spec.pairing_scale.to_exact_string(),
        "generators": gens,
    })
}

pub fn casimir_to_json(elem: &CasimirElement) -> Value {
    let terms: Vec<Value> = elem
        .terms
        .iter()
        .map(|(w, c)| {
            json!({
                "coeff": c.to_exact_string(),
                "word": w,
            })
        })
        .collect();
    json!({ "terms": terms })
}
