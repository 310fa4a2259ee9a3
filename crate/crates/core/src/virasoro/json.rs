//! JSON form of [`OperatorSpec`]:
//!
//! ```json
//! {"quad_a": [[i, j, c]], "lin_b_rule": [{"shift": s, "from": k, "poly_in_m": [c0, c1]}],
//!  "lin_extra": [[src, tgt, c]], "quad_c": [[k, l, c]], "const": c}
//! ```
//!
//! `poly_in_m` lists the coefficients of `1, m, m², ...`.

use serde::{Deserialize, Serialize};

use super::operator::{source_param, LinFamily, OperatorSpec};
use crate::algebra::{ParamMono, ParamPoly, Rational};

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    shift: i32,
    from: u32,
    poly_in_m: Vec<ParamPoly>,
}

#[derive(Serialize, Deserialize)]
pub(super) struct OperatorJson {
    #[serde(default)]
    quad_a: Vec<(u32, u32, ParamPoly)>,
    #[serde(default)]
    lin_b_rule: Vec<FamilyJson>,
    #[serde(default)]
    lin_extra: Vec<(u32, u32, ParamPoly)>,
    #[serde(default)]
    quad_c: Vec<(u32, u32, ParamPoly)>,
    #[serde(default, rename = "const")]
    constant: ParamPoly,
}

impl From<OperatorSpec> for OperatorJson {
    fn from(op: OperatorSpec) -> OperatorJson {
        let table = |t: &std::collections::BTreeMap<(u32, u32), ParamPoly>| {
            t.iter().map(|(&(a, b), c)| (a, b, c.clone())).collect()
        };
        let m = source_param();
        OperatorJson {
            quad_a: table(&op.quad_a),
            lin_b_rule: op
                .lin
                .iter()
                .map(|f| FamilyJson {
                    shift: f.shift,
                    from: f.from,
                    poly_in_m: (0..=f.poly.degree_in(m)).map(|k| f.poly.coeff_of(m, k)).collect(),
                })
                .collect(),
            lin_extra: table(&op.lin_extra),
            quad_c: table(&op.quad_c),
            constant: op.constant.clone(),
        }
    }
}

impl From<OperatorJson> for OperatorSpec {
    fn from(j: OperatorJson) -> OperatorSpec {
        let m = source_param();
        let mut op = OperatorSpec::zero();
        for (a, b, c) in &j.quad_a {
            op.add_quad_a(*a, *b, c);
        }
        for (a, b, c) in &j.quad_c {
            op.add_quad_c(*a, *b, c);
        }
        for (a, b, c) in &j.lin_extra {
            op.add_lin(*a, *b, c);
        }
        for f in j.lin_b_rule {
            let poly = f.poly_in_m.iter().enumerate().fold(ParamPoly::zero(), |acc, (k, c)| {
                acc.add(&c.mul_mono(&ParamMono::var(m, k as u32), &Rational::ONE))
            });
            op.lin.push(LinFamily { shift: f.shift, from: f.from, poly });
        }
        op.constant = j.constant;
        op.canonical()
    }
}

#[cfg(test)]
mod tests {
    use crate::virasoro::{extract_like, virasoro, OperatorSpec};

    #[test]
    fn round_trip() {
        for op in
            [extract_like(2, 1).unwrap(), virasoro(-1).unwrap(), virasoro(0).unwrap(), extract_like(3, 2).unwrap()]
        {
            let s = serde_json::to_string(&op).unwrap();
            let back: OperatorSpec = serde_json::from_str(&s).unwrap();
            assert_eq!(back, op);
        }
    }

    #[test]
    fn hand_written_operator() {
        let s = r#"{"quad_a": [[1, 0, "-3/2"]], "lin_b_rule": [{"shift": 2, "from": 0, "poly_in_m": ["9/2", "3"]}]}"#;
        let op: OperatorSpec = serde_json::from_str(s).unwrap();
        assert_eq!(op, extract_like(2, 1).unwrap());
    }
}
