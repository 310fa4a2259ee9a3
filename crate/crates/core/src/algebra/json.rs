//! JSON forms of the algebraic types.
//!
//! Rationals are strings `"p/q"`; a monomial term is
//! `{"jets": {"k": e}, "params": {"name": e}, "coeff": "p/q"}` with empty maps
//! omitted. Term lists follow the canonical monomial order, so serialization
//! is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::diffpoly::DiffPoly;
use super::jet::{Mono, JET_SLOTS};
use super::jetfn::JetFunction;
use super::param::{Param, ParamMono, ParamPoly};
use super::parse::parse_jet_function;
use super::rational::Rational;
use super::series::EpsSeries;
use super::upoly::UPoly;

#[derive(Serialize, Deserialize)]
struct TermJson {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    jets: BTreeMap<String, i32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, u32>,
    coeff: Rational,
}

fn param_map(m: &ParamMono) -> BTreeMap<String, u32> {
    m.pairs().iter().map(|(p, e)| (p.name(), *e)).collect()
}

fn param_mono_from_map<E: serde::de::Error>(map: &BTreeMap<String, u32>) -> Result<ParamMono, E> {
    let mut pairs = Vec::with_capacity(map.len());
    for (name, e) in map {
        pairs.push((Param::new(name).map_err(E::custom)?, *e));
    }
    Ok(ParamMono::from_pairs(pairs))
}

fn term_json(m: &Mono, c: &Rational) -> TermJson {
    let jets = m.jets().iter().enumerate().filter(|(_, e)| **e != 0).map(|(k, e)| (k.to_string(), *e as i32)).collect();
    TermJson { jets, params: param_map(m.params()), coeff: c.clone() }
}

fn mono_from_json<E: serde::de::Error>(t: &TermJson) -> Result<Mono, E> {
    let mut jets = [0i8; JET_SLOTS];
    for (k, e) in &t.jets {
        let k: usize = k.parse().map_err(|_| E::custom(format!("bad jet index `{k}`")))?;
        if k >= JET_SLOTS {
            return Err(E::custom(format!("jet index {k} beyond cutoff")));
        }
        if *e < 0 && k != 1 {
            return Err(E::custom(format!("negative exponent on w_{k}")));
        }
        jets[k] = i8::try_from(*e).map_err(|_| E::custom("exponent out of range"))?;
    }
    Ok(Mono::from_parts(jets, param_mono_from_map(&t.params)?))
}

impl Serialize for DiffPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self.terms().iter().map(|(m, c)| term_json(m, c)).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in &terms {
            out.push((mono_from_json::<D::Error>(t)?, t.coeff.clone()));
        }
        Ok(DiffPoly::from_terms(out))
    }
}

#[derive(Serialize, Deserialize)]
struct ParamTermJson {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, u32>,
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ParamPolyJson {
    Constant(Rational),
    Terms(Vec<ParamTermJson>),
    Expr(String),
}

impl Serialize for ParamPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.as_rational() {
            Some(r) => r.serialize(s),
            None => {
                let terms: Vec<ParamTermJson> = self
                    .terms()
                    .iter()
                    .map(|(m, c)| ParamTermJson { params: param_map(m), coeff: c.clone() })
                    .collect();
                terms.serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for ParamPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match ParamPolyJson::deserialize(d)? {
            ParamPolyJson::Constant(r) => Ok(ParamPoly::constant(r)),
            ParamPolyJson::Terms(ts) => {
                let mut out = Vec::with_capacity(ts.len());
                for t in ts {
                    out.push((param_mono_from_map::<D::Error>(&t.params)?, t.coeff));
                }
                Ok(ParamPoly::from_terms(out))
            }
            ParamPolyJson::Expr(src) => {
                use serde::de::Error;
                let f = parse_jet_function(&src).map_err(D::Error::custom)?;
                f.as_diffpoly()
                    .and_then(|p| p.as_param_poly())
                    .ok_or_else(|| D::Error::custom(format!("`{src}` is not a polynomial in the parameters")))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JetFunctionJson {
    num: DiffPoly,
    #[serde(default = "unit_den", skip_serializing_if = "is_unit_den")]
    den: DiffPoly,
    #[serde(default, skip_serializing_if = "Rational::is_zero")]
    log: Rational,
    #[serde(default, skip_serializing_if = "Rational::is_zero")]
    log_w0: Rational,
}

fn unit_den() -> DiffPoly {
    DiffPoly::int(1)
}

fn is_unit_den(d: &DiffPoly) -> bool {
    d.as_rational().is_some_and(|r| r.is_one())
}

impl Serialize for JetFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        JetFunctionJson {
            num: self.num().clone(),
            den: self.den().to_diffpoly(),
            log: self.log_w1_coeff().clone(),
            log_w0: self.log_w0_coeff().clone(),
        }
        .serialize(s)
    }
}

/// Input form: the structured object, or an expression string (used by the
/// hand-written data files).
#[derive(Deserialize)]
#[serde(untagged)]
enum JetFunctionInput {
    Expr(String),
    Parts(JetFunctionJson),
}

impl<'de> Deserialize<'de> for JetFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = match JetFunctionInput::deserialize(d)? {
            JetFunctionInput::Expr(src) => return parse_jet_function(&src).map_err(D::Error::custom),
            JetFunctionInput::Parts(j) => j,
        };
        let slices = j.den.w0_slices();
        let den = match slices.as_slice() {
            [(rest, p)] if rest.is_one() => p.clone(),
            _ => return Err(D::Error::custom("denominator must be a nonzero polynomial in w_0")),
        };
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(JetFunction::fraction(j.num, den).with_logs(j.log, j.log_w0))
    }
}

impl UPoly {
    pub fn from_diffpoly(p: &DiffPoly) -> Option<UPoly> {
        match p.w0_slices().as_slice() {
            [] => Some(UPoly::zero()),
            [(rest, u)] if rest.is_one() => Some(u.clone()),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EpsSeriesJson {
    g_max: usize,
    coeffs: Vec<JetFunction>,
}

impl Serialize for EpsSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EpsSeriesJson { g_max: self.g_max(), coeffs: self.coeffs().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EpsSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = EpsSeriesJson::deserialize(d)?;
        if j.coeffs.len() != j.g_max + 1 {
            return Err(D::Error::custom("coefficient count does not match g_max"));
        }
        Ok(EpsSeries::from_coeffs(j.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_function_round_trip() {
        let f = parse_jet_function("1/24*log(v1) + s*v2^3/(360*v1^4) - 3*w1^4/(160*(1+w)^4)").unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: JetFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn jet_function_from_expression() {
        let f: JetFunction = serde_json::from_str(r#""u2/2 - u1^2/(4*u)""#).unwrap();
        assert_eq!(f, parse_jet_function("w2/2 - w1^2/(4*w)").unwrap());
        assert!(serde_json::from_str::<JetFunction>(r#""w1 +""#).is_err());
    }

    #[test]
    fn param_poly_forms() {
        let p: ParamPoly = serde_json::from_str("\"-3/2\"").unwrap();
        assert_eq!(p.as_rational(), Some(Rational::new(-3, 2)));
        let q: ParamPoly = serde_json::from_str(r#"[{"params":{"a12":1},"coeff":"1/60"}]"#).unwrap();
        assert_eq!(q.params(), vec![Param::named("a12")]);
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"[{"params":{"a12":1},"coeff":"1/60"}]"#);
        let e: ParamPoly = serde_json::from_str(r#""a12/60 - 3""#).unwrap();
        assert_eq!(e, q.sub(&ParamPoly::int(3)));
        assert!(serde_json::from_str::<ParamPoly>(r#""w1*a12""#).is_err());
    }
}
