//! End-to-end comparison with the printed values transcribed in
//! `data/anchors.json`.

use serde::Deserialize;

use crate::algebra::{EpsSeries, JetFunction, Mono, Param, ParamPoly, Rational};
use crate::error::{Error, Result};
use crate::genus_expansion::{deform, solve_fg, DeformOptions, DeformationData};
use crate::hierarchy::normal_form::split_by_jets;
use crate::hierarchy::{build_hierarchy, normal_form, sk, NormalForm};
use crate::virasoro::{check_genus0, combine, extract_like, OperatorSpec};

use super::checks::homogeneity_probe;
use super::Report;

const ANCHORS: &str = include_str!("../../data/anchors.json");

#[derive(Clone, Debug, Deserialize)]
pub struct OperatorAnchor {
    /// `t̃_p ∂_{p + lin_shift}` coefficients for `p = 0, 1, ...`.
    pub lin_shift: u32,
    pub lin: Vec<Rational>,
    /// `(i, j, a)` for `a ε² ∂_i ∂_j`.
    pub quad: Vec<(u32, u32, Rational)>,
}

/// `b = d1 · a_1' + d3 · a_1''' + sq · a_1²`.
#[derive(Clone, Debug, Default, Deserialize)]
pub struct BRelation {
    #[serde(default)]
    pub d1: Rational,
    #[serde(default)]
    pub d3: Rational,
    #[serde(default)]
    pub sq: Rational,
}

impl BRelation {
    pub fn apply(&self, a1: &JetFunction) -> Result<JetFunction> {
        let d1 = a1.partial(0);
        let d3 = d1.partial(0).partial(0);
        Ok(d1.scale(&self.d1).add(&d3.scale(&self.d3)).add(&a1.mul(a1)?.scale(&self.sq)))
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct BRelations {
    pub b1: BRelation,
    pub b2: BRelation,
    pub b3: BRelation,
}

impl BRelations {
    fn iter(&self) -> [(usize, &BRelation); 3] {
        [(1, &self.b1), (2, &self.b2), (3, &self.b3)]
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct CombinationAnchor {
    pub a1: JetFunction,
    pub a2: JetFunction,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SkAnchor {
    pub flow1_after_miura: Vec<JetFunction>,
    pub a12: Rational,
    pub a22: Rational,
}

/// Printed values, transcribed by hand.
#[derive(Clone, Debug, Deserialize)]
pub struct Anchors {
    pub l22: OperatorAnchor,
    pub h1: JetFunction,
    pub h2: JetFunction,
    pub f2: JetFunction,
    pub flow1: Vec<JetFunction>,
    pub flow1_eps6_w6: JetFunction,
    pub b_relations: BRelations,
    pub combination: CombinationAnchor,
    pub sawada_kotera: SkAnchor,
}

impl Anchors {
    pub fn load() -> Result<Anchors> {
        serde_json::from_str(ANCHORS).map_err(|e| Error::Parse(format!("anchors: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub deform: DeformOptions,
    /// Replaces the generated `L_{2,2}`.
    pub l22: Option<OperatorSpec>,
    /// Genus of the hierarchies (3 reaches `a_2`, `b_3` and the `ε⁶` flow term).
    pub genus: usize,
}

impl Default for SuiteOptions {
    fn default() -> SuiteOptions {
        SuiteOptions { deform: DeformOptions::default(), l22: None, genus: 3 }
    }
}

fn compare(report: &mut Report, name: &str, got: &JetFunction, expected: &JetFunction) {
    let witness = (got != expected).then(|| format!("computed `{got}`, expected `{expected}`"));
    report.record(name, witness);
}

fn operator_witness(op: &OperatorSpec, anchor: &OperatorAnchor) -> Option<String> {
    for (p, c) in anchor.lin.iter().enumerate() {
        let p = p as u32;
        let got = op.lin_coeff(p, p + anchor.lin_shift);
        if got.as_rational().as_ref() != Some(c) {
            return Some(format!("coefficient of t̃_{p}∂_{} is {got}, expected {c}", p + anchor.lin_shift));
        }
    }
    for (i, j, a) in &anchor.quad {
        let got = op.quad_a.get(&(*i, *j)).cloned().unwrap_or_default();
        if got.as_rational().as_ref() != Some(a) {
            return Some(format!("coefficient of ε²∂_{i}∂_{j} is {got}, expected {a}"));
        }
    }
    if op.quad_a.len() != anchor.quad.len() || !op.quad_c.is_empty() || !op.constant.is_zero() {
        return Some("operator has terms beyond the printed ones".into());
    }
    None
}

fn combination() -> Result<OperatorSpec> {
    Ok(combine(&[
        (ParamPoly::var(Param::named("a12")), extract_like(1, 1)?),
        (ParamPoly::var(Param::named("a22")), extract_like(2, 1)?),
        (ParamPoly::var(Param::named("a34")), extract_like(3, 2)?),
    ]))
}

fn hierarchy_normal_form(def: &DeformationData) -> Result<(EpsSeries, NormalForm)> {
    let table = build_hierarchy(def, 1, 0)?;
    let nf = normal_form(&table, def.g_max)?;
    Ok((table.flow(1)?.clone(), nf))
}

fn run<T>(report: &mut Report, names: &[&str], r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            for n in names {
                report.fail(*n, format!("error: {e}"));
            }
            None
        }
    }
}

/// Runs the pipeline (operator, deformation, hierarchy, normal form,
/// Sawada–Kotera matching) and compares every printed value.
pub fn paper_suite(opts: &SuiteOptions) -> Report {
    let mut report = Report::new();
    let anchors = match Anchors::load() {
        Ok(a) => a,
        Err(e) => {
            report.fail("anchors", e.to_string());
            return report;
        }
    };
    let op = match &opts.l22 {
        Some(op) => op.clone(),
        None => match extract_like(2, 1) {
            Ok(op) => op,
            Err(e) => {
                report.fail("operator.l22", e.to_string());
                return report;
            }
        },
    };
    report.record("operator.l22", operator_witness(&op, &anchors.l22));
    let g0 = check_genus0(&op, 6, 5);
    if !g0.passed() {
        report.fail("operator.l22.genus0", format!("nonzero residual {:?}", g0.residual));
        report.skip("deform.l22", "operator violates the genus-0 constraint");
        return report;
    }
    report.pass("operator.l22.genus0");

    let genus = opts.genus.max(2);
    let names = ["deform.l22.h1", "deform.l22.h2"];
    if let Some(def) = run(&mut report, &names, deform(&op, genus, &opts.deform)) {
        for (g, expected) in [(1, &anchors.h1), (2, &anchors.h2)] {
            let name = names[g - 1];
            match def.h(g) {
                Ok(h) if def.truncated(g).unwrap_or(false) && &h != expected => report.fail(
                    name,
                    format!("s-recursion truncated at degree {}; computed `{h}`", def.s_degree(g).unwrap_or(0)),
                ),
                Ok(h) => compare(&mut report, name, &h, expected),
                Err(e) => report.fail(name, e.to_string()),
            }
        }
        l22_hierarchy(&mut report, &anchors, &def, genus);
    }

    match solve_fg(2) {
        Ok(f2) => compare(&mut report, "deform.f2", &f2, &anchors.f2),
        Err(e) => report.fail("deform.f2", e.to_string()),
    }

    let a1_family = combination_checks(&mut report, &anchors, genus, &opts.deform);
    sawada_kotera(&mut report, &anchors, a1_family.as_ref());
    report
}

fn l22_hierarchy(report: &mut Report, anchors: &Anchors, def: &DeformationData, genus: usize) {
    let names = ["flow.l22", "normal_form.l22"];
    let Some((flow, nf)) = run(report, &names, hierarchy_normal_form(def)) else { return };
    for (g, expected) in anchors.flow1.iter().enumerate() {
        compare(report, &format!("flow.l22.eps{}", 2 * g), flow.get(g), expected);
    }
    if genus >= 3 {
        let w6 = split_by_jets(flow.get(3)).map(|parts| parts.get(&Mono::jet(6, 1)).cloned().unwrap_or_default());
        match w6 {
            Ok(c) => {
                let s = Param::named("s");
                let leading = c.coeff_of_param(s, 1).mul_param_poly(&ParamPoly::var(s));
                let witness = match leading {
                    Ok(l) if c.coeff_of_param(s, 0).is_zero() && l == anchors.flow1_eps6_w6 => None,
                    _ => Some(format!("w_6 coefficient `{c}`, expected leading term `{}`", anchors.flow1_eps6_w6)),
                };
                report.record("flow.l22.eps6.w6", witness);
            }
            Err(e) => report.fail("flow.l22.eps6.w6", e.to_string()),
        }
    }
    for (i, rel) in anchors.b_relations.iter() {
        if i == 3 && genus < 3 {
            continue;
        }
        let name = format!("normal_form.l22.b{i}");
        match (nf.b(i), nf.a(1)) {
            (Ok(b), Ok(a1)) => match rel.apply(a1) {
                Ok(expected) => compare(report, &name, b, &expected),
                Err(e) => report.fail(name, e.to_string()),
            },
            (Err(e), _) | (_, Err(e)) => report.fail(name, e.to_string()),
        }
    }
}

/// Returns `a_1` of the combination, used to fit the Sawada–Kotera parameters.
fn combination_checks(
    report: &mut Report,
    anchors: &Anchors,
    genus: usize,
    opts: &DeformOptions,
) -> Option<JetFunction> {
    let names = ["normal_form.combination.a1", "normal_form.combination.a2"];
    let op = run(report, &names, combination())?;
    let def = run(report, &names, deform(&op, genus, opts))?;
    // The parameters carry the deformation, so evaluate at s = 1.
    let nf = (|| {
        let table =
            build_hierarchy(&def, 1, 0)?.substitute_param(Param::named("s"), &ParamPoly::constant(Rational::ONE));
        normal_form(&table, def.g_max)
    })();
    let nf = run(report, &names, nf)?;
    let a1 = nf.a(1).ok()?.clone();
    compare(report, names[0], &a1, &anchors.combination.a1);
    if genus >= 3 {
        if let Ok(a2) = nf.a(2) {
            compare(report, names[1], a2, &anchors.combination.a2);
        }
    }
    let weights = [(Param::named("a12"), 1), (Param::named("a22"), 2), (Param::named("a34"), 3)];
    for mut c in homogeneity_probe(&nf.a, &weights).checks {
        c.name = format!("normal_form.combination.{}", c.name);
        report.checks.push(c);
    }
    Some(a1)
}

fn sawada_kotera(report: &mut Report, anchors: &Anchors, a1_family: Option<&JetFunction>) {
    let anchor = &anchors.sawada_kotera;
    let names = ["sk.flow1_after_miura", "sk.normal_form"];
    let pipeline = (|| {
        let t = sk::transform()?;
        let w = sk::to_w(&sk::flows()?, &t)?;
        let nf = sk::reduce(&w, &t)?;
        Ok((w, nf))
    })();
    let Some((w, nf)) = run(report, &names, pipeline) else { return };
    let witness = w.flow(1).ok().and_then(|f| {
        anchor
            .flow1_after_miura
            .iter()
            .enumerate()
            .find(|(g, e)| f.get(*g) != *e)
            .map(|(g, e)| format!("ε^{}: computed `{}`, expected `{e}`", 2 * g, f.get(g)))
    });
    report.record(names[0], witness);
    for (i, rel) in anchors.b_relations.iter().into_iter().take(2) {
        let name = format!("sk.normal_form.b{i}");
        match (nf.b(i), nf.a(1).and_then(|a| rel.apply(a))) {
            (Ok(b), Ok(expected)) => compare(report, &name, b, &expected),
            (Err(e), _) | (_, Err(e)) => report.fail(name, e.to_string()),
        }
    }
    let Some(family) = a1_family else {
        report.skip("sk.parameters", "combination a_1 unavailable");
        return;
    };
    let params = [Param::named("a12"), Param::named("a22")];
    let fitted = nf.a(1).and_then(|a1| sk::fit_parameters(family, a1, &params));
    match fitted {
        Ok(x) => {
            for (name, got, expected) in [("sk.a12", &x[0], &anchor.a12), ("sk.a22", &x[1], &anchor.a22)] {
                let witness = (got != expected).then(|| format!("fitted {got}, expected {expected}"));
                report.record(name, witness);
            }
        }
        Err(e) => report.fail("sk.parameters", e.to_string()),
    }
}
