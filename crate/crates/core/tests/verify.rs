use vdeform::algebra::{parse_jet_function, JetFunction, ParamPoly, Rational};
use vdeform::genus_expansion::{deform, DeformOptions};
use vdeform::hierarchy::{build_hierarchy, HierarchyTable};
use vdeform::verify::{
    density_rule, free_energy_rule, paper_suite, verify_commutativity, verify_gradings, verify_tau_structure, Status,
    SuiteOptions,
};
use vdeform::virasoro::extract_like;

fn jf(s: &str) -> JetFunction {
    parse_jet_function(s).unwrap()
}

fn l22(m_max: usize, p_max: usize) -> HierarchyTable {
    let def = deform(&extract_like(2, 1).unwrap(), 2, &DeformOptions::default()).unwrap();
    build_hierarchy(&def, m_max, p_max).unwrap()
}

fn perturb(t: &mut HierarchyTable, p: usize, q: usize, g: usize, extra: &str) {
    let mut e = t.omega(p, q).unwrap().clone();
    e.set(g, e.get(g).add(&jf(extra)));
    t.insert(p, q, e);
}

#[test]
fn l22_hierarchy_passes() {
    let t = l22(3, 3);
    let r = verify_commutativity(&t, &[(1, 2)], 2);
    assert_eq!(r.status("commutativity(1,2)"), Some(Status::Pass));
    let tau = verify_tau_structure(&t, 2);
    assert_eq!(tau.count(Status::Pass), 3, "{}", tau.to_text());
}

#[test]
fn perturbed_flow_breaks_commutativity() {
    let mut t = l22(3, 0);
    perturb(&mut t, 0, 1, 1, "w1^2");
    let r = verify_commutativity(&t, &[(1, 2)], 2);
    let c = r.get("commutativity(1,2)").unwrap();
    assert_eq!(c.status, Status::Fail);
    assert!(c.witness.as_deref().unwrap().starts_with("ε^"), "{c:?}");
}

#[test]
fn perturbed_omega_breaks_tau_structure() {
    let mut t = l22(3, 3);
    perturb(&mut t, 1, 2, 0, "w1");
    let r = verify_tau_structure(&t, 2);
    assert_eq!(r.status("tau.omega00"), Some(Status::Pass));
    assert!(!r.passed());
    assert!(r.checks.iter().filter(|c| c.status == Status::Fail).all(|c| c.witness.is_some()));
}

#[test]
fn grading_of_l22_objects() {
    let def = deform(&extract_like(2, 1).unwrap(), 2, &DeformOptions::default()).unwrap();
    let t = build_hierarchy(&def, 1, 0).unwrap();
    let items = vec![
        ("H_1".to_string(), def.h(1).unwrap().sub(&jf("log(v1)/24")), free_energy_rule(1)),
        ("H_2".to_string(), def.h(2).unwrap(), free_energy_rule(2)),
        ("Omega01[1]".to_string(), t.flow(1).unwrap().get(1).clone(), density_rule(1)),
        ("Omega01[2]".to_string(), t.flow(1).unwrap().get(2).clone(), density_rule(2)),
    ];
    let r = verify_gradings(&items);
    assert!(r.passed(), "{}", r.to_text());
    assert_eq!(r.count(Status::Pass), 4);
}

#[test]
fn low_s_cap_is_reported_with_truncation_witness() {
    let opts = SuiteOptions {
        deform: DeformOptions { s_deg_cap: Some(1), ..Default::default() },
        genus: 2,
        ..Default::default()
    };
    let r = paper_suite(&opts);
    let c = r.get("deform.l22.h2").unwrap();
    assert_eq!(c.status, Status::Fail);
    assert!(c.witness.as_deref().unwrap().contains("truncated"));
    assert_eq!(r.status("deform.l22.h1"), Some(Status::Pass));
}

#[test]
fn perturbed_operator_fails_genus_zero_check() {
    let mut op = extract_like(2, 1).unwrap();
    op.add_lin(0, 2, &ParamPoly::constant(Rational::ONE));
    let r = paper_suite(&SuiteOptions { l22: Some(op), genus: 2, ..Default::default() });
    assert_eq!(r.status("operator.l22"), Some(Status::Fail));
    assert_eq!(r.status("operator.l22.genus0"), Some(Status::Fail));
    assert_eq!(r.status("deform.l22"), Some(Status::Skip));
}
