use crate::algebra::{integrate_x, variational_derivative, EpsSeries, JetFunction, Param};
use crate::error::Error;
use crate::hierarchy::HierarchyTable;

use super::Report;

/// Highest flow index used by the tau-structure checks.
const TAU_INDEX_MAX: usize = 3;

fn first_difference(a: &EpsSeries, b: &EpsSeries, g: usize) -> Option<String> {
    (0..=g).find_map(|k| {
        let d = a.get(k).sub(b.get(k));
        (!d.is_zero()).then(|| format!("ε^{}: {}", 2 * k, d))
    })
}

fn outcome(report: &mut Report, name: String, r: crate::Result<Option<String>>) {
    match r {
        Ok(w) => report.record(name, w),
        Err(e @ (Error::Range(_) | Error::Unsupported(_))) => report.skip(name, e.to_string()),
        Err(e) => report.fail(name, format!("error: {e}")),
    }
}

/// `∂_{t_b}(∂_x Ω_{0;a}) = ∂_{t_a}(∂_x Ω_{0;b})` through genus `g`.
pub fn verify_commutativity(h: &HierarchyTable, pairs: &[(usize, usize)], g: usize) -> Report {
    let mut report = Report::new();
    for &(a, b) in pairs {
        let r = (|| {
            let g = g.min(h.g_max);
            let lhs = h.t_derivative(b, &h.flow(a)?.dx(h.cutoff)?)?;
            let rhs = h.t_derivative(a, &h.flow(b)?.dx(h.cutoff)?)?;
            Ok(first_difference(&lhs, &rhs, g))
        })();
        outcome(&mut report, format!("commutativity({a},{b})"), r);
    }
    report
}

/// `Ω_{0;0} = w`; every `∂_{t_b} Ω_{0;a}` is a total x-derivative (equal to
/// `∂_x Ω_{a;b}` when the table holds it); and
/// `∂_{t_r} Ω_{p;q} = ∂_{t_q} Ω_{p;r}` for the stored entries.
pub fn verify_tau_structure(h: &HierarchyTable, g: usize) -> Report {
    let mut report = Report::new();
    let g = g.min(h.g_max);
    let cut = h.cutoff;

    let r = h.omega(0, 0).map(|o| first_difference(o, &EpsSeries::genus0(JetFunction::jet(0), g), g));
    outcome(&mut report, "tau.omega00".into(), r);

    let top = h.m_max().min(TAU_INDEX_MAX);
    let r = (|| {
        for a in 0..=top {
            for b in a..=top {
                let f = h.t_derivative(b, h.flow(a)?)?;
                for k in 0..=g {
                    let c = f.get(k);
                    if !variational_derivative(c, cut)?.is_zero() {
                        return Ok(Some(format!("∂_{b}Ω_{{0;{a}}} at ε^{}: `{c}` is not exact", 2 * k)));
                    }
                    if let Some(p) = c.as_diffpoly() {
                        integrate_x(p, cut)?;
                    }
                }
                if let Ok(o) = h.omega(a, b) {
                    if let Some(d) = first_difference(&o.dx(cut)?, &f, g) {
                        return Ok(Some(format!("∂_xΩ_{{{a};{b}}} - ∂_{b}Ω_{{0;{a}}} at {d}")));
                    }
                }
            }
        }
        Ok(None)
    })();
    outcome(&mut report, "tau.exactness".into(), r);

    let r = (|| {
        let idx: Vec<(usize, usize)> = h.entries().map(|(k, _)| *k).collect();
        for &(p, q) in &idx {
            for r in 0..=top {
                if r == q || p > TAU_INDEX_MAX || q > TAU_INDEX_MAX {
                    continue;
                }
                let Ok(o_pr) = h.omega(p, r) else { continue };
                let lhs = h.t_derivative(r, h.omega(p, q)?)?;
                let rhs = h.t_derivative(q, o_pr)?;
                if let Some(d) = first_difference(&lhs, &rhs, g) {
                    return Ok(Some(format!("∂_{r}Ω_{{{p};{q}}} - ∂_{q}Ω_{{{p};{r}}} at {d}")));
                }
            }
        }
        Ok(None)
    })();
    outcome(&mut report, "tau.cross_derivatives".into(), r);
    report
}

fn non_polynomial(s: &EpsSeries, g: usize) -> Option<String> {
    (0..=g.min(s.g_max())).find_map(|k| {
        let c = s.get(k);
        (!c.is_polynomial()).then(|| format!("ε^{}: {c}", 2 * k))
    })
}

/// Every genus coefficient of every entry is a differential polynomial.
pub fn verify_polynomiality(h: &HierarchyTable, g: usize) -> Report {
    let mut report = Report::new();
    let witness = h.entries().find_map(|(&(p, q), s)| non_polynomial(s, g).map(|w| format!("Ω_{{{p};{q}}} {w}")));
    report.record("polynomiality", witness);
    report
}

pub fn verify_series_polynomiality(name: &str, s: &EpsSeries, g: usize) -> Report {
    let mut report = Report::new();
    report.record(format!("polynomiality.{name}"), non_polynomial(s, g));
    report
}

/// Degree constraints on a jet function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GradingRule {
    /// Required homogeneous degree (`deg w_k = k`).
    pub degree: Option<i32>,
    pub max_obar: Option<i32>,
    pub max_jet: Option<usize>,
}

/// `deg H_g = 2g - 2`, `obar_deg H_g ≤ 3g - 3`, jets up to `3g - 2`.
pub fn free_energy_rule(g: usize) -> GradingRule {
    let g = g as i32;
    GradingRule { degree: Some(2 * g - 2), max_obar: Some(3 * g - 3), max_jet: Some((3 * g - 2).max(1) as usize) }
}

/// Genus-`g` coefficients of two-point functions have degree `2g`.
pub fn density_rule(g: usize) -> GradingRule {
    GradingRule { degree: Some(2 * g as i32), ..Default::default() }
}

pub fn verify_gradings(items: &[(String, JetFunction, GradingRule)]) -> Report {
    let mut report = Report::new();
    for (name, f, rule) in items {
        let mut problems = Vec::new();
        if f.is_zero() {
            report.pass(format!("grading.{name}"));
            continue;
        }
        if let Some(d) = rule.degree {
            match f.homogeneous_deg() {
                Some(e) if e == d => {}
                other => problems.push(format!("degree {other:?}, expected {d}")),
            }
        }
        if let Some(m) = rule.max_obar {
            let o = f.max_obar_deg();
            if o > m {
                problems.push(format!("obar_deg {o} > {m}"));
            }
        }
        if let Some(m) = rule.max_jet {
            let j = f.max_jet().unwrap_or(0);
            if j > m {
                problems.push(format!("depends on w_{j}, limit w_{m}"));
            }
        }
        let witness = (!problems.is_empty()).then(|| format!("{}: `{f}`", problems.join("; ")));
        report.record(format!("grading.{name}"), witness);
    }
    report
}

/// With `deg` of each parameter as given and `deg w = -1`, checks that
/// `a[j]` is homogeneous of degree `2j - 1` for `j ≥ 1`.
pub fn homogeneity_probe(a: &[JetFunction], weights: &[(Param, i32)]) -> Report {
    let mut report = Report::new();
    for (j, f) in a.iter().enumerate().skip(1) {
        let name = format!("homogeneity.a{j}");
        let Some(p) = f.as_diffpoly().filter(|p| p.max_jet().unwrap_or(0) == 0) else {
            report.skip(name, format!("`{f}` is not a polynomial in w"));
            continue;
        };
        let target = 2 * j as i32 - 1;
        let bad = p.terms().iter().find_map(|(m, c)| {
            let mut d = -(m.exp(0) as i32);
            for (param, e) in m.params().pairs() {
                let w = weights.iter().find(|(q, _)| q == param).map(|(_, w)| *w);
                match w {
                    Some(w) => d += w * *e as i32,
                    None => return Some(format!("parameter {} has no degree", param.name())),
                }
            }
            (d != target).then(|| format!("term {c}·{m} has degree {d}, expected {target}"))
        });
        report.record(name, bad);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_jet_function;
    use crate::hierarchy::build_from_free_energies;

    fn riemann_hopf() -> HierarchyTable {
        build_from_free_energies(&[], 3, 3).unwrap()
    }

    #[test]
    fn genus_zero_table_passes() {
        let h = riemann_hopf();
        assert!(verify_commutativity(&h, &[(1, 2), (1, 3)], 0).passed());
        let tau = verify_tau_structure(&h, 0);
        assert!(tau.passed() && tau.count(super::super::Status::Pass) == 3, "{}", tau.to_text());
        assert!(verify_polynomiality(&h, 0).passed());
    }

    #[test]
    fn grading_rules() {
        let h2 = parse_jet_function("v2^3/(360*v1^4) + s^2*v*v1^2").unwrap();
        let items = vec![
            ("h2".to_string(), h2, free_energy_rule(2)),
            ("bad".to_string(), parse_jet_function("w1").unwrap(), density_rule(1)),
        ];
        let r = verify_gradings(&items);
        assert_eq!(r.status("grading.h2"), Some(super::super::Status::Pass));
        assert_eq!(r.status("grading.bad"), Some(super::super::Status::Fail));
    }

    #[test]
    fn homogeneity() {
        let a1 = parse_jet_function("-a12/60 - a22*w/20").unwrap();
        let weights = [(Param::named("a12"), 1), (Param::named("a22"), 2)];
        assert!(homogeneity_probe(&[JetFunction::zero(), a1], &weights).passed());
        let bad = parse_jet_function("a22").unwrap();
        assert!(!homogeneity_probe(&[JetFunction::zero(), bad], &weights).passed());
    }
}
