//! Independent oracle for deformed hierarchies: integrates the evolution
//! equation of `Ω_{p;q}` in the deformation parameter directly in `w`-jets,
//! starting from the undeformed hierarchy, and compares with the table built
//! from the deformed free energies through the quasi-Miura map.

use vdeform::algebra::{EpsSeries, Param, ParamPoly, Rational};
use vdeform::genus_expansion::{deform, free_energies, DeformOptions};
use vdeform::hierarchy::{build_from_free_energies, build_hierarchy, HierarchyTable};
use vdeform::virasoro::{extract_like, OperatorSpec};

fn s() -> Param {
    Param::named("s")
}

fn binom(n: usize, k: usize) -> Rational {
    let mut r = Rational::ONE;
    for i in 0..k {
        r = &(&r * &Rational::from_int((n - i) as i64)) * &Rational::new(1, (i + 1) as i64);
    }
    r
}

fn dxn(f: &EpsSeries, n: usize, cutoff: usize) -> EpsSeries {
    (0..n).fold(f.clone(), |acc, _| acc.dx(cutoff).unwrap())
}

/// Ordered symmetric coefficients `a^{m m'}` of `ε² ∂_m ∂_{m'}`.
fn ordered_quad(op: &OperatorSpec) -> Vec<(usize, usize, Rational)> {
    let mut out = Vec::new();
    for (&(i, j), a) in &op.quad_a {
        let a = a.as_rational().expect("numeric operator");
        if i == j {
            out.push((i as usize, i as usize, a));
        } else {
            let half = &a * &Rational::new(1, 2);
            out.push((i as usize, j as usize, half.clone()));
            out.push((j as usize, i as usize, half));
        }
    }
    out
}

fn lin(op: &OperatorSpec, src: usize) -> Vec<(usize, Rational)> {
    op.row(src as u32).into_iter().map(|(m, b)| (m as usize, b.as_rational().expect("numeric operator"))).collect()
}

/// `∂_s Ω_{p;q}` expressed through the table at the same `s`.
fn rhs(t: &HierarchyTable, op: &OperatorSpec, p: usize, q: usize) -> EpsSeries {
    let cut = t.cutoff;
    let g = t.g_max;
    let om = |a: usize, b: usize| t.omega(a, b).unwrap().truncate(g);
    let quad = ordered_quad(op);
    let target = om(p, q);
    let mut out = EpsSeries::zero(g);

    for (m, mp, a) in &quad {
        let tt = t.t_derivative(p, &t.t_derivative(q, &om(*m, *mp)).unwrap()).unwrap();
        let term = tt.shift(1).add(&om(*m, p).mul(&om(*mp, q)).unwrap()).add(&om(*m, q).mul(&om(*mp, p)).unwrap());
        out = out.add(&term.scale(a));
    }
    for (m, b) in lin(op, p) {
        out = out.add(&om(m, q).scale(&b));
    }
    for (m, b) in lin(op, q) {
        out = out.add(&om(m, p).scale(&b));
    }
    let c00 = op.quad_c.get(&(0, 0)).map(|c| c.as_rational().unwrap()).unwrap_or(Rational::ZERO);
    if p == 0 && q == 0 {
        out = out.add(&EpsSeries::genus0(vdeform::algebra::JetFunction::constant(&c00 + &c00), g));
    }

    let mut y = EpsSeries::genus0(vdeform::algebra::JetFunction::constant(&c00 + &c00), g);
    for (m, mp, a) in &quad {
        let wtt = dxn(&om(*m, *mp), 2, cut).shift(1);
        let term = wtt.add(&om(*m, 0).mul(&om(*mp, 0)).unwrap().scale(&Rational::from_int(2)));
        y = y.add(&term.scale(a));
    }
    for (m, b) in lin(op, 0) {
        y = y.add(&om(m, 0).scale(&(&b + &b)));
    }

    let top = target.max_jet().unwrap_or(0);
    let velocity = |m: usize| om(0, m).dx(cut).unwrap();
    for k in 0..=top {
        let dk = target.partial(k);
        if dk.is_zero() {
            continue;
        }
        let mut inner = dxn(&y, k, cut);
        let mut z = EpsSeries::zero(g);
        for (m, mp, a) in &quad {
            for j in 1..=k {
                let t1 = dxn(&velocity(*m), k - j, cut).mul(&dxn(&om(*mp, 0), j - 1, cut)).unwrap();
                let t2 = dxn(&velocity(*mp), k - j, cut).mul(&dxn(&om(*m, 0), j - 1, cut)).unwrap();
                z = z.add(&t1.add(&t2).scale(&(a * &binom(k, j))));
            }
        }
        inner = inner.add(&z);
        if k >= 1 {
            for (m, b) in lin(op, 0) {
                let kb = &b * &Rational::from_int(k as i64);
                inner = inner.add(&dxn(&velocity(m), k - 1, cut).scale(&kb));
            }
        }
        out = out.sub(&dk.mul(&inner).unwrap());
    }
    out.truncate(g)
}

fn coeff_s(f: &EpsSeries, k: u32) -> EpsSeries {
    EpsSeries::from_coeffs(f.coeffs().iter().map(|c| c.coeff_of_param(s(), k)).collect())
}

/// Integrates up to `s^{s_max}`, returning `Ω_{0;1}`.
fn integrate(op: &OperatorSpec, g_max: usize, s_max: usize) -> EpsSeries {
    let shift = (0..=op.index_extent() as usize)
        .flat_map(|k| lin(op, k).into_iter().map(move |(m, _)| m.saturating_sub(k)))
        .max()
        .unwrap_or(0)
        .max(1);
    let p0 = 1 + shift * s_max;
    let h = free_energies(g_max).unwrap();
    let mut t = build_from_free_energies(&h, p0, p0).unwrap();
    t.cutoff = vdeform::algebra::MAX_JET;
    for l in 0..s_max {
        let p = 1 + shift * (s_max - l - 1);
        let mut next = HierarchyTable::new(t.g_max, t.cutoff);
        let factor = ParamPoly::var(s()).pow(l as u32 + 1).scale(&Rational::new(1, l as i64 + 1));
        for a in 0..=p {
            for b in a..=p {
                let inc = coeff_s(&rhs(&t, op, a, b), l as u32).mul_param_poly(&factor).unwrap();
                next.insert(a, b, t.omega(a, b).unwrap().truncate(t.g_max).add(&inc));
            }
        }
        t = next;
    }
    t.flow(1).unwrap().clone()
}

fn truncate_s(f: &EpsSeries, s_max: u32) -> EpsSeries {
    let mut out = EpsSeries::zero(f.g_max());
    for k in 0..=s_max {
        let c = coeff_s(f, k).mul_param_poly(&ParamPoly::var(s()).pow(k)).unwrap();
        out = out.add(&c);
    }
    out
}

fn check(op: &OperatorSpec, g_max: usize, s_max: usize) {
    let oracle = integrate(op, g_max, s_max);
    let def = deform(op, g_max, &DeformOptions::default()).unwrap();
    let table = build_hierarchy(&def, 1, 0).unwrap();
    let built = truncate_s(table.flow(1).unwrap(), s_max as u32);
    for g in 0..=g_max {
        assert_eq!(oracle.get(g), built.get(g), "ε^{} coefficient differs", 2 * g);
    }
}

#[test]
fn l12_flow_matches_evolution_equation() {
    check(&extract_like(1, 1).unwrap(), 2, 2);
}

#[test]
fn l22_flow_matches_evolution_equation() {
    check(&extract_like(2, 1).unwrap(), 2, 2);
}

#[test]
fn genus_three_flows_match_evolution_equation() {
    check(&extract_like(1, 1).unwrap(), 3, 3);
    check(&extract_like(2, 1).unwrap(), 3, 2);
}

#[test]
fn virasoro_operators_leave_the_hierarchy_fixed() {
    let h = free_energies(2).unwrap();
    let mut t = build_from_free_energies(&h, 4, 4).unwrap();
    t.cutoff = vdeform::algebra::MAX_JET;
    for i in -1..=2 {
        let op = vdeform::virasoro::virasoro(i).unwrap();
        for (a, b) in [(0, 0), (0, 1), (1, 1), (1, 2)] {
            assert!(rhs(&t, &op, a, b).is_zero(), "L_{i} moves Ω_{{{a};{b}}}");
        }
    }
}
