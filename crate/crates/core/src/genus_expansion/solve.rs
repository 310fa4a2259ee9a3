//! Genus-`g` free energy of the one-dimensional Frobenius manifold from the
//! Virasoro constraints `L_{-1}, ..., L_{2g}`.

use std::collections::BTreeMap;

use super::sources::{quad_pairs, Table};
use crate::algebra::linsolve::{solve, LinearSolution};
use crate::algebra::{DiffPoly, JetFunction, Mono, Rational};
use crate::error::{Error, Result};
use crate::frobenius1d::{f1, GenusZeroData};
use crate::virasoro::{make_d, virasoro};

/// Monomials `v^p Π_{k≥2} v_k^{e_k} · v_1^a` of degree `2g-2` with
/// `Σ (k-1) e_k ≤ 3g-3` and `p < multipliers`.
fn ansatz(g: usize, multipliers: usize) -> Vec<Mono> {
    let obar_max = 3 * g as i32 - 3;
    let top = 3 * g - 2;
    let mut out = Vec::new();
    let mut stack = vec![(2usize, Mono::one(), 0i32)];
    while let Some((k, mono, obar)) = stack.pop() {
        if k > top {
            let a = 2 * g as i32 - 2 - mono.deg();
            for p in 0..multipliers {
                out.push(mono.mul(&Mono::jet(1, a as i8)).mul(&Mono::jet(0, p as i8)));
            }
            continue;
        }
        let step = k as i32 - 1;
        let mut e = 0;
        while obar + e * step <= obar_max {
            stack.push((k + 1, mono.mul(&Mono::jet(k, e as i8)), obar + e * step));
            e += 1;
        }
    }
    out.sort();
    out
}

/// `F_1, ..., F_{g_max}`; `F_1 = (1/24) log v_1`.
pub fn free_energies(g_max: usize) -> Result<Vec<JetFunction>> {
    let mut out = vec![f1()];
    for g in 2..=g_max {
        let f = solve_fg_from(g, &out)?;
        out.push(f);
    }
    Ok(out)
}

/// `F_g` for `g ≥ 2`.
pub fn solve_fg(g: usize) -> Result<JetFunction> {
    if g < 2 {
        return Err(Error::Range(format!("solve_fg needs g ≥ 2, got {g}")));
    }
    Ok(free_energies(g)?.pop().expect("nonempty"))
}

/// `F_g` given `lower = [F_1, ..., F_{g-1}]`.
pub fn solve_fg_from(g: usize, lower: &[JetFunction]) -> Result<JetFunction> {
    if g < 2 || lower.len() < g - 1 {
        return Err(Error::Range(format!("need F_1..F_{} to solve for F_{g}", g - 1)));
    }
    let cutoff = 3 * g + 2;
    let g0 = GenusZeroData::new(2 * g, cutoff)?;
    let mut table = Table::new(&g0, g);
    for (k, f) in lower.iter().take(g - 1).enumerate() {
        table.h[k + 1] = vec![f.clone()];
    }
    let mut constraints = Vec::new();
    for i in -1..=2 * g as i32 {
        let op = virasoro(i)?;
        let d = make_d(&op, &g0, 3 * g - 2)?;
        let source = table.higher_source(&quad_pairs(&op), g, 1)?;
        constraints.push((d, source));
    }

    let mut last = String::new();
    for multipliers in [1, 3] {
        let basis = ansatz(g, multipliers);
        let n = basis.len();
        // Row key (constraint index, monomial) ↦ (coefficients, rhs).
        let mut rows: BTreeMap<(usize, Mono), (Vec<Rational>, Rational)> = BTreeMap::new();
        for (ci, (d, source)) in constraints.iter().enumerate() {
            for (col, mono) in basis.iter().enumerate() {
                let image = d.apply(&JetFunction::poly(DiffPoly::term(mono.clone(), Rational::ONE)))?;
                for (m, c) in plain_terms(&image)? {
                    let row = rows.entry((ci, m)).or_insert_with(|| (vec![Rational::ZERO; n], Rational::ZERO));
                    row.0[col] += &c;
                }
            }
            for (m, c) in plain_terms(source)? {
                let row = rows.entry((ci, m)).or_insert_with(|| (vec![Rational::ZERO; n], Rational::ZERO));
                row.1 -= &c;
            }
        }
        let rows: Vec<_> = rows.into_values().collect();
        match solve(&rows, n) {
            LinearSolution::Solved { x, free } if free.is_empty() => {
                let terms = basis.into_iter().zip(x).filter(|(_, c)| !c.is_zero());
                return Ok(JetFunction::poly(DiffPoly::from_terms(terms)));
            }
            LinearSolution::Solved { free, .. } => {
                last = format!("{} free coefficients with {n} ansatz monomials", free.len());
            }
            LinearSolution::Inconsistent => last = format!("no solution with {n} ansatz monomials"),
        }
    }
    Err(Error::Ansatz(format!("F_{g}: {last}")))
}

fn plain_terms(f: &JetFunction) -> Result<Vec<(Mono, Rational)>> {
    let p = f
        .as_diffpoly()
        .ok_or_else(|| Error::Invariant(format!("constraint term is not a differential polynomial: {f}")))?;
    if p.terms().iter().any(|(m, _)| !m.params().is_one()) {
        return Err(Error::Invariant("parameters in a Virasoro constraint".into()));
    }
    Ok(p.terms().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_jet_function;

    #[test]
    fn ansatz_size() {
        assert_eq!(ansatz(2, 1).len(), 7);
    }

    #[test]
    fn genus_two() {
        let expected = parse_jet_function("v2^3/(360*v1^4) - 7*v2*v3/(1920*v1^3) + v4/(1152*v1^2)").unwrap();
        assert_eq!(solve_fg(2).unwrap(), expected);
    }
}
