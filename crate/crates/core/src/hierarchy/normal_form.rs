//! Reduction of `Ω_{0;1}` by normal Miura transformations to the standard
//! form
//!
//! ```text
//! Ω_{0;1} = w²/2 + ε² a_0 w_2 + ε⁴ (a_1 w_4 + b_1 w_3 w_1 + b_2 w_1⁴) + ...
//! ```
//!
//! in which no coefficient of `ε^{2g}`, `g ≥ 2`, contains `w_2`.
//!
//! At order `ε^{2g}` a density `A = ε^{2g-2} Σ_M f_M(w) M` changes the
//! coefficient by `L(A) = ∂_x ∂_{t_1} A - w ∂_x² A` (genus-0 `t_1`-flow).
//! Writing `L(f M) = Σ_r f^{(r)} P_{M,r}`, the `w_2`-monomials of the
//! coefficient give a linear system in the `f_M` that is solved
//! triangularly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::HierarchyTable;
use crate::algebra::{DiffPoly, EpsSeries, JetFunction, Mono, Rational};
use crate::error::{Error, Result};
use crate::frobenius1d::{omega0, GenusZeroData};

/// Highest supported order `ε^{2g}`.
pub const MAX_ORDER: usize = 4;

/// `(name, monomial)` in the order the coefficients are reported, per order `g ≥ 2`.
type Pattern = &'static [(&'static str, &'static [(usize, i8)])];

const PATTERN: [Pattern; 3] = [
    &[("a1", &[(4, 1)]), ("b1", &[(3, 1), (1, 1)]), ("b2", &[(1, 4)])],
    &[
        ("a2", &[(1, 1), (5, 1)]),
        ("b3", &[(6, 1)]),
        ("b4", &[(4, 1), (1, 2)]),
        ("b5", &[(3, 1), (1, 3)]),
        ("b6", &[(3, 2)]),
        ("b7", &[(1, 6)]),
    ],
    &[
        ("a3", &[(1, 2), (6, 1)]),
        ("b8", &[(8, 1)]),
        ("b9", &[(1, 1), (7, 1)]),
        ("b10", &[(3, 1), (5, 1)]),
        ("b11", &[(1, 3), (5, 1)]),
        ("b12", &[(4, 2)]),
        ("b13", &[(1, 1), (3, 1), (4, 1)]),
        ("b14", &[(1, 4), (4, 1)]),
        ("b15", &[(1, 2), (3, 2)]),
        ("b16", &[(1, 5), (3, 1)]),
        ("b17", &[(1, 8)]),
    ],
];

fn mono(jets: &[(usize, i8)]) -> Mono {
    jets.iter().fold(Mono::one(), |m, (k, e)| m.mul(&Mono::jet(*k, *e)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    /// Coefficient of `ε² w_2` before rescaling.
    pub a0_raw: Rational,
    /// The rescaling `ε² ↦ λ ε²` applied after the `ε²` step, making `a_0 = 1/12`.
    pub rescale: Rational,
    /// `a_0, a_1, ...` as functions of `w`.
    pub a: Vec<JetFunction>,
    /// `b_1, b_2, ...` as functions of `w`.
    pub b: Vec<JetFunction>,
    /// `A_0, A_1, ...`; `A_0` acts before the rescaling, the others after.
    pub densities: Vec<JetFunction>,
    /// Number of unknown coefficient functions left undetermined (set to zero) per order.
    pub kernel_dims: Vec<usize>,
    /// The reduced `Ω_{0;1}`.
    pub omega01: EpsSeries,
}

impl NormalForm {
    pub fn a(&self, i: usize) -> Result<&JetFunction> {
        self.a.get(i).ok_or_else(|| Error::Range(format!("a_{i} not computed")))
    }

    pub fn b(&self, i: usize) -> Result<&JetFunction> {
        i.checked_sub(1).and_then(|j| self.b.get(j)).ok_or_else(|| Error::Range(format!("b_{i} not computed")))
    }
}

/// Splits a jet function into `Σ_N c_N(w) N` with `N` a monomial in
/// `w_1, w_2, ...`.
pub fn split_by_jets(f: &JetFunction) -> Result<BTreeMap<Mono, JetFunction>> {
    if f.has_log() {
        return Err(Error::PatternMismatch(format!("logarithmic coefficient `{f}`")));
    }
    let mut parts: BTreeMap<Mono, Vec<(Mono, Rational)>> = BTreeMap::new();
    for (m, c) in f.num().terms() {
        let mut key = m.jets_only();
        key.set_exp(0, 0);
        let w0 = Mono::jet(0, m.exp(0)).mul(&Mono::from_params(m.params().clone()));
        parts.entry(key).or_default().push((w0, c.clone()));
    }
    Ok(parts
        .into_iter()
        .map(|(k, terms)| (k, JetFunction::fraction(DiffPoly::from_terms(terms), f.den().clone())))
        .collect())
}

/// Monomials in `w_1, ..., w_n` of differential degree `n`.
fn partitions(n: usize) -> Vec<Mono> {
    fn rec(n: usize, max_part: usize, acc: Mono, out: &mut Vec<Mono>) {
        if n == 0 {
            out.push(acc);
            return;
        }
        for k in (1..=max_part.min(n)).rev() {
            rec(n - k, k, acc.mul(&Mono::jet(k, 1)), out);
        }
    }
    let mut out = Vec::new();
    rec(n, n, Mono::one(), &mut out);
    out
}

/// `∫ f dw` for `f` polynomial in `w` (constant of integration zero).
fn integrate_w(f: &JetFunction) -> Result<JetFunction> {
    let p = f
        .as_diffpoly()
        .filter(|p| p.max_jet().unwrap_or(0) == 0 && p.is_polynomial())
        .ok_or_else(|| Error::Unsupported(format!("cannot integrate `{f}` in closed form")))?;
    let terms = p.terms().iter().map(|(m, c)| {
        let e = m.exp(0);
        let mut m2 = m.clone();
        m2.set_exp(0, e + 1);
        (m2, c / &Rational::from_int(e as i64 + 1))
    });
    Ok(JetFunction::poly(DiffPoly::from_terms(terms)))
}

struct Linearization {
    g0: GenusZeroData,
    cutoff: usize,
}

impl Linearization {
    /// `L(X) = ∂_x ∂_{t_1} X - w ∂_x² X`.
    fn apply(&self, x: &JetFunction) -> Result<JetFunction> {
        let dt = self.g0.dt(1, x)?.dx(self.cutoff)?;
        let dxx = x.dx(self.cutoff)?.dx(self.cutoff)?;
        Ok(dt.sub(&dxx.mul(&JetFunction::jet(0))?))
    }

    /// `[P_0, P_1, P_2]` with `L(f M) = Σ_r f^{(r)} P_r`.
    fn components(&self, m: &Mono) -> Result<[JetFunction; 3]> {
        let w = JetFunction::jet(0);
        let base = |d: i8| JetFunction::poly(DiffPoly::term(m.mul(&Mono::jet(0, d)), Rational::ONE));
        let p0 = self.apply(&base(0))?;
        let p1 = self.apply(&base(1))?.sub(&p0.mul(&w)?);
        let w2 = w.mul(&w)?;
        let p2 = self.apply(&base(2))?.sub(&p0.mul(&w2)?).sub(&p1.mul(&w)?.scale(&Rational::from_int(2)));
        let p2 = p2.scale(&Rational::new(1, 2));
        let check = self
            .apply(&base(3))?
            .sub(&p0.mul(&w2.mul(&w)?)?)
            .sub(&p1.mul(&w2)?.scale(&Rational::from_int(3)))
            .sub(&p2.mul(&w)?.scale(&Rational::from_int(6)));
        if !check.is_zero() {
            return Err(Error::Invariant("linearized Miura action is not second order in f".into()));
        }
        Ok([p0, p1, p2])
    }
}

type Equations = BTreeMap<Mono, Vec<(usize, usize, JetFunction)>>;

/// Solves `e_N + Σ c_{N,M,r} f_M^{(r)} = 0` for the `f_M`. Repeatedly takes
/// the equations in which every unsolved unknown appears undifferentiated,
/// row-reduces them over the rationals and fixes each unknown isolated by a
/// row. Unknowns never isolated stay `None`.
fn solve_orders(eqs: &Equations, e: &BTreeMap<Mono, JetFunction>, n: usize) -> Result<Vec<Option<JetFunction>>> {
    let mut solved: Vec<Option<JetFunction>> = vec![None; n];
    loop {
        let mut rows: Vec<(Vec<Rational>, JetFunction)> = Vec::new();
        for (key, terms) in eqs {
            let eligible = terms.iter().all(|(mi, r, _)| solved[*mi].is_some() || *r == 0);
            if !eligible || terms.iter().all(|(mi, _, _)| solved[*mi].is_some()) {
                continue;
            }
            let mut coeffs = vec![Rational::ZERO; n];
            let mut rhs = e.get(key).cloned().unwrap_or_default().neg();
            for (mi, r, c) in terms {
                if let Some(f) = &solved[*mi] {
                    let mut d = f.clone();
                    for _ in 0..*r {
                        d = d.partial(0);
                    }
                    rhs = rhs.sub(&d.mul(c)?);
                } else {
                    let q = c
                        .as_rational()
                        .ok_or_else(|| Error::Invariant(format!("non-constant linearized coefficient `{c}`")))?;
                    coeffs[*mi] += &q;
                }
            }
            rows.push((coeffs, rhs));
        }
        // Row reduction with jet-function right-hand sides.
        let mut pivot_row = 0;
        for col in 0..n {
            let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r].0[col].is_zero()) else { continue };
            rows.swap(pivot_row, p);
            let inv = rows[pivot_row].0[col].recip();
            let (coeffs, rhs) = &mut rows[pivot_row];
            coeffs.iter_mut().for_each(|c| *c = &*c * &inv);
            *rhs = rhs.scale(&inv);
            let (pc, pr) = rows[pivot_row].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == pivot_row || row.0[col].is_zero() {
                    continue;
                }
                let f = row.0[col].clone();
                for (c, pcv) in row.0.iter_mut().zip(&pc) {
                    *c -= &(&f * pcv);
                }
                row.1 = row.1.sub(&pr.scale(&f));
            }
            pivot_row += 1;
        }
        let mut progress = false;
        for (coeffs, rhs) in &rows {
            let nz: Vec<usize> = (0..n).filter(|&c| !coeffs[c].is_zero()).collect();
            if let [col] = nz[..] {
                if solved[col].is_none() {
                    solved[col] = Some(rhs.clone());
                    progress = true;
                }
            }
        }
        if !progress {
            return Ok(solved);
        }
    }
}

/// Reduces `Ω_{0;1}` of `h` through `ε^{2 g_max}`.
pub fn normal_form(h: &HierarchyTable, g_max: usize) -> Result<NormalForm> {
    if g_max > MAX_ORDER {
        return Err(Error::Unsupported(format!("standard form is only tabulated through ε^{}", 2 * MAX_ORDER)));
    }
    if g_max > h.g_max {
        return Err(Error::Range(format!("hierarchy known through genus {}, asked for {g_max}", h.g_max)));
    }
    let omega = h.flow(1)?.truncate(g_max);
    if omega.get(0) != &JetFunction::poly(omega0(0, 1)) {
        return Err(Error::PatternMismatch(format!("genus-0 density `{}` is not w²/2", omega.get(0))));
    }
    let cutoff = h.cutoff;
    let w = EpsSeries::genus0(JetFunction::jet(0), g_max);
    let mut table = HierarchyTable::from_flows(vec![w, omega], cutoff)?;
    let lin = Linearization { g0: GenusZeroData::new(1, cutoff)?, cutoff };
    let mut densities = Vec::new();
    let mut kernel_dims = Vec::new();

    // ε²: α w_2 + β(w) w_1²; A_0 = -∫β removes β.
    let (a0_raw, rescale) = if g_max >= 1 {
        let parts = split_by_jets(table.flow(1)?.get(1))?;
        let (w2, w11) = (Mono::jet(2, 1), Mono::jet(1, 2));
        if let Some(n) = parts.keys().find(|n| **n != w2 && **n != w11) {
            return Err(Error::PatternMismatch(format!("ε² coefficient contains {n}")));
        }
        let alpha = parts.get(&w2).cloned().unwrap_or_default();
        let a0 = alpha
            .as_rational()
            .filter(|r| !r.is_zero())
            .ok_or_else(|| Error::PatternMismatch(format!("a_0 = `{alpha}` is not a nonzero constant")))?;
        let beta = parts.get(&w11).cloned().unwrap_or_default();
        let a0_density = integrate_w(&beta)?.neg();
        if !a0_density.is_zero() {
            table = table.apply_miura(&EpsSeries::genus0(a0_density.clone(), g_max))?;
        }
        densities.push(a0_density);
        kernel_dims.push(0);
        let lambda = (&Rational::from_int(12) * &a0).recip();
        table = table.rescale_eps(&lambda);
        (a0, lambda)
    } else {
        (Rational::ZERO, Rational::ONE)
    };

    for g in 2..=g_max {
        let coeff = table.flow(1)?.get(g).clone();
        let parts = split_by_jets(&coeff)?;
        let unknowns = partitions(2 * g - 2);
        let comps: Vec<[BTreeMap<Mono, JetFunction>; 3]> = unknowns
            .iter()
            .map(|m| {
                let [p0, p1, p2] = lin.components(m)?;
                Ok([split_by_jets(&p0)?, split_by_jets(&p1)?, split_by_jets(&p2)?])
            })
            .collect::<Result<_>>()?;
        // Equations for every w_2-monomial N: e_N + Σ c_{N,M,r} f_M^{(r)} = 0.
        let mut eqs: Equations = BTreeMap::new();
        for (mi, cs) in comps.iter().enumerate() {
            for (r, split) in cs.iter().enumerate() {
                for (n, c) in split {
                    if n.exp(2) > 0 {
                        eqs.entry(n.clone()).or_default().push((mi, r, c.clone()));
                    }
                }
            }
        }
        for n in parts.keys().filter(|n| n.exp(2) > 0) {
            eqs.entry(n.clone()).or_default();
        }
        let solved = solve_orders(&eqs, &parts, unknowns.len())?;
        kernel_dims.push(solved.iter().filter(|f| f.is_none()).count());
        let mut density = JetFunction::zero();
        for (m, f) in unknowns.iter().zip(&solved) {
            if let Some(f) = f {
                density = density.add(&f.mul_poly(&DiffPoly::term(m.clone(), Rational::ONE))?);
            }
        }
        if !density.is_zero() {
            let mut a = EpsSeries::zero(g_max);
            a.set(g - 1, density.clone());
            table = table.apply_miura(&a)?;
        }
        densities.push(density);
        let reduced = split_by_jets(table.flow(1)?.get(g))?;
        if let Some((n, c)) = reduced.iter().find(|(n, c)| n.exp(2) > 0 && !c.is_zero()) {
            return Err(Error::PatternMismatch(format!("ε^{} coefficient keeps ({c})·{n}", 2 * g)));
        }
        if let Some(n) = reduced.keys().find(|n| n.deg() != 2 * g as i32) {
            return Err(Error::PatternMismatch(format!("ε^{} coefficient has monomial {n} of wrong degree", 2 * g)));
        }
    }

    let omega01 = table.flow(1)?.clone();
    let mut a = vec![JetFunction::constant(if g_max >= 1 { Rational::new(1, 12) } else { Rational::ZERO })];
    let mut b = Vec::new();
    for g in 2..=g_max {
        let parts = split_by_jets(omega01.get(g))?;
        for (name, jets) in PATTERN[g - 2] {
            let c = parts.get(&mono(jets)).cloned().unwrap_or_default();
            if name.starts_with('a') {
                a.push(c);
            } else {
                b.push(c);
            }
        }
    }
    Ok(NormalForm { a0_raw, rescale, a, b, densities, kernel_dims, omega01 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        // Pattern sizes equal the number of w_2-free monomials.
        for g in 2..=4 {
            let free = partitions(2 * g).iter().filter(|m| m.exp(2) == 0).count();
            assert_eq!(free, PATTERN[g - 2].len());
        }
    }

    #[test]
    fn linearization_on_functions_of_w() {
        let lin = Linearization { g0: GenusZeroData::new(1, 10).unwrap(), cutoff: 10 };
        let [p0, p1, p2] = lin.components(&Mono::one()).unwrap();
        assert!(p0.is_zero() && p2.is_zero());
        assert_eq!(p1, JetFunction::poly(DiffPoly::term(Mono::jet(1, 2), Rational::ONE)));
        let [p0, p1, _] = lin.components(&Mono::jet(2, 1)).unwrap();
        let expected0 = crate::algebra::parse_jet_function("3*w2^2 + 4*w1*w3").unwrap();
        assert_eq!(p0, expected0);
        assert_eq!(p1, crate::algebra::parse_jet_function("4*w1^2*w2").unwrap());
    }
}
