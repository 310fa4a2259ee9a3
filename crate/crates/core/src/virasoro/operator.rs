//! Second-order operators in the times:
//! `ε² Σ a ∂_i∂_j + Σ b t̃_k ∂_l + ε^{-2} Σ c t̃_k t̃_l + const`.

use std::collections::BTreeMap;

use crate::algebra::{Param, ParamPoly, Rational};
use crate::error::{Error, Result};

/// Name of the source-index variable inside linear-family polynomials.
pub const SOURCE_INDEX: &str = "m";

pub fn source_param() -> Param {
    Param::named(SOURCE_INDEX)
}

/// Infinite family `Σ_{k ≥ from} poly(k) t̃_k ∂_{k+shift}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinFamily {
    pub shift: i32,
    pub from: u32,
    /// Polynomial in the source index `m` (and possibly other parameters).
    pub poly: ParamPoly,
}

impl LinFamily {
    fn at(&self, k: u32) -> ParamPoly {
        self.poly.eval_param(source_param(), &Rational::from_int(k as i64))
    }

    fn covers(&self, k: u32) -> bool {
        k >= self.from && k as i64 + self.shift as i64 >= 0
    }
}

/// Canonical form: at most one family per shift, each starting at the
/// smallest source index from which it agrees with the true coefficients;
/// all deviations are stored in `lin_extra` below the family start.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(from = "super::json::OperatorJson", into = "super::json::OperatorJson")]
pub struct OperatorSpec {
    /// `(i, j)` with `i ≤ j` ↦ coefficient of `ε² ∂_i ∂_j`.
    pub quad_a: BTreeMap<(u32, u32), ParamPoly>,
    pub lin: Vec<LinFamily>,
    /// `(source, target)` ↦ coefficient of `t̃_source ∂_target`.
    pub lin_extra: BTreeMap<(u32, u32), ParamPoly>,
    /// `(k, l)` with `k ≤ l` ↦ coefficient of `ε^{-2} t̃_k t̃_l`.
    pub quad_c: BTreeMap<(u32, u32), ParamPoly>,
    pub constant: ParamPoly,
}

fn ordered(i: u32, j: u32) -> (u32, u32) {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

fn add_entry(map: &mut BTreeMap<(u32, u32), ParamPoly>, key: (u32, u32), c: &ParamPoly) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(key).or_default();
    *e = e.add(c);
    if e.is_zero() {
        map.remove(&key);
    }
}

impl OperatorSpec {
    pub fn zero() -> OperatorSpec {
        OperatorSpec::default()
    }

    pub fn is_zero(&self) -> bool {
        self.quad_a.is_empty()
            && self.lin.is_empty()
            && self.lin_extra.is_empty()
            && self.quad_c.is_empty()
            && self.constant.is_zero()
    }

    pub fn add_quad_a(&mut self, i: u32, j: u32, c: &ParamPoly) {
        add_entry(&mut self.quad_a, ordered(i, j), c);
    }

    pub fn add_quad_c(&mut self, k: u32, l: u32, c: &ParamPoly) {
        add_entry(&mut self.quad_c, ordered(k, l), c);
    }

    pub fn add_lin(&mut self, src: u32, tgt: u32, c: &ParamPoly) {
        add_entry(&mut self.lin_extra, (src, tgt), c);
    }

    /// Coefficient of `t̃_src ∂_tgt`.
    pub fn lin_coeff(&self, src: u32, tgt: u32) -> ParamPoly {
        let shift = tgt as i64 - src as i64;
        let mut c = self.lin_extra.get(&(src, tgt)).cloned().unwrap_or_default();
        for f in &self.lin {
            if f.shift as i64 == shift && f.covers(src) {
                c = c.add(&f.at(src));
            }
        }
        c
    }

    /// Nonzero `(target, coeff)` pairs for a given source index.
    pub fn row(&self, src: u32) -> Vec<(u32, ParamPoly)> {
        let mut targets: Vec<u32> = self.lin_extra.range((src, 0)..=(src, u32::MAX)).map(|((_, t), _)| *t).collect();
        for f in &self.lin {
            if f.covers(src) {
                targets.push((src as i64 + f.shift as i64) as u32);
            }
        }
        targets.sort();
        targets.dedup();
        targets.into_iter().map(|t| (t, self.lin_coeff(src, t))).filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Nonzero `(source, coeff)` pairs for a given target index.
    pub fn column(&self, tgt: u32) -> Vec<(u32, ParamPoly)> {
        let mut sources: Vec<u32> = self.lin_extra.keys().filter(|(_, t)| *t == tgt).map(|(s, _)| *s).collect();
        for f in &self.lin {
            let s = tgt as i64 - f.shift as i64;
            if s >= 0 && f.covers(s as u32) {
                sources.push(s as u32);
            }
        }
        sources.sort();
        sources.dedup();
        sources.into_iter().map(|s| (s, self.lin_coeff(s, tgt))).filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Largest index mentioned by any finite table or family start.
    pub fn index_extent(&self) -> u32 {
        let a = self.quad_a.keys().map(|(_, j)| *j);
        let c = self.quad_c.keys().map(|(_, j)| *j);
        let e = self.lin_extra.keys().map(|(s, t)| (*s).max(*t));
        let f = self.lin.iter().map(|f| f.from);
        a.chain(c).chain(e).chain(f).max().unwrap_or(0)
    }

    pub fn canonicalize(&mut self) {
        let m = source_param();
        let mut by_shift: BTreeMap<i32, (u32, ParamPoly)> = BTreeMap::new();
        let families = std::mem::take(&mut self.lin);
        for f in &families {
            let lower = (-f.shift).max(0) as u32;
            let from = f.from.max(lower);
            let e = by_shift.entry(f.shift).or_insert((from, ParamPoly::zero()));
            e.0 = e.0.max(from);
        }
        // Families with an earlier start contribute explicit entries below the merged start.
        for f in &families {
            let start = by_shift[&f.shift].0;
            let lower = (-f.shift).max(0) as u32;
            for k in f.from.max(lower)..start {
                let c = f.at(k);
                add_entry(&mut self.lin_extra, (k, (k as i64 + f.shift as i64) as u32), &c);
            }
            let e = by_shift.get_mut(&f.shift).unwrap();
            e.1 = e.1.add(&f.poly);
        }
        let mut out = Vec::new();
        for (shift, (mut from, poly)) in by_shift {
            if poly.is_zero() {
                continue;
            }
            let at = |k: u32| poly.eval_param(m, &Rational::from_int(k as i64));
            let tgt = |k: u32| (k as i64 + shift as i64) as u32;
            // Absorb deviations at or above the start into explicit entries.
            let top_dev = self
                .lin_extra
                .keys()
                .filter(|(s, t)| *s >= from && *t as i64 - *s as i64 == shift as i64)
                .map(|(s, _)| *s)
                .max();
            if let Some(top) = top_dev {
                for k in from..=top {
                    add_entry(&mut self.lin_extra, (k, tgt(k)), &at(k));
                }
                from = top + 1;
            }
            // Lower the start while the explicit entry matches the family.
            let lower = (-shift).max(0) as u32;
            while from > lower {
                let k = from - 1;
                let v = at(k);
                let existing = self.lin_extra.get(&(k, tgt(k))).cloned().unwrap_or_default();
                if existing != v {
                    break;
                }
                self.lin_extra.remove(&(k, tgt(k)));
                from = k;
            }
            out.push(LinFamily { shift, from, poly });
        }
        self.lin = out;
    }

    pub fn canonical(mut self) -> OperatorSpec {
        self.canonicalize();
        self
    }

    pub fn scale(&self, c: &ParamPoly) -> OperatorSpec {
        let map = |t: &BTreeMap<(u32, u32), ParamPoly>| {
            t.iter().map(|(k, v)| (*k, v.mul(c))).filter(|(_, v)| !v.is_zero()).collect()
        };
        OperatorSpec {
            quad_a: map(&self.quad_a),
            lin: self
                .lin
                .iter()
                .map(|f| LinFamily { poly: f.poly.mul(c), ..f.clone() })
                .filter(|f| !f.poly.is_zero())
                .collect(),
            lin_extra: map(&self.lin_extra),
            quad_c: map(&self.quad_c),
            constant: self.constant.mul(c),
        }
    }

    pub fn add(&self, o: &OperatorSpec) -> OperatorSpec {
        let mut out = self.clone();
        for (k, v) in &o.quad_a {
            add_entry(&mut out.quad_a, *k, v);
        }
        for (k, v) in &o.lin_extra {
            add_entry(&mut out.lin_extra, *k, v);
        }
        for (k, v) in &o.quad_c {
            add_entry(&mut out.quad_c, *k, v);
        }
        out.lin.extend(o.lin.iter().cloned());
        out.constant = out.constant.add(&o.constant);
        out.canonical()
    }

    pub fn sub(&self, o: &OperatorSpec) -> OperatorSpec {
        self.add(&o.scale(&ParamPoly::int(-1)))
    }

    /// Replaces a parameter in every coefficient.
    pub fn substitute_param(&self, p: Param, value: &ParamPoly) -> Result<OperatorSpec> {
        if p == source_param() {
            return Err(Error::Unsupported("the source-index variable cannot be substituted".into()));
        }
        let map = |t: &BTreeMap<(u32, u32), ParamPoly>| t.iter().map(|(k, v)| (*k, v.substitute(p, value))).collect();
        Ok(OperatorSpec {
            quad_a: map(&self.quad_a),
            lin: self.lin.iter().map(|f| LinFamily { poly: f.poly.substitute(p, value), ..f.clone() }).collect(),
            lin_extra: map(&self.lin_extra),
            quad_c: map(&self.quad_c),
            constant: self.constant.substitute(p, value),
        }
        .canonical())
    }
}

/// Linear combination `Σ c_i op_i`.
pub fn combine(terms: &[(ParamPoly, OperatorSpec)]) -> OperatorSpec {
    terms.iter().fold(OperatorSpec::zero(), |acc, (c, op)| acc.add(&op.scale(c)))
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &OperatorSpec, b: &OperatorSpec) -> OperatorSpec {
    let mut out = half_bracket(a, b).sub(&half_bracket(b, a));
    out = out.add(&lin_product(a, b)).sub(&lin_product(b, a));
    out.canonical()
}

/// Brackets where the species of `x` precedes that of `y`:
/// `[x.quad_a, y.lin] + [x.quad_a, y.quad_c] + [x.lin, y.quad_c]`.
fn half_bracket(x: &OperatorSpec, y: &OperatorSpec) -> OperatorSpec {
    let mut out = OperatorSpec::zero();
    for (&(i, j), a) in &x.quad_a {
        // [∂_i∂_j, t̃_k∂_l] = δ_ik ∂_j∂_l + δ_jk ∂_i∂_l
        for (l, b) in y.row(i) {
            out.add_quad_a(j, l, &a.mul(&b));
        }
        for (l, b) in y.row(j) {
            out.add_quad_a(i, l, &a.mul(&b));
        }
        // [∂_i∂_j, t̃_k t̃_l] = (δ_ik δ_jl + δ_il δ_jk) + (δ_ik t̃_l + δ_il t̃_k)∂_j + (δ_jk t̃_l + δ_jl t̃_k)∂_i
        for (&(k, l), c) in &y.quad_c {
            let ac = a.mul(c);
            let mut cst = 0;
            if i == k && j == l {
                cst += 1;
            }
            if i == l && j == k {
                cst += 1;
            }
            out.constant = out.constant.add(&ac.scale(&Rational::from_int(cst)));
            if i == k {
                out.add_lin(l, j, &ac);
            }
            if i == l {
                out.add_lin(k, j, &ac);
            }
            if j == k {
                out.add_lin(l, i, &ac);
            }
            if j == l {
                out.add_lin(k, i, &ac);
            }
        }
    }
    // [t̃_k∂_l, t̃_m t̃_n] = δ_lm t̃_k t̃_n + δ_ln t̃_k t̃_m
    for (&(m, n), c) in &y.quad_c {
        for (k, b) in x.column(m) {
            out.add_quad_c(k, n, &b.mul(c));
        }
        for (k, b) in x.column(n) {
            out.add_quad_c(k, m, &b.mul(c));
        }
    }
    out
}

/// Linear part of the operator product `x·y` restricted to the first-order
/// terms: `Σ_{k,n} (Σ_l b_x(k,l) b_y(l,n)) t̃_k ∂_n`.
fn lin_product(x: &OperatorSpec, y: &OperatorSpec) -> OperatorSpec {
    let m = source_param();
    let neg_x = x.lin.iter().map(|f| (-f.shift).max(0) as u32).max().unwrap_or(0);
    let max_from = |o: &OperatorSpec| o.lin.iter().map(|f| f.from).max().unwrap_or(0);
    let max_extra = |o: &OperatorSpec| o.lin_extra.keys().map(|(s, _)| s + 1).max().unwrap_or(0);
    let threshold =
        [max_from(x), max_extra(x), max_from(y) + neg_x, max_extra(y) + neg_x, neg_x].into_iter().max().unwrap_or(0);
    let mut out = OperatorSpec::zero();
    for fx in &x.lin {
        for fy in &y.lin {
            let shifted = fy.poly.substitute(m, &ParamPoly::var(m).add(&ParamPoly::int(fx.shift as i64)));
            let poly = fx.poly.mul(&shifted);
            if !poly.is_zero() {
                out.lin.push(LinFamily { shift: fx.shift + fy.shift, from: threshold, poly });
            }
        }
    }
    for k in 0..threshold {
        for (l, bx) in x.row(k) {
            for (n, by) in y.row(l) {
                out.add_lin(k, n, &bx.mul(&by));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(shift: i32, from: u32, poly: ParamPoly) -> OperatorSpec {
        OperatorSpec { lin: vec![LinFamily { shift, from, poly }], ..Default::default() }.canonical()
    }

    #[test]
    fn canonical_form_is_unique() {
        let m = ParamPoly::var(source_param());
        let a = family(1, 0, m.clone());
        let mut b = family(1, 3, m.clone());
        for k in 0..3u32 {
            b.add_lin(k, k + 1, &ParamPoly::int(k as i64));
        }
        b.canonicalize();
        assert_eq!(a, b);
        let mut c = a.clone();
        c.canonicalize();
        assert_eq!(a, c);
    }

    #[test]
    fn shift_families_commute_like_vector_fields() {
        // [Σ t̃_k ∂_{k+1}, Σ t̃_k ∂_{k+1}] = 0
        let a = family(1, 0, ParamPoly::int(1));
        assert!(commutator(&a, &a).is_zero());
    }
}
