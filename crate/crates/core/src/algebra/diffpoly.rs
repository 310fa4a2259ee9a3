//! Sparse polynomials in jet variables (Laurent in `w_1`) and parameters.

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashMap;

use super::jet::{Mono, MAX_JET};
use super::param::{Param, ParamMono, ParamPoly};
use super::rational::Rational;
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// Canonical sparse polynomial: terms sorted by [`Mono`] order, no zero
/// coefficients, no repeated monomials.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    terms: Vec<(Mono, Rational)>,
}

fn accumulate(acc: &mut FxHashMap<Mono, Rational>, m: Mono, c: Rational) {
    match acc.get_mut(&m) {
        Some(v) => *v += &c,
        None => {
            acc.insert(m, c);
        }
    }
}

impl DiffPoly {
    pub fn zero() -> DiffPoly {
        DiffPoly { terms: Vec::new() }
    }

    pub fn constant(c: Rational) -> DiffPoly {
        DiffPoly::term(Mono::one(), c)
    }

    pub fn int(n: i64) -> DiffPoly {
        DiffPoly::constant(Rational::from_int(n))
    }

    pub fn term(m: Mono, c: Rational) -> DiffPoly {
        if c.is_zero() {
            DiffPoly::zero()
        } else {
            DiffPoly { terms: vec![(m, c)] }
        }
    }

    /// The jet variable `w_k`.
    pub fn jet(k: usize) -> DiffPoly {
        DiffPoly::term(Mono::jet(k, 1), Rational::ONE)
    }

    pub fn param(p: Param) -> DiffPoly {
        DiffPoly::term(Mono::from_params(ParamMono::var(p, 1)), Rational::ONE)
    }

    pub fn from_param_poly(p: &ParamPoly) -> DiffPoly {
        DiffPoly::from_sorted_unchecked(
            p.terms().iter().map(|(m, c)| (Mono::from_params(m.clone()), c.clone())).collect(),
        )
    }

    /// Builds from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Mono, Rational)>>(terms: I) -> DiffPoly {
        let mut acc: FxHashMap<Mono, Rational> = FxHashMap::default();
        for (m, c) in terms {
            if !c.is_zero() {
                accumulate(&mut acc, m, c);
            }
        }
        DiffPoly::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Mono, Rational>) -> DiffPoly {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        DiffPoly { terms }
    }

    fn from_sorted_unchecked(mut terms: Vec<(Mono, Rational)>) -> DiffPoly {
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        DiffPoly { terms }
    }

    pub fn terms(&self) -> &[(Mono, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::ZERO),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Constant in the jets (may still depend on parameters).
    pub fn as_param_poly(&self) -> Option<ParamPoly> {
        if self.terms.iter().all(|(m, _)| m.jets().iter().all(|e| *e == 0)) {
            Some(ParamPoly::from_terms(self.terms.iter().map(|(m, c)| (m.params().clone(), c.clone()))))
        } else {
            None
        }
    }

    pub fn max_jet(&self) -> Option<usize> {
        self.terms.iter().filter_map(|(m, _)| m.max_jet()).max()
    }

    pub fn min_exp(&self, k: usize) -> i8 {
        self.terms.iter().map(|(m, _)| m.exp(k)).min().unwrap_or(0)
    }

    pub fn max_exp(&self, k: usize) -> i8 {
        self.terms.iter().map(|(m, _)| m.exp(k)).max().unwrap_or(0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.min_exp(1) >= 0
    }

    pub fn add(&self, o: &DiffPoly) -> DiffPoly {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (a, b) = (&self.terms, &o.terms);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        DiffPoly { terms: out }
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &DiffPoly) -> DiffPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> DiffPoly {
        if r.is_zero() {
            return DiffPoly::zero();
        }
        if r.is_one() {
            return self.clone();
        }
        DiffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect() }
    }

    /// Multiplies by a monomial; the order is preserved only up to re-sorting.
    pub fn mul_mono(&self, m: &Mono, c: &Rational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly::from_sorted_unchecked(self.terms.iter().map(|(m1, c1)| (m1.mul(m), c1 * c)).collect())
    }

    pub fn mul(&self, o: &DiffPoly) -> DiffPoly {
        if self.is_zero() || o.is_zero() {
            return DiffPoly::zero();
        }
        if let [(m, c)] = o.terms.as_slice() {
            return self.mul_mono(m, c);
        }
        if let [(m, c)] = self.terms.as_slice() {
            return o.mul_mono(m, c);
        }
        let mut acc: FxHashMap<Mono, Rational> = FxHashMap::default();
        acc.reserve(self.terms.len() * o.terms.len() / 2 + 1);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                accumulate(&mut acc, m1.mul(m2), c1 * c2);
            }
        }
        DiffPoly::from_map(acc)
    }

    pub fn mul_param_poly(&self, p: &ParamPoly) -> DiffPoly {
        if let Some(r) = p.as_rational() {
            return self.scale(&r);
        }
        self.mul(&DiffPoly::from_param_poly(p))
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut acc = DiffPoly::int(1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to `w_k`.
    pub fn partial(&self, k: usize) -> DiffPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(k) != 0)
            .map(|(m, c)| {
                let e = m.exp(k);
                let mut m2 = m.clone();
                m2.set_exp(k, e - 1);
                (m2, c * &Rational::from_int(e as i64))
            })
            .collect();
        DiffPoly::from_sorted_unchecked(terms)
    }

    /// Total x-derivative `Σ_k w_{k+1} ∂/∂w_k`, bounded by `cutoff`.
    pub fn dx(&self, cutoff: usize) -> Result<DiffPoly> {
        let cutoff = cutoff.min(MAX_JET);
        let mut acc: FxHashMap<Mono, Rational> = FxHashMap::default();
        for (m, c) in &self.terms {
            for k in 0..=m.max_jet().unwrap_or(0) {
                let e = m.exp(k);
                if e == 0 {
                    continue;
                }
                if k + 1 > cutoff {
                    return Err(Error::JetCutoff { needed: k + 1, cutoff });
                }
                let mut m2 = m.clone();
                m2.set_exp(k, e - 1);
                m2.set_exp(k + 1, m2.exp(k + 1) + 1);
                accumulate(&mut acc, m2, c * &Rational::from_int(e as i64));
            }
        }
        Ok(DiffPoly::from_map(acc))
    }

    /// Replaces parameter `p` by `value`.
    pub fn substitute_param(&self, p: Param, value: &ParamPoly) -> DiffPoly {
        if !self.terms.iter().any(|(m, _)| m.params().exponent(p) > 0) {
            return self.clone();
        }
        let mut acc: FxHashMap<Mono, Rational> = FxHashMap::default();
        let mut powers: Vec<ParamPoly> = vec![ParamPoly::int(1)];
        for (m, c) in &self.terms {
            let (e, rest) = m.params().split_off(p);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            for (pm, pc) in powers[e as usize].terms() {
                let mut m2 = m.clone();
                m2.set_params(rest.mul(pm));
                accumulate(&mut acc, m2, c * pc);
            }
        }
        DiffPoly::from_map(acc)
    }

    pub fn degree_in_param(&self, p: Param) -> u32 {
        self.terms.iter().map(|(m, _)| m.params().exponent(p)).max().unwrap_or(0)
    }

    /// Coefficient of `p^k` (other parameters kept).
    pub fn coeff_of_param(&self, p: Param, k: u32) -> DiffPoly {
        DiffPoly::from_sorted_unchecked(
            self.terms
                .iter()
                .filter_map(|(m, c)| {
                    let (e, rest) = m.params().split_off(p);
                    (e == k).then(|| {
                        let mut m2 = m.clone();
                        m2.set_params(rest);
                        (m2, c.clone())
                    })
                })
                .collect(),
        )
    }

    pub fn params(&self) -> Vec<Param> {
        let mut ps: Vec<Param> =
            self.terms.iter().flat_map(|(m, _)| m.params().pairs().iter().map(|(p, _)| *p)).collect();
        ps.sort();
        ps.dedup();
        ps
    }

    /// Groups terms by their jet monomial; the values are parameter polynomials.
    pub fn by_jets(&self) -> Vec<(Mono, ParamPoly)> {
        let mut map: FxHashMap<Mono, Vec<(ParamMono, Rational)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            map.entry(m.jets_only()).or_default().push((m.params().clone(), c.clone()));
        }
        let mut v: Vec<_> = map.into_iter().map(|(m, t)| (m, ParamPoly::from_terms(t))).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Coefficient of a given jet monomial (parameters retained).
    pub fn coeff_of_jets(&self, jets: &Mono) -> ParamPoly {
        ParamPoly::from_terms(
            self.terms.iter().filter(|(m, _)| m.jets() == jets.jets()).map(|(m, c)| (m.params().clone(), c.clone())),
        )
    }

    /// Splits into univariate slices in `w_0`: `self = Σ rest · slice(w_0)`.
    pub fn w0_slices(&self) -> Vec<(Mono, UPoly)> {
        let mut map: FxHashMap<Mono, Vec<(usize, Rational)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = rest.exp(0);
            rest.set_exp(0, 0);
            map.entry(rest).or_default().push((e as usize, c.clone()));
        }
        let mut v: Vec<_> = map
            .into_iter()
            .map(|(rest, cs)| {
                let deg = cs.iter().map(|(e, _)| *e).max().unwrap_or(0);
                let mut coeffs = vec![Rational::ZERO; deg + 1];
                for (e, c) in cs {
                    coeffs[e] += &c;
                }
                (rest, UPoly::new(coeffs))
            })
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn from_w0_slices(slices: &[(Mono, UPoly)]) -> DiffPoly {
        let mut terms = Vec::new();
        for (rest, p) in slices {
            for (e, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut m = rest.clone();
                m.set_exp(0, rest.exp(0) + e as i8);
                terms.push((m, c.clone()));
            }
        }
        DiffPoly::from_terms(terms)
    }

    /// Multiplies by a univariate polynomial in `w_0`.
    pub fn mul_upoly(&self, p: &UPoly) -> DiffPoly {
        if p.is_one() {
            return self.clone();
        }
        self.mul(&p.to_diffpoly())
    }

    /// Exact division by a univariate polynomial in `w_0`; `None` if not divisible.
    pub fn div_upoly(&self, p: &UPoly) -> Option<DiffPoly> {
        if p.is_one() {
            return Some(self.clone());
        }
        let slices = self.w0_slices();
        let mut out = Vec::with_capacity(slices.len());
        for (rest, s) in slices {
            let (q, r) = s.div_rem(p);
            if !r.is_zero() {
                return None;
            }
            out.push((rest, q));
        }
        Some(DiffPoly::from_w0_slices(&out))
    }

    /// Substitutes `w_0 ↦ w_0 + c`.
    pub fn shift_w0(&self, c: &Rational) -> DiffPoly {
        let slices: Vec<(Mono, UPoly)> = self.w0_slices().into_iter().map(|(rest, p)| (rest, p.shift(c))).collect();
        DiffPoly::from_w0_slices(&slices)
    }

    /// Homogeneous differential degree, if all terms share one.
    pub fn homogeneous_deg(&self) -> Option<i32> {
        let mut it = self.terms.iter().map(|(m, _)| m.deg());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_obar_deg(&self) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.obar_deg()).max()
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: usize) -> DiffPoly {
        DiffPoly::jet(k)
    }

    #[test]
    fn dx_and_partials() {
        let f = w(0).mul(&w(0)).scale(&Rational::new(1, 2));
        assert_eq!(f.dx(10).unwrap(), w(0).mul(&w(1)));
        let g = w(2).pow(3).mul_mono(&Mono::jet(1, -4), &Rational::ONE);
        let expected = w(2).pow(2).mul_mono(&Mono::jet(1, -4), &Rational::from_int(3));
        assert_eq!(g.partial(2), expected);
    }

    #[test]
    fn dx_respects_cutoff() {
        assert!(matches!(w(3).dx(3), Err(Error::JetCutoff { needed: 4, .. })));
    }

    #[test]
    fn shift_w0_round_trip() {
        let f = w(0).pow(3).add(&w(0).mul(&w(2)));
        let c = Rational::from_int(2);
        assert_eq!(f.shift_w0(&c).shift_w0(&-&c), f);
    }
}
