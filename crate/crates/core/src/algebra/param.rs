//! Symbolic parameters and polynomials over them.

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashMap;

use super::rational::Rational;
use crate::error::{Error, Result};

/// A parameter name of at most eight ASCII characters, packed big-endian so
/// that integer order equals lexicographic order of the names.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Param(u64);

impl Param {
    pub fn new(name: &str) -> Result<Param> {
        let bytes = name.as_bytes();
        let valid = !bytes.is_empty()
            && bytes.len() <= 8
            && bytes[0].is_ascii_alphabetic()
            && bytes.iter().all(|b| b.is_ascii_alphanumeric() || *b == b'_');
        if !valid {
            return Err(Error::Parse(format!("invalid parameter name `{name}`")));
        }
        let mut packed = [0u8; 8];
        packed[..bytes.len()].copy_from_slice(bytes);
        Ok(Param(u64::from_be_bytes(packed)))
    }

    /// Panicking constructor for names known at compile time.
    pub fn named(name: &str) -> Param {
        Param::new(name).expect("static parameter name")
    }

    pub fn name(&self) -> String {
        let bytes = self.0.to_be_bytes();
        let len = bytes.iter().position(|b| *b == 0).unwrap_or(8);
        String::from_utf8_lossy(&bytes[..len]).into_owned()
    }
}

impl fmt::Debug for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Product of parameter powers, sorted by parameter, no zero exponents.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ParamMono(Vec<(Param, u32)>);

impl ParamMono {
    pub fn one() -> ParamMono {
        ParamMono(Vec::new())
    }

    pub fn var(p: Param, e: u32) -> ParamMono {
        if e == 0 {
            ParamMono::one()
        } else {
            ParamMono(vec![(p, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Param, u32)>) -> ParamMono {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by_key(|(p, _)| *p);
        let mut out: Vec<(Param, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            match out.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => out.push((p, e)),
            }
        }
        ParamMono(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Param, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, p: Param) -> u32 {
        self.0.iter().find(|(q, _)| *q == p).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn mul(&self, o: &ParamMono) -> ParamMono {
        if self.0.is_empty() {
            return o.clone();
        }
        if o.0.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            let (a, b) = (self.0[i], o.0[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        ParamMono(out)
    }

    /// Removes parameter `p`, returning its exponent and the rest.
    pub fn split_off(&self, p: Param) -> (u32, ParamMono) {
        let e = self.exponent(p);
        if e == 0 {
            return (0, self.clone());
        }
        (e, ParamMono(self.0.iter().filter(|(q, _)| *q != p).copied().collect()))
    }
}

impl Ord for ParamMono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for ParamMono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for ParamMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ParamMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, e) in &self.0 {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial in parameters with rational coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ParamPoly(Vec<(ParamMono, Rational)>);

impl ParamPoly {
    pub fn zero() -> ParamPoly {
        ParamPoly(Vec::new())
    }

    pub fn constant(c: Rational) -> ParamPoly {
        if c.is_zero() {
            ParamPoly::zero()
        } else {
            ParamPoly(vec![(ParamMono::one(), c)])
        }
    }

    pub fn int(n: i64) -> ParamPoly {
        ParamPoly::constant(Rational::from_int(n))
    }

    pub fn var(p: Param) -> ParamPoly {
        ParamPoly(vec![(ParamMono::var(p, 1), Rational::ONE)])
    }

    pub fn term(m: ParamMono, c: Rational) -> ParamPoly {
        if c.is_zero() {
            ParamPoly::zero()
        } else {
            ParamPoly(vec![(m, c)])
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (ParamMono, Rational)>>(terms: I) -> ParamPoly {
        let mut acc: FxHashMap<ParamMono, Rational> = FxHashMap::default();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(v) => *v += &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut v: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        ParamPoly(v)
    }

    pub fn terms(&self) -> &[(ParamMono, Rational)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.0.as_slice() {
            [] => Some(Rational::ZERO),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn params(&self) -> Vec<Param> {
        let mut ps: Vec<Param> = self.0.iter().flat_map(|(m, _)| m.pairs().iter().map(|(p, _)| *p)).collect();
        ps.sort();
        ps.dedup();
        ps
    }

    pub fn add(&self, o: &ParamPoly) -> ParamPoly {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        // Both sides are sorted: merge.
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            match self.0[i].0.cmp(&o.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(o.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.0[i].1 + &o.0[j].1;
                    if !c.is_zero() {
                        out.push((self.0[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        ParamPoly(out)
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn sub(&self, o: &ParamPoly) -> ParamPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> ParamPoly {
        if r.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly(self.0.iter().map(|(m, c)| (m.clone(), c * r)).collect())
    }

    pub fn mul(&self, o: &ParamPoly) -> ParamPoly {
        if self.is_zero() || o.is_zero() {
            return ParamPoly::zero();
        }
        if let Some(r) = o.as_rational() {
            return self.scale(&r);
        }
        if let Some(r) = self.as_rational() {
            return o.scale(&r);
        }
        ParamPoly::from_terms(self.0.iter().flat_map(|(m1, c1)| o.0.iter().map(move |(m2, c2)| (m1.mul(m2), c1 * c2))))
    }

    pub fn mul_mono(&self, m: &ParamMono, c: &Rational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly(self.0.iter().map(|(m1, c1)| (m1.mul(m), c1 * c)).collect())
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut acc = ParamPoly::int(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree_in(&self, p: Param) -> u32 {
        self.0.iter().map(|(m, _)| m.exponent(p)).max().unwrap_or(0)
    }

    /// Coefficient of `p^k`, as a polynomial in the remaining parameters.
    pub fn coeff_of(&self, p: Param, k: u32) -> ParamPoly {
        ParamPoly::from_terms(self.0.iter().filter_map(|(m, c)| {
            let (e, rest) = m.split_off(p);
            (e == k).then(|| (rest, c.clone()))
        }))
    }

    /// Replaces `p` by `value`.
    pub fn substitute(&self, p: Param, value: &ParamPoly) -> ParamPoly {
        let deg = self.degree_in(p);
        if deg == 0 {
            return self.clone();
        }
        let mut powers = vec![ParamPoly::int(1)];
        for k in 1..=deg as usize {
            let next = powers[k - 1].mul(value);
            powers.push(next);
        }
        let mut out = ParamPoly::zero();
        let mut acc: Vec<(ParamMono, Rational)> = Vec::new();
        for (m, c) in &self.0 {
            let (e, rest) = m.split_off(p);
            if e == 0 {
                acc.push((rest, c.clone()));
            } else {
                out = out.add(&powers[e as usize].mul_mono(&rest, c));
            }
        }
        out.add(&ParamPoly::from_terms(acc))
    }

    pub fn eval_param(&self, p: Param, value: &Rational) -> ParamPoly {
        self.substitute(p, &ParamPoly::constant(value.clone()))
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
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

    #[test]
    fn names_round_trip_and_order() {
        let a = Param::named("a12");
        assert_eq!(a.name(), "a12");
        assert!(Param::named("a12") < Param::named("a22"));
        assert!(Param::named("s") < Param::named("s1"));
        assert!(Param::new("toolongname").is_err());
    }

    #[test]
    fn substitution_expands() {
        let s = Param::named("s");
        let t = Param::named("t");
        let p = ParamPoly::var(s).mul(&ParamPoly::var(s)).add(&ParamPoly::int(1));
        let q = p.substitute(s, &ParamPoly::var(t).add(&ParamPoly::int(1)));
        // (t+1)^2 + 1 = t^2 + 2t + 2
        assert_eq!(q.coeff_of(t, 0).as_rational(), Some(Rational::from_int(2)));
        assert_eq!(q.coeff_of(t, 1).as_rational(), Some(Rational::from_int(2)));
        assert_eq!(q.coeff_of(t, 2).as_rational(), Some(Rational::from_int(1)));
    }
}
