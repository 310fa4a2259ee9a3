//! Truncated multivariate power series in the times `t_0, ..., t_M`.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{ParamPoly, Rational};

/// Coefficients keyed by exponent vectors; terms of total degree above
/// `degree` are discarded.
#[derive(Clone, PartialEq, Eq)]
pub struct TSeries {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u8>, ParamPoly>,
}

impl TSeries {
    pub fn zero(nvars: usize, degree: u32) -> TSeries {
        TSeries { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, degree: u32, c: ParamPoly) -> TSeries {
        let mut s = TSeries::zero(nvars, degree);
        s.insert(vec![0; nvars], c);
        s
    }

    pub fn var(nvars: usize, degree: u32, i: usize) -> TSeries {
        let mut s = TSeries::zero(nvars, degree);
        if degree >= 1 {
            let mut e = vec![0; nvars];
            e[i] = 1;
            s.insert(e, ParamPoly::int(1));
        }
        s
    }

    /// `t̃_i = t_i - δ_{i,1}`.
    pub fn shifted_var(nvars: usize, degree: u32, i: usize) -> TSeries {
        let v = TSeries::var(nvars, degree, i);
        if i == 1 {
            v.sub(&TSeries::constant(nvars, degree, ParamPoly::int(1)))
        } else {
            v
        }
    }

    fn insert(&mut self, e: Vec<u8>, c: ParamPoly) {
        let deg: u32 = e.iter().map(|x| *x as u32).sum();
        if deg > self.degree || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u8]) -> ParamPoly {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &TSeries) -> TSeries {
        let mut out = self.clone();
        out.degree = self.degree.min(o.degree);
        out.terms.retain(|e, _| e.iter().map(|x| *x as u32).sum::<u32>() <= o.degree);
        for (e, c) in &o.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> TSeries {
        self.scale_poly(&ParamPoly::int(-1))
    }

    pub fn sub(&self, o: &TSeries) -> TSeries {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> TSeries {
        self.scale_poly(&ParamPoly::constant(r.clone()))
    }

    pub fn scale_poly(&self, p: &ParamPoly) -> TSeries {
        let mut out = TSeries::zero(self.nvars, self.degree);
        for (e, c) in &self.terms {
            out.insert(e.clone(), c.mul(p));
        }
        out
    }

    pub fn mul(&self, o: &TSeries) -> TSeries {
        let degree = self.degree.min(o.degree);
        let mut out = TSeries::zero(self.nvars, degree);
        for (e1, c1) in &self.terms {
            let d1: u32 = e1.iter().map(|x| *x as u32).sum();
            for (e2, c2) in &o.terms {
                let d2: u32 = e2.iter().map(|x| *x as u32).sum();
                if d1 + d2 > degree {
                    continue;
                }
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> TSeries {
        let mut acc = TSeries::constant(self.nvars, self.degree, ParamPoly::int(1));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂t_i`; the result is exact through degree `degree - 1`.
    pub fn derivative(&self, i: usize) -> TSeries {
        let mut out = TSeries::zero(self.nvars, self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.insert(e2, c.scale(&Rational::from_int(e[i] as i64)));
        }
        out
    }

    pub fn truncate(&self, degree: u32) -> TSeries {
        let mut out = TSeries::zero(self.nvars, degree.min(self.degree));
        for (e, c) in &self.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| **x > 0)
                    .map(|(i, x)| if *x == 1 { format!("t{i}") } else { format!("t{i}^{x}") })
                    .collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{} + O(deg {})", parts.join(" + "), self.degree + 1)
    }
}
