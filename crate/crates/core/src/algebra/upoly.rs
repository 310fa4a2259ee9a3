//! Dense univariate polynomials in `w_0` over the rationals.

use std::fmt;

use super::diffpoly::DiffPoly;
use super::jet::Mono;
use super::rational::Rational;

/// Coefficients from low to high degree, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> UPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> UPoly {
        UPoly(Vec::new())
    }

    pub fn one() -> UPoly {
        UPoly(vec![Rational::ONE])
    }

    pub fn constant(c: Rational) -> UPoly {
        UPoly::new(vec![c])
    }

    /// `w_0 + c`.
    pub fn linear(c: Rational) -> UPoly {
        UPoly::new(vec![c, Rational::ONE])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or(Rational::ZERO)
    }

    pub fn scale(&self, r: &Rational) -> UPoly {
        UPoly::new(self.0.iter().map(|c| c * r).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or(Rational::ZERO);
                    let b = o.0.get(i).cloned().unwrap_or(Rational::ZERO);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&Rational::from_int(-1)))
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::ZERO; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        (0..e).fold(UPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        if self.0.len() < d.0.len() {
            return (UPoly::zero(), self.clone());
        }
        let lead_inv = d.leading().recip();
        let mut r = self.0.clone();
        let mut q = vec![Rational::ZERO; self.0.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[i + j] -= &(&c * dc);
            }
            q[i] = c;
        }
        (UPoly::new(q), UPoly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * &Rational::from_int(i as i64)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::ZERO, |acc, c| &(&acc * x) + c)
    }

    /// `p(w_0 + c)`.
    pub fn shift(&self, c: &Rational) -> UPoly {
        let lin = UPoly::linear(c.clone());
        self.0.iter().rev().fold(UPoly::zero(), |acc, a| acc.mul(&lin).add(&UPoly::constant(a.clone())))
    }

    pub fn to_diffpoly(&self) -> DiffPoly {
        DiffPoly::from_terms(self.0.iter().enumerate().map(|(i, c)| (Mono::jet(0, i as i8), c.clone())))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_diffpoly())
    }
}
