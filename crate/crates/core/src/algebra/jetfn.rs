//! Rational jet functions with optional logarithmic terms.

use std::fmt;

use super::diffpoly::DiffPoly;
use super::jet::Mono;
use super::param::{Param, ParamPoly};
use super::rational::Rational;
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// `num / den + log_w1·log(w_1) + log_w0·log(w_0)`.
///
/// `num` is polynomial in `w_0, w_2, w_3, ...` and Laurent in `w_1`, so powers
/// of `w_1` in the denominator live in `num`. `den` is a monic polynomial in
/// `w_0` coprime to `num`. With these rules the representation is canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JetFunction {
    num: DiffPoly,
    den: UPoly,
    log_w1: Rational,
    log_w0: Rational,
}

impl Default for JetFunction {
    fn default() -> Self {
        JetFunction::zero()
    }
}

impl From<DiffPoly> for JetFunction {
    fn from(p: DiffPoly) -> Self {
        JetFunction::poly(p)
    }
}

impl JetFunction {
    pub fn zero() -> JetFunction {
        JetFunction::poly(DiffPoly::zero())
    }

    pub fn poly(num: DiffPoly) -> JetFunction {
        JetFunction { num, den: UPoly::one(), log_w1: Rational::ZERO, log_w0: Rational::ZERO }
    }

    pub fn constant(c: Rational) -> JetFunction {
        JetFunction::poly(DiffPoly::constant(c))
    }

    pub fn int(n: i64) -> JetFunction {
        JetFunction::constant(Rational::from_int(n))
    }

    pub fn jet(k: usize) -> JetFunction {
        JetFunction::poly(DiffPoly::jet(k))
    }

    pub fn param(p: Param) -> JetFunction {
        JetFunction::poly(DiffPoly::param(p))
    }

    pub fn log_w1(c: Rational) -> JetFunction {
        JetFunction { log_w1: c, ..JetFunction::zero() }
    }

    pub fn log_w0(c: Rational) -> JetFunction {
        JetFunction { log_w0: c, ..JetFunction::zero() }
    }

    /// `num / den` in lowest terms.
    pub fn fraction(num: DiffPoly, den: UPoly) -> JetFunction {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = JetFunction { num, den, log_w1: Rational::ZERO, log_w0: Rational::ZERO };
        f.reduce();
        f
    }

    pub fn with_logs(mut self, log_w1: Rational, log_w0: Rational) -> JetFunction {
        self.log_w1 = log_w1;
        self.log_w0 = log_w0;
        self
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = UPoly::one();
            return;
        }
        if self.den.degree() == Some(0) {
            let c = self.den.leading().recip();
            self.num = self.num.scale(&c);
            self.den = UPoly::one();
            return;
        }
        let lead = self.den.leading();
        if !lead.is_one() {
            let inv = lead.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        let mut g = self.den.clone();
        for (_, slice) in self.num.w0_slices() {
            g = g.gcd(&slice);
            if g.degree() == Some(0) {
                return;
            }
        }
        if g.degree().unwrap_or(0) > 0 {
            self.num = self.num.div_upoly(&g).expect("gcd divides numerator");
            self.den = self.den.div_rem(&g).0;
        }
    }

    pub fn num(&self) -> &DiffPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn log_w1_coeff(&self) -> &Rational {
        &self.log_w1
    }

    pub fn log_w0_coeff(&self) -> &Rational {
        &self.log_w0
    }

    pub fn has_log(&self) -> bool {
        !self.log_w1.is_zero() || !self.log_w0.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero() && !self.has_log()
    }

    /// True when the function is a differential polynomial.
    pub fn is_polynomial(&self) -> bool {
        !self.has_log() && self.den.is_one() && self.num.is_polynomial()
    }

    pub fn as_diffpoly(&self) -> Option<&DiffPoly> {
        (!self.has_log() && self.den.is_one()).then_some(&self.num)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.has_log() || !self.den.is_one() {
            return None;
        }
        self.num.as_rational()
    }

    /// Highest jet the function depends on.
    pub fn max_jet(&self) -> Option<usize> {
        let mut m = self.num.max_jet();
        if !self.log_w1.is_zero() {
            m = m.max(Some(1));
        }
        if !self.log_w0.is_zero() || self.den.degree().unwrap_or(0) > 0 {
            m = m.max(Some(0));
        }
        m
    }

    pub fn add(&self, o: &JetFunction) -> JetFunction {
        let log_w1 = &self.log_w1 + &o.log_w1;
        let log_w0 = &self.log_w0 + &o.log_w0;
        if self.den == o.den {
            let mut f = JetFunction { num: self.num.add(&o.num), den: self.den.clone(), log_w1, log_w0 };
            if !f.den.is_one() {
                f.reduce();
            }
            return f;
        }
        let g = self.den.gcd(&o.den);
        let a = self.den.div_rem(&g).0;
        let b = o.den.div_rem(&g).0;
        let num = self.num.mul_upoly(&b).add(&o.num.mul_upoly(&a));
        let den = self.den.mul(&b);
        JetFunction::fraction(num, den).with_logs(log_w1, log_w0)
    }

    pub fn neg(&self) -> JetFunction {
        JetFunction { num: self.num.neg(), den: self.den.clone(), log_w1: -&self.log_w1, log_w0: -&self.log_w0 }
    }

    pub fn sub(&self, o: &JetFunction) -> JetFunction {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> JetFunction {
        if r.is_zero() {
            return JetFunction::zero();
        }
        JetFunction {
            num: self.num.scale(r),
            den: self.den.clone(),
            log_w1: &self.log_w1 * r,
            log_w0: &self.log_w0 * r,
        }
    }

    /// Multiplication by a differential polynomial. Fails if `self` carries a
    /// logarithm and `p` is not a rational constant.
    pub fn mul_poly(&self, p: &DiffPoly) -> Result<JetFunction> {
        if let Some(r) = p.as_rational() {
            return Ok(self.scale(&r));
        }
        if self.has_log() {
            return Err(Error::Unsupported("product with a logarithmic term".into()));
        }
        Ok(JetFunction::fraction(self.num.mul(p), self.den.clone()))
    }

    pub fn mul_param_poly(&self, p: &ParamPoly) -> Result<JetFunction> {
        self.mul_poly(&DiffPoly::from_param_poly(p))
    }

    pub fn mul(&self, o: &JetFunction) -> Result<JetFunction> {
        if let Some(r) = o.as_rational() {
            return Ok(self.scale(&r));
        }
        if let Some(r) = self.as_rational() {
            return Ok(o.scale(&r));
        }
        if self.has_log() || o.has_log() {
            return Err(Error::Unsupported("product of jet functions with logarithmic terms".into()));
        }
        let num = self.num.mul(&o.num);
        if self.den.is_one() && o.den.is_one() {
            return Ok(JetFunction::poly(num));
        }
        Ok(JetFunction::fraction(num, self.den.mul(&o.den)))
    }

    /// Division by a function of the form `c · w_1^a · P(w_0) / Q(w_0)`.
    pub fn div(&self, o: &JetFunction) -> Result<JetFunction> {
        if o.has_log() {
            return Err(Error::Unsupported("division by a logarithmic term".into()));
        }
        if let Some(r) = o.as_rational() {
            if r.is_zero() {
                return Err(Error::Singular("division by zero".into()));
            }
            return Ok(self.scale(&r.recip()));
        }
        if self.has_log() {
            return Err(Error::Unsupported("division of a logarithmic term by a non-constant".into()));
        }
        let slices = o.num.w0_slices();
        let [(rest, p)] = slices.as_slice() else {
            return Err(Error::Unsupported(format!("denominator `{}` is not w_1^a times a polynomial in w_0", o.num)));
        };
        let only_w1 = rest.params().is_one() && rest.jets().iter().enumerate().all(|(k, e)| k == 1 || *e == 0);
        if !only_w1 {
            return Err(Error::Unsupported(format!("denominator `{}` is not w_1^a times a polynomial in w_0", o.num)));
        }
        let inv_w1 = Mono::jet(1, -rest.exp(1));
        let num = self.num.mul_upoly(&o.den).mul_mono(&inv_w1, &Rational::ONE);
        Ok(JetFunction::fraction(num, self.den.mul(p)))
    }

    pub fn pow(&self, e: u32) -> Result<JetFunction> {
        let mut acc = JetFunction::int(1);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Partial derivative with respect to `w_k`.
    pub fn partial(&self, k: usize) -> JetFunction {
        let mut out = if k == 0 && !self.den.is_one() {
            // (n/d)' = (n_0 d - n d') / d^2
            let dd = self.den.derivative();
            let num = self.num.partial(0).mul_upoly(&self.den).sub(&self.num.mul_upoly(&dd));
            JetFunction::fraction(num, self.den.mul(&self.den))
        } else {
            JetFunction::fraction(self.num.partial(k), self.den.clone())
        };
        if k == 1 && !self.log_w1.is_zero() {
            out = out.add(&JetFunction::poly(DiffPoly::term(Mono::jet(1, -1), self.log_w1.clone())));
        }
        if k == 0 && !self.log_w0.is_zero() {
            out =
                out.add(&JetFunction::fraction(DiffPoly::constant(self.log_w0.clone()), UPoly::linear(Rational::ZERO)));
        }
        out
    }

    /// Total x-derivative.
    pub fn dx(&self, cutoff: usize) -> Result<JetFunction> {
        let mut out = if self.den.is_one() {
            JetFunction::poly(self.num.dx(cutoff)?)
        } else {
            let dd = self.den.derivative().to_diffpoly().mul(&DiffPoly::jet(1));
            let num = self.num.dx(cutoff)?.mul_upoly(&self.den).sub(&self.num.mul(&dd));
            JetFunction::fraction(num, self.den.mul(&self.den))
        };
        if !self.log_w1.is_zero() {
            if cutoff < 2 {
                return Err(Error::JetCutoff { needed: 2, cutoff });
            }
            let t = Mono::jet(1, -1).mul(&Mono::jet(2, 1));
            out = out.add(&JetFunction::poly(DiffPoly::term(t, self.log_w1.clone())));
        }
        if !self.log_w0.is_zero() {
            out = out.add(&JetFunction::fraction(
                DiffPoly::term(Mono::jet(1, 1), self.log_w0.clone()),
                UPoly::linear(Rational::ZERO),
            ));
        }
        Ok(out)
    }

    pub fn substitute_param(&self, p: Param, value: &ParamPoly) -> JetFunction {
        JetFunction { num: self.num.substitute_param(p, value), ..self.clone() }.reduced()
    }

    fn reduced(mut self) -> JetFunction {
        self.reduce();
        self
    }

    pub fn degree_in_param(&self, p: Param) -> u32 {
        self.num.degree_in_param(p)
    }

    /// Coefficient of `p^k`; logarithmic terms belong to `k = 0`.
    pub fn coeff_of_param(&self, p: Param, k: u32) -> JetFunction {
        let num = self.num.coeff_of_param(p, k);
        let f = JetFunction::fraction(num, self.den.clone());
        if k == 0 {
            f.with_logs(self.log_w1.clone(), self.log_w0.clone())
        } else {
            f
        }
    }

    /// Substitutes `w_0 ↦ w_0 + c`.
    pub fn shift_w0(&self, c: &Rational) -> Result<JetFunction> {
        if !self.log_w0.is_zero() {
            return Err(Error::Unsupported("shift of log(w_0)".into()));
        }
        Ok(JetFunction::fraction(self.num.shift_w0(c), self.den.shift(c))
            .with_logs(self.log_w1.clone(), Rational::ZERO))
    }

    /// Value at `w_0 = x` of a function of `w_0` and parameters only.
    pub fn eval_w0(&self, x: &Rational) -> Option<ParamPoly> {
        if self.has_log() || self.num.max_jet().unwrap_or(0) > 0 {
            return None;
        }
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        let mut out = ParamPoly::zero();
        for (rest, slice) in self.num.w0_slices() {
            out = out.add(&ParamPoly::term(rest.params().clone(), slice.eval(x)));
        }
        Some(out.scale(&d.recip()))
    }

    /// Common differential degree of all terms; logarithms count as degree 0.
    pub fn homogeneous_deg(&self) -> Option<i32> {
        if self.num.is_zero() {
            return self.has_log().then_some(0);
        }
        let d = self.num.homogeneous_deg()?;
        (!self.has_log() || d == 0).then_some(d)
    }

    pub fn max_obar_deg(&self) -> i32 {
        self.num.max_obar_deg().unwrap_or(0)
    }

    pub fn params(&self) -> Vec<Param> {
        self.num.params()
    }
}

impl fmt::Debug for JetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for JetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.num.is_zero() || !self.has_log() {
            if self.den.is_one() {
                parts.push(self.num.to_string());
            } else {
                parts.push(format!("({})/({:?})", self.num, self.den));
            }
        }
        if !self.log_w1.is_zero() {
            parts.push(format!("{}*log(w1)", self.log_w1));
        }
        if !self.log_w0.is_zero() {
            parts.push(format!("{}*log(w)", self.log_w0));
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: usize) -> JetFunction {
        JetFunction::jet(k)
    }

    #[test]
    fn constant_over_polynomial_is_not_rational() {
        let f = JetFunction::log_w0(Rational::ONE).partial(0);
        assert_eq!(f.as_rational(), None);
        assert_eq!(f.mul(&w(1)).unwrap(), w(1).div(&w(0)).unwrap());
    }

    #[test]
    fn log_derivatives() {
        let f = JetFunction::log_w1(Rational::ONE);
        let expected = w(2).div(&w(1)).unwrap();
        assert_eq!(f.dx(5).unwrap(), expected);
        assert_eq!(f.partial(1), JetFunction::int(1).div(&w(1)).unwrap());
        assert!(f.partial(0).is_zero());
    }

    #[test]
    fn fractions_in_w0_reduce() {
        // (w^2 - 1)/(w + 1) = w - 1
        let num = w(0).mul(&w(0)).unwrap().sub(&JetFunction::int(1));
        let den = w(0).add(&JetFunction::int(1));
        let q = num.div(&den).unwrap();
        assert_eq!(q, w(0).sub(&JetFunction::int(1)));
    }

    #[test]
    fn sum_of_fractions_uses_common_denominator() {
        let a = JetFunction::int(1).div(&w(0)).unwrap();
        let b = JetFunction::int(1).div(&w(0).add(&JetFunction::int(1))).unwrap();
        let s = a.add(&b);
        // 1/w + 1/(w+1) = (2w+1)/(w(w+1))
        assert_eq!(s.den().degree(), Some(2));
        assert_eq!(s.sub(&b), a);
    }

    #[test]
    fn log_product_is_rejected() {
        let f = JetFunction::log_w1(Rational::ONE);
        assert!(f.mul(&w(2)).is_err());
        assert_eq!(f.mul(&JetFunction::int(3)).unwrap(), JetFunction::log_w1(Rational::from_int(3)));
    }
}
