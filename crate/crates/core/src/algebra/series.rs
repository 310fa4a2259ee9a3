//! Truncated power series in `ε²` with jet-function coefficients.

use std::fmt;

use super::jetfn::JetFunction;
use super::param::{Param, ParamPoly};
use super::rational::Rational;
use crate::error::Result;

/// `Σ_{g=0}^{G} ε^{2g} c_g`; arithmetic truncates at `G`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpsSeries {
    coeffs: Vec<JetFunction>,
}

impl EpsSeries {
    pub fn zero(g_max: usize) -> EpsSeries {
        EpsSeries { coeffs: vec![JetFunction::zero(); g_max + 1] }
    }

    pub fn genus0(f: JetFunction, g_max: usize) -> EpsSeries {
        let mut s = EpsSeries::zero(g_max);
        s.coeffs[0] = f;
        s
    }

    pub fn from_coeffs(coeffs: Vec<JetFunction>) -> EpsSeries {
        assert!(!coeffs.is_empty(), "series needs at least a genus-0 slot");
        EpsSeries { coeffs }
    }

    pub fn g_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[JetFunction] {
        &self.coeffs
    }

    pub fn get(&self, g: usize) -> &JetFunction {
        &self.coeffs[g]
    }

    pub fn set(&mut self, g: usize, f: JetFunction) {
        self.coeffs[g] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest genus with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, g_max: usize) -> EpsSeries {
        let mut coeffs: Vec<JetFunction> = self.coeffs.iter().take(g_max + 1).cloned().collect();
        coeffs.resize(g_max + 1, JetFunction::zero());
        EpsSeries { coeffs }
    }

    pub fn add(&self, o: &EpsSeries) -> EpsSeries {
        let g = self.g_max().min(o.g_max());
        EpsSeries { coeffs: (0..=g).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect() }
    }

    pub fn sub(&self, o: &EpsSeries) -> EpsSeries {
        let g = self.g_max().min(o.g_max());
        EpsSeries { coeffs: (0..=g).map(|i| self.coeffs[i].sub(&o.coeffs[i])).collect() }
    }

    pub fn neg(&self) -> EpsSeries {
        EpsSeries { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, r: &Rational) -> EpsSeries {
        EpsSeries { coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect() }
    }

    pub fn mul_jet(&self, f: &JetFunction) -> Result<EpsSeries> {
        Ok(EpsSeries { coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect::<Result<_>>()? })
    }

    pub fn mul_param_poly(&self, p: &ParamPoly) -> Result<EpsSeries> {
        Ok(EpsSeries { coeffs: self.coeffs.iter().map(|c| c.mul_param_poly(p)).collect::<Result<_>>()? })
    }

    pub fn mul(&self, o: &EpsSeries) -> Result<EpsSeries> {
        let g = self.g_max().min(o.g_max());
        let mut coeffs = vec![JetFunction::zero(); g + 1];
        for i in 0..=g {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(g - i) {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&o.coeffs[j])?);
            }
        }
        Ok(EpsSeries { coeffs })
    }

    /// Multiplies by `ε^{2k}`, dropping what falls beyond the truncation.
    pub fn shift(&self, k: usize) -> EpsSeries {
        let g = self.g_max();
        let mut coeffs = vec![JetFunction::zero(); g + 1];
        for i in 0..=g {
            if i + k <= g {
                coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        EpsSeries { coeffs }
    }

    pub fn dx(&self, cutoff: usize) -> Result<EpsSeries> {
        Ok(EpsSeries { coeffs: self.coeffs.iter().map(|c| c.dx(cutoff)).collect::<Result<_>>()? })
    }

    pub fn partial(&self, k: usize) -> EpsSeries {
        EpsSeries { coeffs: self.coeffs.iter().map(|c| c.partial(k)).collect() }
    }

    pub fn max_jet(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.max_jet()).max()
    }

    /// `ε² ↦ factor · ε²`.
    pub fn rescale_eps(&self, factor: &Rational) -> EpsSeries {
        let mut f = Rational::ONE;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.scale(&f));
            f = &f * factor;
        }
        EpsSeries { coeffs }
    }

    pub fn substitute_param(&self, p: Param, value: &ParamPoly) -> EpsSeries {
        EpsSeries { coeffs: self.coeffs.iter().map(|c| c.substitute_param(p, value)).collect() }
    }
}

impl fmt::Debug for EpsSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for EpsSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if g == 0 {
                write!(f, "[{c}]")?;
            } else {
                write!(f, "eps^{}*[{c}]", 2 * g)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
