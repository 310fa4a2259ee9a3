//! The jet-space derivation `D` induced by an operator satisfying the genus-0
//! constraint.
//!
//! With `Ω_m = Ω^{[0]}_{0;m}` and `A_{ij}` the coefficient of `ε²∂_i∂_j`:
//!
//! ```text
//! D(v)   = -2 Σ A_{ij} Ω_i Ω_j - 2 c_{00} - 2 Σ_m b(0,m) Ω_m
//! D(v_k) = ∂_x D(v_{k-1}) - Σ A_{ij} (Ω_i ∂_x^k Ω_j + Ω_j ∂_x^k Ω_i) - Σ_m b(0,m) ∂_x^k Ω_m
//! ```
//!
//! and `D` acts on jet functions as `Σ_k ∂f/∂v_k · D(v_k)`.

use super::operator::OperatorSpec;
use crate::algebra::{DiffPoly, JetFunction, ParamPoly, Rational};
use crate::error::{Error, Result};
use crate::frobenius1d::{omega0, GenusZeroData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGenerator {
    /// `images[k] = D(v_k)`.
    images: Vec<JetFunction>,
}

impl DGenerator {
    pub fn images(&self) -> &[JetFunction] {
        &self.images
    }

    pub fn image(&self, k: usize) -> Result<&JetFunction> {
        self.images.get(k).ok_or(Error::JetCutoff { needed: k, cutoff: self.images.len() - 1 })
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|f| f.is_zero())
    }

    /// Applies `D` as a derivation.
    pub fn apply(&self, f: &JetFunction) -> Result<JetFunction> {
        let mut out = JetFunction::zero();
        let Some(top) = f.max_jet() else { return Ok(out) };
        for k in 0..=top {
            let img = self.image(k)?;
            if img.is_zero() {
                continue;
            }
            let p = f.partial(k);
            if p.is_zero() {
                continue;
            }
            out = out.add(&p.mul(img)?);
        }
        Ok(out)
    }
}

/// Builds `D(v_k)` for `0 ≤ k ≤ k_max` and audits `obar_deg D(v_k) ≤ k - 1`.
pub fn make_d(op: &OperatorSpec, g0: &GenusZeroData, k_max: usize) -> Result<DGenerator> {
    if let Some((&key, _)) = op.quad_c.iter().find(|(k, _)| **k != (0, 0)) {
        return Err(Error::Unsupported(format!("quadratic source term t̃_{}t̃_{} has no jet-space image", key.0, key.1)));
    }
    let cutoff = g0.cutoff();
    let omega = |m: u32| JetFunction::poly(omega0(0, m as usize));
    let coeff = |p: &ParamPoly| JetFunction::poly(DiffPoly::from_param_poly(p));
    let b0 = op.row(0);
    let two = Rational::from_int(2);

    let mut dv = JetFunction::zero();
    for (&(i, j), a) in &op.quad_a {
        dv = dv.add(&omega(i).mul(&omega(j))?.mul(&coeff(a))?);
    }
    if let Some(c) = op.quad_c.get(&(0, 0)) {
        dv = dv.add(&coeff(c));
    }
    for (m, b) in &b0 {
        dv = dv.add(&omega(*m).mul(&coeff(b))?);
    }
    let mut images = vec![dv.scale(&-&two)];

    for k in 1..=k_max {
        let mut next = images[k - 1].dx(cutoff)?;
        for (&(i, j), a) in &op.quad_a {
            let xi = g0.jet_velocity(i as usize, k)?;
            let xj = g0.jet_velocity(j as usize, k)?;
            let t = omega(i).mul(&xj)?.add(&omega(j).mul(&xi)?);
            next = next.sub(&t.mul(&coeff(a))?);
        }
        for (m, b) in &b0 {
            next = next.sub(&g0.jet_velocity(*m as usize, k)?.mul(&coeff(b))?);
        }
        let obar = next.max_obar_deg();
        if !next.is_zero() && obar > k as i32 - 1 {
            return Err(Error::Invariant(format!("obar_deg D(v_{k}) = {obar} exceeds {}", k - 1)));
        }
        images.push(next);
    }
    Ok(DGenerator { images })
}
