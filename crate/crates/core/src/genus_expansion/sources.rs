//! Quadratic source terms shared by the deformation recursion and the
//! free-energy solver.

use rustc_hash::FxHashMap;

use crate::algebra::{DiffPoly, JetFunction};
use crate::error::Result;
use crate::frobenius1d::{omega0, GenusZeroData};
use crate::virasoro::OperatorSpec;

/// `(i, j, A_{ij})` for `i ≤ j`, with the coefficient as a jet function.
pub(crate) fn quad_pairs(op: &OperatorSpec) -> Vec<(usize, usize, JetFunction)> {
    op.quad_a
        .iter()
        .map(|(&(i, j), a)| (i as usize, j as usize, JetFunction::poly(DiffPoly::from_param_poly(a))))
        .collect()
}

/// Triangular table `h[g][ℓ]` (with `h[0]` unused) plus a cache of genus-0
/// time derivatives of its entries.
pub(crate) struct Table<'a> {
    pub g0: &'a GenusZeroData,
    pub h: Vec<Vec<JetFunction>>,
    derivs: FxHashMap<(usize, usize, usize), JetFunction>,
}

impl<'a> Table<'a> {
    pub fn new(g0: &'a GenusZeroData, g_max: usize) -> Table<'a> {
        Table { g0, h: vec![Vec::new(); g_max + 1], derivs: FxHashMap::default() }
    }

    pub fn entry(&self, g: usize, l: usize) -> Option<&JetFunction> {
        self.h.get(g).and_then(|row| row.get(l))
    }

    /// `∂_m h[g][ℓ]`; zero outside the table.
    pub fn dt(&mut self, g: usize, l: usize, m: usize) -> Result<JetFunction> {
        let Some(f) = self.entry(g, l) else { return Ok(JetFunction::zero()) };
        if f.is_zero() {
            return Ok(JetFunction::zero());
        }
        if let Some(d) = self.derivs.get(&(g, l, m)) {
            return Ok(d.clone());
        }
        let d = self.g0.dt(m, f)?;
        self.derivs.insert((g, l, m), d.clone());
        Ok(d)
    }

    /// Source of `ℓ h[g][ℓ]` beyond `D(h[g][ℓ-1])` for `g ≥ 2`, `ℓ ≥ 1`:
    /// `Σ A_{ij} (Σ_{k,r} ∂_i h[k][r] ∂_j h[g-k][ℓ-1-r] + ∂_i∂_j h[g-1][ℓ-1])`.
    pub fn higher_source(&mut self, pairs: &[(usize, usize, JetFunction)], g: usize, l: usize) -> Result<JetFunction> {
        let mut out = JetFunction::zero();
        for (i, j, a) in pairs {
            let mut acc = JetFunction::zero();
            for k in 1..g {
                for r in 0..l {
                    let x = self.dt(k, r, *i)?;
                    if x.is_zero() {
                        continue;
                    }
                    let y = self.dt(g - k, l - 1 - r, *j)?;
                    if y.is_zero() {
                        continue;
                    }
                    acc = acc.add(&x.mul(&y)?);
                }
            }
            let dj = self.dt(g - 1, l - 1, *j)?;
            if !dj.is_zero() {
                acc = acc.add(&self.g0.dt(*i, &dj)?);
            }
            if !acc.is_zero() {
                out = out.add(&acc.mul(a)?);
            }
        }
        Ok(out)
    }
}

/// Genus-1 source at `ℓ = 1`: `Σ A_{ij} Ω^{[0]}_{i;j} + const`.
pub(crate) fn genus_one_source(op: &OperatorSpec) -> Result<JetFunction> {
    let mut out = JetFunction::poly(DiffPoly::from_param_poly(&op.constant));
    for (i, j, a) in quad_pairs(op) {
        out = out.add(&JetFunction::poly(omega0(i, j)).mul(&a)?);
    }
    Ok(out)
}
