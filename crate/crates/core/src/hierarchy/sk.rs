//! The Sawada–Kotera hierarchy: flows ingested from the data corpus in the
//! variable `u`, the normal Miura transformation to `w`, and the reduction
//! to the standard form.

use serde::Deserialize;

use super::normal_form::{normal_form, NormalForm};
use super::HierarchyTable;
use crate::algebra::linsolve::{solve, LinearSolution};
use crate::algebra::{EpsSeries, JetFunction, Param, Rational};
use crate::error::{Error, Result};

const FLOWS: &str = include_str!("../../data/sawada_kotera/flows.json");
const MIURA: &str = include_str!("../../data/sawada_kotera/miura.json");

/// The change of variable and the matching conventions.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct SkTransform {
    /// `A = Σ ε^{2k} A_k`; the new variable is `u + ε² ∂_x² A + shift`.
    pub density: EpsSeries,
    pub shift: Rational,
    /// Rows express the new times' flows through the old ones.
    pub recombination: Vec<Vec<Rational>>,
    pub eps_rescale: Rational,
}

/// The flows `∂_{T_m}`, `m = 0, 1, 2`, in the variable `u`.
pub fn flows() -> Result<HierarchyTable> {
    serde_json::from_str(FLOWS).map_err(|e| Error::Parse(format!("Sawada–Kotera flows: {e}")))
}

pub fn transform() -> Result<SkTransform> {
    serde_json::from_str(MIURA).map_err(|e| Error::Parse(format!("Sawada–Kotera transformation: {e}")))
}

/// Applies the Miura transformation and the shift, dropping the constants
/// the shift leaves in the densities.
pub fn to_w(table: &HierarchyTable, t: &SkTransform) -> Result<HierarchyTable> {
    let moved = table.apply_miura(&t.density)?;
    let back = -&t.shift;
    moved
        .map_entries(|s| {
            Ok(EpsSeries::from_coeffs(s.coeffs().iter().map(|c| c.shift_w0(&back)).collect::<Result<_>>()?))
        })
        .map(|h| h.drop_constants())
}

/// Recombines times and rescales ε as the transform prescribes, then reduces
/// to the standard form through the order the corpus provides.
pub fn reduce(table_w: &HierarchyTable, t: &SkTransform) -> Result<NormalForm> {
    let h = table_w.reparam_flows(&t.recombination)?.rescale_eps(&t.eps_rescale);
    normal_form(&h, h.g_max)
}

/// `k`-th Taylor coefficient at `w = 0` of a function of `w` and parameters.
fn taylor(f: &JetFunction, k: usize) -> Result<crate::algebra::ParamPoly> {
    let mut d = f.clone();
    let mut fact = Rational::ONE;
    for i in 1..=k {
        d = d.partial(0);
        fact = &fact * &Rational::from_int(i as i64);
    }
    d.eval_w0(&Rational::ZERO)
        .map(|v| v.scale(&fact.recip()))
        .ok_or_else(|| Error::Unsupported(format!("`{f}` is not a function of w regular at 0")))
}

/// Solves for the parameters in `family` (linear in them, vanishing when
/// they vanish) so that its Taylor coefficients at `w = 0` of orders
/// `0 .. params.len()` agree with those of `target`.
pub fn fit_parameters(family: &JetFunction, target: &JetFunction, params: &[Param]) -> Result<Vec<Rational>> {
    let mut rows = Vec::with_capacity(params.len());
    for k in 0..params.len() {
        let lhs = taylor(family, k)?;
        let rhs =
            taylor(target, k)?.as_rational().ok_or_else(|| Error::Invariant("target depends on parameters".into()))?;
        let mut coeffs = Vec::with_capacity(params.len());
        let mut rest = lhs.clone();
        for p in params {
            let c = lhs.coeff_of(*p, 1);
            let c =
                c.as_rational().ok_or_else(|| Error::Unsupported(format!("family is not linear in {}", p.name())))?;
            rest = rest.sub(&crate::algebra::ParamPoly::var(*p).scale(&c));
            coeffs.push(c);
        }
        if !rest.is_zero() {
            return Err(Error::Unsupported(format!("Taylor coefficient {k} of the family is not linear: `{rest}`")));
        }
        rows.push((coeffs, rhs));
    }
    match solve(&rows, params.len()) {
        LinearSolution::Solved { x, free } if free.is_empty() => Ok(x),
        LinearSolution::Solved { free, .. } => {
            Err(Error::Singular(format!("parameters {free:?} are not fixed by the Taylor coefficients")))
        }
        LinearSolution::Inconsistent => Err(Error::Singular("no parameter values match".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_jet_function;

    #[test]
    fn corpus_loads() {
        let f = flows().unwrap();
        assert_eq!(f.m_max(), 2);
        assert_eq!(f.g_max, 2);
        let t = transform().unwrap();
        assert_eq!(t.eps_rescale, Rational::new(1, 6));
    }

    #[test]
    fn fit_linear_family() {
        let fam = parse_jet_function("a*(1 + w) + 2*b*w").unwrap();
        let target = parse_jet_function("3/(1 + w)").unwrap();
        let x = fit_parameters(&fam, &target, &[Param::named("a"), Param::named("b")]).unwrap();
        assert_eq!(x, vec![Rational::from_int(3), Rational::from_int(-3)]);
    }
}
