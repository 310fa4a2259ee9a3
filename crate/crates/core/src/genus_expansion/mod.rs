//! Genus expansion of the deformed free energies `H_g(s) = Σ_ℓ s^ℓ H_g^{[ℓ]}`
//! for a deformation `∂_s τ = L τ` of the one-dimensional Frobenius manifold.
//!
//! The coefficients satisfy `H_g^{[0]} = F_g` and, with `D` the derivation
//! induced by `L` and `A_{ij}` its `ε²∂_i∂_j` coefficients,
//!
//! ```text
//! H_1^{[1]}   = D(H_1^{[0]}) + Σ A_{ij} Ω^{[0]}_{i;j} + const
//! ℓ H_1^{[ℓ]} = D(H_1^{[ℓ-1]})                                     (ℓ ≥ 2)
//! ℓ H_g^{[ℓ]} = D(H_g^{[ℓ-1]}) + Σ A_{ij} (Σ_{k,r} ∂_i H_k^{[r]} ∂_j H_{g-k}^{[ℓ-1-r]}
//!                                          + ∂_i ∂_j H_{g-1}^{[ℓ-1]})    (g ≥ 2)
//! ```
//!
//! where `k` runs over `1..g` and `r` over `0..ℓ`.

mod solve;
mod sources;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{JetFunction, Param, ParamPoly, Rational};
use crate::error::{Error, Result};
use crate::frobenius1d::GenusZeroData;
use crate::virasoro::{make_d, OperatorSpec};
pub use solve::{free_energies, solve_fg, solve_fg_from};
use sources::{genus_one_source, quad_pairs, Table};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Name of the deformation parameter in [`DeformationData::h`].
pub const DEFORMATION_PARAM: &str = "s";

/// Parameter used for intermediate steps of [`compose`].
const COMPOSE_PARAM: &str = "s__";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformOptions {
    /// Largest `ℓ` computed at every genus; defaults to `4g`.
    pub s_deg_cap: Option<usize>,
    /// Jet cutoff; defaults to `3 g_max + 3`.
    pub cutoff: Option<usize>,
}

impl DeformOptions {
    pub fn cap(&self, g: usize) -> usize {
        self.s_deg_cap.unwrap_or(4 * g)
    }

    fn cutoff_for(&self, g_max: usize) -> usize {
        self.cutoff.unwrap_or(3 * g_max + 3)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusRow {
    pub genus: usize,
    /// `H_g^{[ℓ]}` for `ℓ = 0, 1, ...`, without trailing zeros.
    pub coeffs: Vec<JetFunction>,
    /// The recursion hit the cap before it could be shown to terminate.
    pub truncated: bool,
}

/// One applied step `(operator, value of s)` of a composite deformation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub operator: OperatorSpec,
    pub value: ParamPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Hex SHA-256 of the operator, genus, options and prior steps.
    pub key: String,
    pub engine_version: String,
    /// Steps already applied to the initial data, oldest first.
    pub prior_steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationData {
    pub operator: OperatorSpec,
    pub g_max: usize,
    pub s_param: String,
    pub options: DeformOptions,
    pub rows: Vec<GenusRow>,
    pub provenance: Provenance,
}

impl DeformationData {
    fn row(&self, g: usize) -> Result<&GenusRow> {
        if g == 0 || g > self.g_max {
            return Err(Error::Range(format!("genus {g} outside 1..={}", self.g_max)));
        }
        Ok(&self.rows[g - 1])
    }

    /// `H_g^{[ℓ]}` (zero beyond the computed range).
    pub fn coeff(&self, g: usize, l: usize) -> Result<JetFunction> {
        Ok(self.row(g)?.coeffs.get(l).cloned().unwrap_or_default())
    }

    pub fn coeffs(&self, g: usize) -> Result<&[JetFunction]> {
        Ok(&self.row(g)?.coeffs)
    }

    pub fn s_degree(&self, g: usize) -> Result<usize> {
        Ok(self.row(g)?.coeffs.len().saturating_sub(1))
    }

    pub fn truncated(&self, g: usize) -> Result<bool> {
        Ok(self.row(g)?.truncated)
    }

    pub fn any_truncated(&self) -> bool {
        self.rows.iter().any(|r| r.truncated)
    }

    pub fn param(&self) -> Param {
        Param::named(&self.s_param)
    }

    /// `H_g(s) = Σ_ℓ s^ℓ H_g^{[ℓ]}` with `s` a parameter.
    pub fn h(&self, g: usize) -> Result<JetFunction> {
        self.h_at(g, &ParamPoly::var(self.param()))
    }

    /// `H_g` at a given (possibly symbolic) value of `s`.
    pub fn h_at(&self, g: usize, value: &ParamPoly) -> Result<JetFunction> {
        let mut out = JetFunction::zero();
        let mut pow = ParamPoly::int(1);
        for c in self.coeffs(g)? {
            out = out.add(&c.mul_param_poly(&pow)?);
            pow = pow.mul(value);
        }
        Ok(out)
    }

    /// `[H_1(value), ..., H_{g_max}(value)]`.
    pub fn evaluate(&self, value: &ParamPoly) -> Result<Vec<JetFunction>> {
        (1..=self.g_max).map(|g| self.h_at(g, value)).collect()
    }
}

/// Cache key for a deformation run.
pub fn provenance_key(op: &OperatorSpec, g_max: usize, options: &DeformOptions, prior: &[Step]) -> String {
    let payload = serde_json::json!({
        "operator": op,
        "g_max": g_max,
        "options": options,
        "prior_steps": prior,
        "engine_version": ENGINE_VERSION,
    });
    let digest = Sha256::digest(payload.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Deforms the free energies of the one-dimensional Frobenius manifold along `op`.
pub fn deform(op: &OperatorSpec, g_max: usize, options: &DeformOptions) -> Result<DeformationData> {
    let initial = free_energies(g_max)?;
    let mut data = deform_from(op, &initial, Param::named(DEFORMATION_PARAM), options)?;
    data.provenance.key = provenance_key(op, g_max, options, &[]);
    Ok(data)
}

/// Applies the operators in order, each starting from the previous result
/// evaluated at its `s` value. The returned data has `s_degree 0` rows
/// holding the composed free energies.
pub fn compose(steps: &[Step], g_max: usize, options: &DeformOptions) -> Result<DeformationData> {
    let internal = Param::named(COMPOSE_PARAM);
    let (last, _) = steps.split_last().ok_or_else(|| Error::Range("compose needs at least one step".into()))?;
    let mut current = free_energies(g_max)?;
    for step in steps {
        let mentions_internal = step.value.params().contains(&internal) || step.operator_params().contains(&internal);
        if mentions_internal {
            return Err(Error::Unsupported(format!("parameter name {COMPOSE_PARAM} is reserved")));
        }
        let data = deform_from(&step.operator, &current, internal, options)?;
        if let Some(row) = data.rows.iter().find(|r| r.truncated) {
            return Err(Error::Invariant(format!("compose: genus {} truncated at the s-degree cap", row.genus)));
        }
        current = data.evaluate(&step.value)?;
    }
    let rows = current
        .into_iter()
        .enumerate()
        .map(|(i, h)| GenusRow { genus: i + 1, coeffs: vec![h], truncated: false })
        .collect();
    Ok(DeformationData {
        operator: last.operator.clone(),
        g_max,
        s_param: DEFORMATION_PARAM.into(),
        options: options.clone(),
        rows,
        provenance: Provenance {
            key: provenance_key(&OperatorSpec::zero(), g_max, options, steps),
            engine_version: ENGINE_VERSION.into(),
            prior_steps: steps.to_vec(),
        },
    })
}

impl Step {
    pub fn new(operator: OperatorSpec, value: ParamPoly) -> Step {
        Step { operator, value }
    }

    fn operator_params(&self) -> Vec<Param> {
        let op = &self.operator;
        let mut out: Vec<Param> = op
            .quad_a
            .values()
            .chain(op.lin_extra.values())
            .chain(op.quad_c.values())
            .chain(op.lin.iter().map(|f| &f.poly))
            .chain(std::iter::once(&op.constant))
            .flat_map(|p| p.params())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Runs the recursion from arbitrary initial data `[H_1^{[0]}, ..., H_G^{[0]}]`.
pub fn deform_from(
    op: &OperatorSpec,
    initial: &[JetFunction],
    s_param: Param,
    options: &DeformOptions,
) -> Result<DeformationData> {
    let g_max = initial.len();
    if g_max == 0 {
        return Err(Error::Range("no initial data".into()));
    }
    let cutoff = options.cutoff_for(g_max);
    let pairs = quad_pairs(op);
    let targets = op.row(0).into_iter().map(|(m, _)| m as usize);
    let m_max = pairs.iter().map(|(_, j, _)| *j).chain(targets).max().unwrap_or(0).max(1);
    let g0 = GenusZeroData::new(m_max, cutoff)?;
    let top_jet = initial.iter().filter_map(|f| f.max_jet()).max().unwrap_or(0);
    let d = make_d(op, &g0, (3 * g_max - 1).max(top_jet + 1).min(cutoff - 1))?;

    let mut table = Table::new(&g0, g_max);
    let mut rows: Vec<GenusRow> = Vec::with_capacity(g_max);
    for g in 1..=g_max {
        let cap = options.cap(g);
        table.h[g] = vec![initial[g - 1].clone()];
        audit(g, 0, &initial[g - 1])?;
        // Lower rows are final, so sources vanish once ℓ exceeds `bound`.
        let lower_truncated = rows.iter().any(|r| r.truncated);
        let deg = |k: usize| rows[k - 1].coeffs.len() as isize - 1;
        let bound = if g == 1 {
            1
        } else {
            let cross = (1..g).map(|k| deg(k) + deg(g - k)).max().unwrap_or(-1);
            (cross.max(deg(g - 1)) + 1).max(1) as usize
        };
        let mut terminated = false;
        for l in 1..=cap {
            let prev = table.h[g][l - 1].clone();
            let mut next = d.apply(&prev)?;
            if g == 1 {
                if l == 1 {
                    next = next.add(&genus_one_source(op)?);
                }
            } else {
                next = next.add(&table.higher_source(&pairs, g, l)?);
            }
            let next = next.scale(&Rational::new(1, l as i64));
            audit(g, l, &next)?;
            let zero = next.is_zero();
            table.h[g].push(next);
            if zero && l >= bound && !lower_truncated {
                terminated = true;
                break;
            }
        }
        let mut coeffs = table.h[g].clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|f| f.is_zero()) {
            coeffs.pop();
        }
        rows.push(GenusRow { genus: g, coeffs, truncated: !terminated });
    }

    Ok(DeformationData {
        operator: op.clone(),
        g_max,
        s_param: s_param.name(),
        options: options.clone(),
        rows,
        provenance: Provenance {
            key: provenance_key(op, g_max, options, &[]),
            engine_version: ENGINE_VERSION.into(),
            prior_steps: Vec::new(),
        },
    })
}

/// Grading checks on `H_g^{[ℓ]}`: degree `2g-2`, `obar_deg ≤ 3g-3`, jets up to
/// `v_{3g-2}`, and no logarithms except in `H_1^{[0]}`.
fn audit(g: usize, l: usize, f: &JetFunction) -> Result<()> {
    if f.is_zero() {
        return Ok(());
    }
    let fail = |what: String| Err(Error::Invariant(format!("H_{g}^[{l}]: {what}")));
    if f.has_log() && (g, l) != (1, 0) {
        return fail("unexpected logarithm".into());
    }
    if f.homogeneous_deg() != Some(2 * g as i32 - 2) {
        return fail(format!("not homogeneous of degree {}", 2 * g - 2));
    }
    if f.max_obar_deg() > 3 * g as i32 - 3 {
        return fail(format!("obar degree {} exceeds {}", f.max_obar_deg(), 3 * g - 3));
    }
    if f.max_jet().unwrap_or(0) > 3 * g - 2 {
        return fail(format!("depends on v_{}", f.max_jet().unwrap_or(0)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_jet_function;
    use crate::virasoro::{extract_like, virasoro};

    #[test]
    fn l22_genus_one() {
        let data = deform(&extract_like(2, 1).unwrap(), 1, &DeformOptions::default()).unwrap();
        let expected = parse_jet_function("log(v1)/24 - 3/4*s*v^2").unwrap();
        assert_eq!(data.h(1).unwrap(), expected);
        assert!(!data.truncated(1).unwrap());
    }

    #[test]
    fn virasoro_deformation_is_trivial() {
        let data = deform(&virasoro(1).unwrap(), 2, &DeformOptions::default()).unwrap();
        assert_eq!(data.s_degree(1).unwrap(), 0);
        assert_eq!(data.s_degree(2).unwrap(), 0);
        assert!(!data.any_truncated());
    }
}
