//! Deformed hierarchies: two-point functions `Ω_{p;q}` as ε-series in
//! `w`-jets, built from deformed free energies through the quasi-Miura map,
//! and the transformations acting on them.

pub mod miura;
pub mod normal_form;
pub mod sk;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{substitute_series, EpsSeries, Flow, JetFunction, Rational};
use crate::error::{Error, Result};
use crate::frobenius1d::{omega0, GenusZeroData};
use crate::genus_expansion::DeformationData;
pub use miura::{default_cutoff, invert, quasi_miura, QuasiMiura};
pub use normal_form::{normal_form, NormalForm};

/// `Ω_{p;q}` for `p ≤ q`; the flow densities are `Ω_{0;m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyTable {
    pub g_max: usize,
    pub cutoff: usize,
    omega: BTreeMap<(usize, usize), EpsSeries>,
}

fn key(p: usize, q: usize) -> (usize, usize) {
    (p.min(q), p.max(q))
}

impl HierarchyTable {
    pub fn new(g_max: usize, cutoff: usize) -> HierarchyTable {
        HierarchyTable { g_max, cutoff, omega: BTreeMap::new() }
    }

    /// A table holding only flow densities `Ω_{0;m}`, `m = 0, 1, ...`.
    pub fn from_flows(flows: Vec<EpsSeries>, cutoff: usize) -> Result<HierarchyTable> {
        let g_max = flows.iter().map(|f| f.g_max()).min().ok_or_else(|| Error::Range("no flows".into()))?;
        let mut t = HierarchyTable::new(g_max, cutoff);
        for (m, f) in flows.into_iter().enumerate() {
            t.insert(0, m, f.truncate(g_max));
        }
        Ok(t)
    }

    pub fn insert(&mut self, p: usize, q: usize, f: EpsSeries) {
        self.omega.insert(key(p, q), f);
    }

    pub fn omega(&self, p: usize, q: usize) -> Result<&EpsSeries> {
        self.omega.get(&key(p, q)).ok_or_else(|| Error::Range(format!("Ω_{{{p};{q}}} is not in the table")))
    }

    pub fn flow(&self, m: usize) -> Result<&EpsSeries> {
        self.omega(0, m)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &EpsSeries)> {
        self.omega.iter()
    }

    /// Largest `m` with `Ω_{0;m}` present (flows are stored contiguously).
    pub fn m_max(&self) -> usize {
        (0..).take_while(|m| self.omega.contains_key(&(0, *m))).last().unwrap_or(0)
    }

    /// Largest `P` with every `Ω_{p;q}`, `p, q ≤ P` present.
    pub fn p_max(&self) -> usize {
        let full = |n: usize| (0..=n).all(|p| (p..=n).all(|q| self.omega.contains_key(&(p, q))));
        (0..=self.m_max()).take_while(|n| full(*n)).last().unwrap_or(0)
    }

    /// `∂f/∂t_m` along the full flow `w_{t_m} = ∂_x Ω_{0;m}`.
    pub fn t_derivative(&self, m: usize, f: &EpsSeries) -> Result<EpsSeries> {
        let order = f.max_jet().unwrap_or(0);
        Flow::new(self.flow(m)?.truncate(self.g_max), order, self.cutoff)?.derive_series(&f.truncate(self.g_max))
    }

    pub fn map_entries(&self, mut f: impl FnMut(&EpsSeries) -> Result<EpsSeries>) -> Result<HierarchyTable> {
        let mut out = HierarchyTable::new(self.g_max, self.cutoff);
        for (k, v) in &self.omega {
            out.omega.insert(*k, f(v)?);
        }
        Ok(out)
    }

    /// `ε² ↦ factor · ε²`.
    pub fn rescale_eps(&self, factor: &Rational) -> HierarchyTable {
        self.map_entries(|s| Ok(s.rescale_eps(factor))).expect("infallible")
    }

    /// Drops the constant term of every coefficient (densities matter only
    /// up to constants).
    pub fn drop_constants(&self) -> HierarchyTable {
        self.map_entries(|s| {
            let coeffs = s.coeffs().iter().map(|c| c.sub(&JetFunction::constant(constant_term(c)))).collect();
            Ok(EpsSeries::from_coeffs(coeffs))
        })
        .expect("infallible")
    }

    /// Recombines times: `∂_{T_p} = Σ_a matrix[p][a] ∂_{t_a}`, so
    /// `Ω_{T_p;T_q} = Σ matrix[p][a] matrix[q][b] Ω_{a;b}`. The matrix must be
    /// lower triangular with invertible diagonal and first row `(1, 0, ...)`.
    pub fn reparam_flows(&self, matrix: &[Vec<Rational>]) -> Result<HierarchyTable> {
        let n = matrix.len();
        for (p, row) in matrix.iter().enumerate() {
            if row.iter().skip(p + 1).any(|c| !c.is_zero()) {
                return Err(Error::Singular(format!("row {p} of the recombination is not lower triangular")));
            }
            if row.get(p).is_none_or(|c| c.is_zero()) {
                return Err(Error::Singular(format!("zero diagonal entry in row {p}")));
            }
        }
        if n == 0
            || matrix[0].iter().enumerate().any(|(a, c)| *c != if a == 0 { Rational::ONE } else { Rational::ZERO })
        {
            return Err(Error::Singular("recombination must fix t_0".into()));
        }
        let mut out = HierarchyTable::new(self.g_max, self.cutoff);
        for p in 0..n {
            'q: for q in p..n {
                let mut acc = EpsSeries::zero(self.g_max);
                for (a, ca) in matrix[p].iter().enumerate().take(p + 1) {
                    for (b, cb) in matrix[q].iter().enumerate().take(q + 1) {
                        let c = ca * cb;
                        if c.is_zero() {
                            continue;
                        }
                        let Ok(entry) = self.omega(a, b) else { continue 'q };
                        acc = acc.add(&entry.truncate(self.g_max).scale(&c));
                    }
                }
                out.insert(p, q, acc);
            }
        }
        Ok(out)
    }

    /// Replaces a parameter everywhere.
    pub fn substitute_param(&self, p: crate::algebra::Param, value: &crate::algebra::ParamPoly) -> HierarchyTable {
        self.map_entries(|s| Ok(s.substitute_param(p, value))).expect("infallible")
    }

    /// General change of variable `w̃ = w + ε² ∂_x² A` with
    /// `Ω̃_{p;q} = Ω_{p;q} + ε² ∂_{t_p}∂_{t_q} A`, re-expressed in `w̃`.
    /// `a` holds `A = Σ_k ε^{2k} A_k`.
    pub fn apply_miura(&self, a: &EpsSeries) -> Result<HierarchyTable> {
        let g = self.g_max;
        let a = a.truncate(g);
        let phi = a.dx(self.cutoff)?.dx(self.cutoff)?.shift(1);
        let image = invert(&phi, self.cutoff)?;
        let mut first: BTreeMap<usize, EpsSeries> = BTreeMap::new();
        let mut out = HierarchyTable::new(g, self.cutoff);
        for (&(p, q), entry) in &self.omega {
            let first_q = match first.entry(q) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(self.t_derivative(q, &a)?),
            };
            let second = self.t_derivative(p, first_q)?;
            let shifted = entry.truncate(g).add(&second.shift(1));
            out.omega.insert((p, q), substitute_series(&shifted, &image, g, self.cutoff)?);
        }
        Ok(out)
    }

    /// Normal Miura transformation: every `A_k` must be a differential
    /// polynomial, homogeneous of degree `2k`.
    pub fn apply_normal_miura(&self, a: &EpsSeries) -> Result<HierarchyTable> {
        for (k, c) in a.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let graded = c.homogeneous_deg() == Some(2 * k as i32);
            if !c.is_polynomial() || !graded {
                return Err(Error::Invariant(format!("normal Miura density A_{k} = `{c}` is not in A^[{}]", 2 * k)));
            }
        }
        self.apply_miura(a)
    }
}

fn constant_term(f: &JetFunction) -> Rational {
    if !f.den().is_one() {
        return Rational::ZERO;
    }
    f.num().terms().iter().find(|(m, _)| m.is_one()).map(|(_, c)| c.clone()).unwrap_or(Rational::ZERO)
}

/// Builds `Ω_{p;q}` for `p, q ≤ p_max` and flows `m ≤ m_max` from the
/// symbolic-`s` free energies of a deformation.
pub fn build_hierarchy(def: &DeformationData, m_max: usize, p_max: usize) -> Result<HierarchyTable> {
    let h: Vec<JetFunction> = (1..=def.g_max).map(|g| def.h(g)).collect::<Result<_>>()?;
    build_from_free_energies(&h, m_max, p_max)
}

/// `Ω^{flat}_{p;q} = Ω^{[0]}_{p;q} + Σ_g ε^{2g} ∂_p∂_q H_g`, with time
/// derivatives along the principal hierarchy, re-expressed in `w`-jets.
pub fn build_from_free_energies(h: &[JetFunction], m_max: usize, p_max: usize) -> Result<HierarchyTable> {
    let g_max = h.len();
    let cutoff = default_cutoff(g_max);
    let qm = QuasiMiura::from_free_energies(h, cutoff)?;
    let top = m_max.max(p_max);
    let g0 = GenusZeroData::new(top.max(1), cutoff)?;
    let mut pairs: Vec<(usize, usize)> = (0..=top).map(|m| (0, m)).collect();
    for p in 1..=p_max {
        pairs.extend((p..=p_max).map(|q| (p, q)));
    }
    let mut first: BTreeMap<(usize, usize), JetFunction> = BTreeMap::new();
    let mut table = HierarchyTable::new(g_max, cutoff);
    for (p, q) in pairs {
        let mut flat = EpsSeries::genus0(JetFunction::poly(omega0(p, q)), g_max);
        for (i, hg) in h.iter().enumerate() {
            let first_q = match first.entry((i, q)) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(g0.dt(q, hg)?),
            };
            flat.set(i + 1, g0.dt(p, first_q)?);
        }
        table.insert(p, q, substitute_series(&flat, &qm.inverse, g_max, cutoff)?);
    }
    let w = EpsSeries::genus0(JetFunction::jet(0), g_max);
    if table.omega(0, 0)? != &w {
        return Err(Error::Invariant(format!("Ω_{{0;0}} = {} instead of w", table.omega(0, 0)?)));
    }
    Ok(table)
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    #[serde(rename = "G_max")]
    g_max: usize,
    #[serde(rename = "M_max")]
    m_max: usize,
    cutoff: usize,
    omega: BTreeMap<String, EpsSeries>,
    flows: BTreeMap<String, EpsSeries>,
}

impl Serialize for HierarchyTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut omega = BTreeMap::new();
        let mut flows = BTreeMap::new();
        for (&(p, q), v) in &self.omega {
            if p == 0 {
                flows.insert(q.to_string(), v.clone());
            } else {
                omega.insert(format!("{p},{q}"), v.clone());
            }
        }
        TableJson { g_max: self.g_max, m_max: self.m_max(), cutoff: self.cutoff, omega, flows }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HierarchyTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = TableJson::deserialize(d)?;
        let mut t = HierarchyTable::new(j.g_max, j.cutoff);
        for (k, v) in j.flows {
            let m: usize = k.parse().map_err(|_| D::Error::custom(format!("bad flow index `{k}`")))?;
            t.insert(0, m, v);
        }
        for (k, v) in j.omega {
            let (p, q) = k
                .split_once(',')
                .and_then(|(p, q)| Some((p.trim().parse().ok()?, q.trim().parse().ok()?)))
                .ok_or_else(|| D::Error::custom(format!("bad omega key `{k}`")))?;
            t.insert(p, q, v);
        }
        Ok(t)
    }
}
