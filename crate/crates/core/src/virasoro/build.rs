//! The operators `L_i(ν)` of the one-dimensional Frobenius manifold and their
//! `ν^{2j}` coefficients `L_{i,2j}`.
//!
//! With μ = 0, R = 0 and η = 1 the regularized stress tensor gives, after the
//! Γ-function reflection factors cancel against `-cos(πν)/π`:
//!
//! * `t̃_m ∂_{m+i}`: even part in ν of `Π_{k=0}^{i} (m + 1/2 + k + ν)`;
//! * `ε² ∂_k ∂_l` with `k + l = i - 1`: `½ Π_{j≤k}(j+½+ν) Π_{j≤l}(j+½-ν)`
//!   summed over both orders of `(k, l)`;
//! * `ε^{-2} t̃_0²/2` in `L_{-1}` and the constant `1/16` in `L_0`.

use super::operator::{source_param, LinFamily, OperatorSpec};
use crate::algebra::{Param, ParamPoly, Rational};
use crate::error::{Error, Result};

fn nu() -> Param {
    Param::named("nu")
}

/// `L_i(ν) = Σ_j L_{i,2j} ν^{2j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuOperator {
    pub level: i32,
    /// `parts[j] = L_{i,2j}`.
    pub parts: Vec<OperatorSpec>,
}

impl NuOperator {
    pub fn part(&self, j: usize) -> Result<&OperatorSpec> {
        self.parts.get(j).ok_or_else(|| {
            Error::Range(format!("L_{} has no ν^{} coefficient (j ≤ {})", self.level, 2 * j, self.parts.len() - 1))
        })
    }

    /// The operator at a rational value of ν.
    pub fn at(&self, value: &Rational) -> OperatorSpec {
        let nu2 = value * value;
        let mut pow = Rational::ONE;
        let mut out = OperatorSpec::zero();
        for p in &self.parts {
            out = out.add(&p.scale(&ParamPoly::constant(pow.clone())));
            pow = &pow * &nu2;
        }
        out
    }
}

/// `Π_{j=0}^{n} (j + ½ + base + sign·ν)` as a polynomial in `m` and `ν`.
fn pochhammer(n: i32, base: &ParamPoly, sign: i64) -> ParamPoly {
    let mut acc = ParamPoly::int(1);
    for j in 0..=n {
        let factor = base
            .add(&ParamPoly::constant(Rational::new(2 * j as i64 + 1, 2)))
            .add(&ParamPoly::var(nu()).scale(&Rational::from_int(sign)));
        acc = acc.mul(&factor);
    }
    acc
}

fn split_even(p: &ParamPoly, max_j: usize, what: &str) -> Result<Vec<ParamPoly>> {
    let deg = p.degree_in(nu()) as usize;
    if deg > 2 * max_j + 1 {
        return Err(Error::Invariant(format!("{what}: ν-degree {deg} exceeds {}", 2 * max_j)));
    }
    Ok((0..=max_j).map(|j| p.coeff_of(nu(), 2 * j as u32)).collect())
}

/// Builds `L_i(ν)` for `i ≥ -1`.
pub fn build_l(i: i32) -> Result<NuOperator> {
    if i < -1 {
        return Err(Error::Range(format!("L_i needs i ≥ -1, got {i}")));
    }
    let max_j = ((i + 1) / 2) as usize;
    let mut parts = vec![OperatorSpec::zero(); max_j + 1];

    let m = ParamPoly::var(source_param());
    let lin = if i >= 0 { pochhammer(i, &m, 1) } else { ParamPoly::int(1) };
    let lin_parts = split_even(&lin, max_j, "linear coefficient")?;
    let from = (-i).max(0) as u32;
    for (j, poly) in lin_parts.into_iter().enumerate() {
        if !poly.is_zero() {
            parts[j].lin.push(LinFamily { shift: i, from, poly });
        }
    }

    if i >= 1 {
        let zero = ParamPoly::zero();
        let mut pairs: std::collections::BTreeMap<(i32, i32), ParamPoly> = Default::default();
        for k in 0..i {
            let l = i - 1 - k;
            let a = pochhammer(k, &zero, 1).mul(&pochhammer(l, &zero, -1)).scale(&Rational::new(1, 2));
            let e = pairs.entry((k.min(l), k.max(l))).or_default();
            *e = e.add(&a);
        }
        for ((k, l), a) in pairs {
            // The two orders of (k, l) are exchanged by ν ↦ -ν, so odd parts cancel.
            if a.terms().iter().any(|(mono, _)| mono.exponent(nu()) % 2 == 1) {
                return Err(Error::Invariant(format!("quadratic coefficient ({k},{l}) is not even in ν")));
            }
            for (j, c) in split_even(&a, max_j, "quadratic coefficient")?.into_iter().enumerate() {
                parts[j].add_quad_a(k as u32, l as u32, &c);
            }
        }
    }
    if i == -1 {
        parts[0].add_quad_c(0, 0, &ParamPoly::constant(Rational::new(1, 2)));
    }
    if i == 0 {
        parts[0].constant = ParamPoly::constant(Rational::new(1, 16));
    }
    Ok(NuOperator { level: i, parts: parts.into_iter().map(OperatorSpec::canonical).collect() })
}

/// `L_{i,2j}`: the `ν^{2j}` coefficient of `L_i(ν)`.
pub fn extract_like(i: i32, j: usize) -> Result<OperatorSpec> {
    let op = build_l(i)?;
    op.part(j).cloned()
}

/// The Virasoro operator `L_i = L_{i,0}`.
pub fn virasoro(i: i32) -> Result<OperatorSpec> {
    extract_like(i, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l22_matches_closed_form() {
        let op = extract_like(2, 1).unwrap();
        for p in 0..=10u32 {
            assert_eq!(op.lin_coeff(p, p + 2).as_rational(), Some(Rational::new(3 * (2 * p as i64 + 3), 2)));
        }
        assert_eq!(op.quad_a.len(), 1);
        assert_eq!(op.quad_a[&(0, 1)].as_rational(), Some(Rational::new(-3, 2)));
        assert!(op.quad_c.is_empty() && op.constant.is_zero());
    }

    #[test]
    fn l_minus_one() {
        let op = virasoro(-1).unwrap();
        assert!(op.quad_a.is_empty());
        assert_eq!(op.lin_coeff(1, 0).as_rational(), Some(Rational::ONE));
        assert_eq!(op.lin_coeff(5, 4).as_rational(), Some(Rational::ONE));
        assert_eq!(op.quad_c[&(0, 0)].as_rational(), Some(Rational::new(1, 2)));
    }

    #[test]
    fn l12_shift_coefficient_is_one() {
        let op = extract_like(1, 1).unwrap();
        for p in 0..6u32 {
            assert_eq!(op.lin_coeff(p, p + 1).as_rational(), Some(Rational::ONE));
        }
        assert_eq!(op.quad_a[&(0, 0)].as_rational(), Some(Rational::new(-1, 2)));
        assert!(extract_like(1, 2).is_err());
    }
}
