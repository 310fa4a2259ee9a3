//! Jet calculus: flows, Euler operator, x-integration and jet substitution.

use super::diffpoly::DiffPoly;
use super::jet::Mono;
use super::jetfn::JetFunction;
use super::rational::Rational;
use super::series::EpsSeries;
use crate::error::{Error, Result};

/// An evolutionary flow `∂w/∂t = ∂_x Ω` with cached `∂_x^j Ω`.
#[derive(Clone, Debug)]
pub struct Flow {
    /// `dx_powers[j] = ∂_x^j Ω`.
    dx_powers: Vec<EpsSeries>,
    cutoff: usize,
}

impl Flow {
    /// Precomputes derivatives so that jet functions depending on jets up to
    /// `max_order` can be differentiated along the flow.
    pub fn new(density: EpsSeries, max_order: usize, cutoff: usize) -> Result<Flow> {
        let mut dx_powers = vec![density];
        for j in 1..=max_order + 1 {
            let next = dx_powers[j - 1].dx(cutoff)?;
            dx_powers.push(next);
        }
        Ok(Flow { dx_powers, cutoff })
    }

    pub fn genus0(density: JetFunction, max_order: usize, cutoff: usize) -> Result<Flow> {
        Flow::new(EpsSeries::genus0(density, 0), max_order, cutoff)
    }

    pub fn density(&self) -> &EpsSeries {
        &self.dx_powers[0]
    }

    pub fn g_max(&self) -> usize {
        self.dx_powers[0].g_max()
    }

    fn dx_power(&self, j: usize) -> Result<&EpsSeries> {
        self.dx_powers.get(j).ok_or(Error::JetCutoff { needed: j, cutoff: self.dx_powers.len() - 1 })
    }

    /// `∂_t w_k = ∂_x^{k+1} Ω`.
    pub fn jet_velocity(&self, k: usize) -> Result<&EpsSeries> {
        self.dx_power(k + 1)
    }

    /// Derivative of a jet function along the genus-0 part of the flow.
    pub fn derive0(&self, f: &JetFunction) -> Result<JetFunction> {
        let mut out = JetFunction::zero();
        let Some(top) = f.max_jet() else { return Ok(out) };
        for k in 0..=top {
            let p = f.partial(k);
            if p.is_zero() {
                continue;
            }
            out = out.add(&p.mul(self.jet_velocity(k)?.get(0))?);
        }
        Ok(out)
    }

    /// `Σ_k ∂_x^{k+1}(Ω) · ∂f/∂w_k`, truncated at genus `g_max`.
    pub fn derive(&self, f: &JetFunction, g_max: usize) -> Result<EpsSeries> {
        let mut out = EpsSeries::zero(g_max);
        let Some(top) = f.max_jet() else { return Ok(out) };
        for k in 0..=top {
            let p = f.partial(k);
            if p.is_zero() {
                continue;
            }
            out = out.add(&self.jet_velocity(k)?.truncate(g_max).mul_jet(&p)?);
        }
        Ok(out)
    }

    /// Derivative of a series along the flow, truncated at the common order.
    pub fn derive_series(&self, f: &EpsSeries) -> Result<EpsSeries> {
        let g_max = f.g_max();
        let mut out = EpsSeries::zero(g_max);
        for (g, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&self.derive(c, g_max - g)?.truncate(g_max - g).extend_to(g_max).shift(g));
        }
        Ok(out)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }
}

impl EpsSeries {
    /// Pads with zero coefficients up to `g_max`.
    pub fn extend_to(&self, g_max: usize) -> EpsSeries {
        self.truncate(g_max)
    }
}

/// `Σ_k ∂_x^{k+1}(Ω) · ∂f/∂w_k` for a one-off flow density.
pub fn t_derivative_along(f: &JetFunction, density: &EpsSeries, g_max: usize, cutoff: usize) -> Result<EpsSeries> {
    let order = f.max_jet().unwrap_or(0);
    Flow::new(density.truncate(g_max), order, cutoff)?.derive(f, g_max)
}

/// Euler operator `Σ_k (-∂_x)^k ∂f/∂w_k` on differential polynomials.
pub fn variational_derivative(f: &JetFunction, cutoff: usize) -> Result<JetFunction> {
    let p = match f.as_diffpoly() {
        Some(p) if p.is_polynomial() => p,
        _ => return Err(Error::Unsupported("variational derivative of a non-polynomial jet function".into())),
    };
    Ok(JetFunction::poly(euler(p, cutoff)?))
}

pub fn euler(p: &DiffPoly, cutoff: usize) -> Result<DiffPoly> {
    let mut out = DiffPoly::zero();
    let Some(top) = p.max_jet() else { return Ok(out) };
    for k in 0..=top {
        let mut term = p.partial(k);
        for _ in 0..k {
            term = term.dx(cutoff)?.neg();
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// Finds `g` with `∂_x g = f`, discarding any constant term of `f` and fixing
/// the integration constant to zero.
pub fn integrate_x(f: &DiffPoly, cutoff: usize) -> Result<DiffPoly> {
    if !f.is_polynomial() {
        return Err(Error::Unsupported("x-integration of a non-polynomial".into()));
    }
    let mut rest = DiffPoly::from_terms(f.terms().iter().filter(|(m, _)| m.jets().iter().any(|e| *e != 0)).cloned());
    let mut out = DiffPoly::zero();
    while let Some(n) = rest.max_jet() {
        if n == 0 {
            return Err(Error::NotExact(format!("leftover `{rest}` depends on w_0 only")));
        }
        if rest.max_exp(n) > 1 {
            return Err(Error::NotExact(format!("`{rest}` is nonlinear in its highest jet w_{n}")));
        }
        let a = rest.coeff_in_jet(n, 1);
        // Antiderivative of the coefficient with respect to w_{n-1}.
        let mut prim = Vec::with_capacity(a.len());
        for (m, c) in a.terms() {
            let e = m.exp(n - 1);
            if e == -1 {
                return Err(Error::NotExact(format!("`{rest}` integrates to a logarithm")));
            }
            let mut m2 = m.clone();
            m2.set_exp(n - 1, e + 1);
            prim.push((m2, c / &Rational::from_int(e as i64 + 1)));
        }
        let g = DiffPoly::from_terms(prim);
        rest = rest.sub(&g.dx(cutoff)?);
        out = out.add(&g);
    }
    Ok(out)
}

impl DiffPoly {
    /// Coefficient of `w_k^e` (terms with other powers of `w_k` dropped).
    pub fn coeff_in_jet(&self, k: usize, e: i8) -> DiffPoly {
        DiffPoly::from_terms(self.terms().iter().filter(|(m, _)| m.exp(k) == e).map(|(m, c)| {
            let mut m2 = m.clone();
            m2.set_exp(k, 0);
            (m2, c.clone())
        }))
    }
}

/// Expands `f(w + δ)` with `δ_k = ∂_x^k δ` to genus `g_max`, where `image`
/// is the series `w + δ` and its genus-0 part must be exactly `w_0`.
pub fn substitute_jets(f: &JetFunction, image: &EpsSeries, g_max: usize, cutoff: usize) -> Result<EpsSeries> {
    let delta = perturbation(image)?;
    let top = f.max_jet().unwrap_or(0);
    let deltas = jet_perturbations(&delta, top, g_max, cutoff)?;
    substitute_with(f, &deltas, g_max)
}

/// Substitutes into every coefficient of a series.
pub fn substitute_series(f: &EpsSeries, image: &EpsSeries, g_max: usize, cutoff: usize) -> Result<EpsSeries> {
    let delta = perturbation(image)?;
    // need[k]: highest order of ∂_x^k δ that can reach genus g_max.
    let top = f.max_jet().unwrap_or(0);
    let mut need = vec![0usize; top + 1];
    for (g, c) in f.coeffs().iter().enumerate().take(g_max + 1) {
        for (k, n) in need.iter_mut().enumerate() {
            if !c.partial(k).is_zero() {
                *n = (*n).max(g_max - g);
            }
        }
    }
    for k in (0..top).rev() {
        need[k] = need[k].max(need[k + 1]);
    }
    let mut deltas = vec![delta.truncate(need[0])];
    for k in 1..=top {
        let next = deltas[k - 1].truncate(need[k]).dx(cutoff)?;
        deltas.push(next);
    }
    let mut out = EpsSeries::zero(g_max);
    for (g, c) in f.coeffs().iter().enumerate().take(g_max + 1) {
        if c.is_zero() {
            continue;
        }
        out = out.add(&substitute_with(c, &deltas, g_max - g)?.extend_to(g_max).shift(g));
    }
    Ok(out)
}

fn perturbation(image: &EpsSeries) -> Result<EpsSeries> {
    if image.get(0) != &JetFunction::jet(0) {
        return Err(Error::Singular(format!("substitution image has genus-0 part `{}`, expected w", image.get(0))));
    }
    let mut delta = image.clone();
    delta.set(0, JetFunction::zero());
    Ok(delta)
}

fn jet_perturbations(delta: &EpsSeries, top: usize, g_max: usize, cutoff: usize) -> Result<Vec<EpsSeries>> {
    let mut deltas = vec![delta.truncate(g_max)];
    for k in 1..=top {
        let next = deltas[k - 1].dx(cutoff)?;
        deltas.push(next);
    }
    Ok(deltas)
}

fn substitute_with(f: &JetFunction, deltas: &[EpsSeries], g_max: usize) -> Result<EpsSeries> {
    let mut vars: Vec<usize> = Vec::new();
    if let Some(top) = f.max_jet() {
        for k in 0..=top {
            if !f.partial(k).is_zero() {
                vars.push(k);
            }
        }
    }
    let mut acc = EpsSeries::zero(g_max);
    let unit = EpsSeries::genus0(JetFunction::int(1), g_max);
    taylor(f, &vars, 0, deltas, unit, g_max, &mut acc)?;
    Ok(acc)
}

/// Multivariate Taylor expansion: visits each multi-index of total order at
/// most `order_left` over `vars[idx..]`.
fn taylor(
    f: &JetFunction,
    vars: &[usize],
    idx: usize,
    deltas: &[EpsSeries],
    prod: EpsSeries,
    order_left: usize,
    acc: &mut EpsSeries,
) -> Result<()> {
    if idx == vars.len() {
        *acc = acc.add(&prod.mul_jet(f)?);
        return Ok(());
    }
    let k = vars[idx];
    let mut g = f.clone();
    let mut p = prod;
    for n in 0..=order_left {
        if n > 0 {
            g = g.partial(k).scale(&Rational::new(1, n as i64));
            if g.is_zero() {
                break;
            }
            p = p.mul(&deltas[k])?;
            if p.is_zero() {
                break;
            }
        }
        taylor(&g, vars, idx + 1, deltas, p.clone(), order_left - n, acc)?;
    }
    Ok(())
}

/// Builds `Σ_j coeff_j · w_{jets_j}` helpers used in tests and parsers.
pub fn monomial(jets: &[(usize, i8)], c: Rational) -> JetFunction {
    let m = jets.iter().fold(Mono::one(), |acc, (k, e)| acc.mul(&Mono::jet(*k, *e)));
    JetFunction::poly(DiffPoly::term(m, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: usize = 20;

    fn w(k: usize) -> JetFunction {
        JetFunction::jet(k)
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn flow_derivatives() {
        let omega = EpsSeries::genus0(monomial(&[(0, 2)], r(1, 2)), 0);
        let d = t_derivative_along(&w(0), &omega, 0, K).unwrap();
        assert_eq!(d.get(0), &w(0).mul(&w(1)).unwrap());
        let d = t_derivative_along(&w(1), &omega, 0, K).unwrap();
        assert_eq!(d.get(0), &monomial(&[(1, 2)], r(1, 1)).add(&monomial(&[(0, 1), (2, 1)], r(1, 1))));
        let d = t_derivative_along(&JetFunction::log_w1(r(1, 1)), &EpsSeries::genus0(w(0), 0), 0, K).unwrap();
        assert_eq!(d.get(0), &monomial(&[(2, 1), (1, -1)], r(1, 1)));
    }

    #[test]
    fn euler_operator_examples() {
        assert!(variational_derivative(&w(0).mul(&w(1)).unwrap(), K).unwrap().is_zero());
        assert_eq!(variational_derivative(&monomial(&[(1, 2)], r(1, 1)), K).unwrap(), monomial(&[(2, 1)], r(-2, 1)));
        assert_eq!(variational_derivative(&monomial(&[(0, 3)], r(1, 1)), K).unwrap(), monomial(&[(0, 2)], r(3, 1)));
        assert!(variational_derivative(&JetFunction::log_w1(r(1, 1)), K).is_err());
    }

    #[test]
    fn integration_examples() {
        let f = w(0).mul(&w(1)).unwrap();
        let g = integrate_x(f.as_diffpoly().unwrap(), K).unwrap();
        assert_eq!(JetFunction::poly(g), monomial(&[(0, 2)], r(1, 2)));
        let f = w(1).mul(&w(2)).unwrap();
        let g = integrate_x(f.as_diffpoly().unwrap(), K).unwrap();
        assert_eq!(JetFunction::poly(g), monomial(&[(1, 2)], r(1, 2)));
        let f = monomial(&[(1, 2)], r(1, 1));
        assert!(matches!(integrate_x(f.as_diffpoly().unwrap(), K), Err(Error::NotExact(_))));
    }

    #[test]
    fn substitution_examples() {
        let image = EpsSeries::from_coeffs(vec![w(0), w(2)]);
        let out = substitute_jets(&w(0), &image, 1, K).unwrap();
        assert_eq!(out, image);
        let inv = JetFunction::int(1).div(&w(1)).unwrap();
        let out = substitute_jets(&inv, &image, 1, K).unwrap();
        assert_eq!(out.get(0), &inv);
        assert_eq!(out.get(1), &monomial(&[(3, 1), (1, -2)], r(-1, 1)));
        let ident = EpsSeries::genus0(w(0), 2);
        let f = JetFunction::log_w1(r(1, 24)).add(&monomial(&[(2, 3), (1, -4)], r(1, 360)));
        assert_eq!(substitute_jets(&f, &ident, 2, K).unwrap(), EpsSeries::genus0(f, 2));
    }
}
