//! Genus-0 data of the one-dimensional Frobenius manifold: θ-functions,
//! two-point functions, the Riemann–Hopf flows, the topological solution and
//! the genus-one free energy.
//!
//! The fixed constants of the one-dimensional case are η = 1, μ = 0, R = 0
//! and Euler field `v ∂_v`. The jet variable `v` is stored as `w_0`.

pub mod tseries;

use crate::algebra::{DiffPoly, Flow, JetFunction, Mono, Rational};
use crate::error::{Error, Result};
pub use tseries::TSeries;

/// `θ_m = v^{m+1}/(m+1)!`.
pub fn theta(m: usize) -> DiffPoly {
    DiffPoly::term(Mono::jet(0, (m + 1) as i8), Rational::factorial(m as u32 + 1).recip())
}

/// `Ω^{[0]}_{p;q} = v^{p+q+1} / (p! q! (p+q+1))`.
pub fn omega0(p: usize, q: usize) -> DiffPoly {
    let n = p + q + 1;
    let c = &(&Rational::factorial(p as u32) * &Rational::factorial(q as u32)) * &Rational::from_int(n as i64);
    DiffPoly::term(Mono::jet(0, n as i8), c.recip())
}

/// `∂_x Ω^{[0]}_{0;m} = v^m v_1 / m!`.
pub fn flow0(m: usize) -> DiffPoly {
    DiffPoly::term(Mono::jet(0, m as i8).mul(&Mono::jet(1, 1)), Rational::factorial(m as u32).recip())
}

/// `F_1 = (1/24) log v_1`.
pub fn f1() -> JetFunction {
    JetFunction::log_w1(Rational::new(1, 24))
}

/// Riemann–Hopf flows with cached x-derivatives, used for genus-0 time
/// derivatives of jet functions.
#[derive(Clone, Debug)]
pub struct GenusZeroData {
    m_max: usize,
    cutoff: usize,
    flows: Vec<Flow>,
}

impl GenusZeroData {
    pub fn new(m_max: usize, cutoff: usize) -> Result<GenusZeroData> {
        let flows = (0..=m_max)
            .map(|m| Flow::genus0(JetFunction::poly(omega0(0, m)), cutoff.saturating_sub(1), cutoff))
            .collect::<Result<_>>()?;
        Ok(GenusZeroData { m_max, cutoff, flows })
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn flow(&self, m: usize) -> Result<&Flow> {
        self.flows.get(m).ok_or(Error::FlowCutoff { needed: m, cutoff: self.m_max })
    }

    /// `∂f/∂t_m` along the principal hierarchy.
    pub fn dt(&self, m: usize, f: &JetFunction) -> Result<JetFunction> {
        if m == 0 {
            return f.dx(self.cutoff);
        }
        self.flow(m)?.derive0(f)
    }

    /// `∂_x^k Ω^{[0]}_{0;m}`, i.e. `∂v_{k-1}/∂t_m` for `k ≥ 1`.
    pub fn jet_velocity(&self, m: usize, k: usize) -> Result<JetFunction> {
        if k == 0 {
            return Ok(JetFunction::poly(omega0(0, m)));
        }
        Ok(self.flow(m)?.jet_velocity(k - 1)?.get(0).clone())
    }
}

/// Solution `v(t)` of the genus-0 Euler–Lagrange equation
/// `Σ_m t̃_m v^m/m! = 0` as a series in `t_0, ..., t_{nvars-1}`.
#[derive(Clone, Debug)]
pub struct TopologicalSolution {
    v: TSeries,
    powers: Vec<TSeries>,
}

impl TopologicalSolution {
    /// Fixed-point iteration of `v = t_0 + Σ_{m≥1} t_m v^m/m!`; each sweep
    /// fixes one more total degree.
    pub fn new(nvars: usize, degree: u32) -> TopologicalSolution {
        assert!(nvars >= 1 && degree >= 1);
        let t0 = TSeries::var(nvars, degree, 0);
        let mut v = t0.clone();
        for _ in 0..degree {
            let mut next = t0.clone();
            let mut vp = TSeries::constant(nvars, degree, crate::algebra::ParamPoly::int(1));
            for m in 1..nvars {
                vp = vp.mul(&v);
                let tm = TSeries::var(nvars, degree, m);
                next = next.add(&tm.mul(&vp).scale(&Rational::factorial(m as u32).recip()));
            }
            v = next;
        }
        TopologicalSolution { v, powers: Vec::new() }.with_powers()
    }

    fn with_powers(mut self) -> TopologicalSolution {
        let degree = self.v.degree();
        let nvars = self.v.nvars();
        let mut powers = vec![TSeries::constant(nvars, degree, crate::algebra::ParamPoly::int(1))];
        // v has no constant term, so powers beyond the degree vanish.
        for k in 1..=(degree as usize + 1) {
            let next = powers[k - 1].mul(&self.v);
            powers.push(next);
        }
        self.powers = powers;
        self
    }

    pub fn v(&self) -> &TSeries {
        &self.v
    }

    pub fn nvars(&self) -> usize {
        self.v.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.v.degree()
    }

    /// `v^k` (zero once `k` exceeds the truncation degree).
    pub fn v_pow(&self, k: usize) -> TSeries {
        self.powers.get(k).cloned().unwrap_or_else(|| TSeries::zero(self.nvars(), self.degree()))
    }

    /// Residual `Σ_m t̃_m v^m/m!` of the Euler–Lagrange equation.
    pub fn residual(&self) -> TSeries {
        let (n, d) = (self.nvars(), self.degree());
        let mut out = TSeries::zero(n, d);
        for m in 0..n {
            let tm = TSeries::shifted_var(n, d, m);
            out = out.add(&tm.mul(&self.v_pow(m)).scale(&Rational::factorial(m as u32).recip()));
        }
        out
    }

    /// `Ω^{[0]}_{p;q}` evaluated on the solution.
    pub fn omega(&self, p: usize, q: usize) -> TSeries {
        let c = omega0(p, q).terms()[0].1.clone();
        self.v_pow(p + q + 1).scale(&c)
    }

    /// `∂F_0/∂t_m = Σ_q t̃_q Ω^{[0]}_{m;q}(v)`.
    pub fn df0(&self, m: usize) -> TSeries {
        let (n, d) = (self.nvars(), self.degree());
        let mut out = TSeries::zero(n, d);
        for q in 0..n {
            let tq = TSeries::shifted_var(n, d, q);
            out = out.add(&tq.mul(&self.omega(m, q)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_jet_function;

    #[test]
    fn theta_and_flows() {
        assert_eq!(theta(0), DiffPoly::jet(0));
        assert_eq!(theta(3).partial(0), theta(2));
        assert_eq!(JetFunction::poly(flow0(2)), parse_jet_function("v^2*v1/2").unwrap());
        assert_eq!(omega0(2, 3), omega0(3, 2));
        assert_eq!(JetFunction::poly(omega0(2, 3)), parse_jet_function("v^6/72").unwrap());
    }

    #[test]
    fn f1_second_derivative() {
        let d = f1().dx(10).unwrap().dx(10).unwrap();
        assert_eq!(d, parse_jet_function("v3/(24*v1) - v2^2/(24*v1^2)").unwrap());
    }

    #[test]
    fn topological_solution_solves_euler_lagrange() {
        let sol = TopologicalSolution::new(4, 6);
        assert!(sol.residual().is_zero());
    }
}
