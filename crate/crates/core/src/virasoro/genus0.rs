//! Genus-0 constraint: the `ε^{-2}` part of `L(e^{ε^{-2}F_0})` must vanish.

use super::operator::OperatorSpec;
use crate::frobenius1d::{TSeries, TopologicalSolution};

/// Outcome of [`check_genus0`]; `residual` is zero iff the check passes.
#[derive(Clone, Debug)]
pub struct Genus0Check {
    pub residual: TSeries,
}

impl Genus0Check {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Evaluates `Σ a ∂_iF_0 ∂_jF_0 + Σ b t̃_k ∂_lF_0 + Σ c t̃_k t̃_l` on the
/// topological solution in `t_0, ..., t_{nvars-1}` through total degree `degree`.
pub fn check_genus0(op: &OperatorSpec, nvars: usize, degree: u32) -> Genus0Check {
    let sol = TopologicalSolution::new(nvars, degree);
    check_on(op, &sol)
}

pub fn check_on(op: &OperatorSpec, sol: &TopologicalSolution) -> Genus0Check {
    let (n, d) = (sol.nvars(), sol.degree());
    let mut residual = TSeries::zero(n, d);
    for (&(i, j), a) in &op.quad_a {
        let term = sol.df0(i as usize).mul(&sol.df0(j as usize));
        residual = residual.add(&term.scale_poly(a));
    }
    for k in 0..n as u32 {
        let tk = TSeries::shifted_var(n, d, k as usize);
        for (l, b) in op.row(k) {
            residual = residual.add(&tk.mul(&sol.df0(l as usize)).scale_poly(&b));
        }
    }
    for (&(k, l), c) in &op.quad_c {
        if k as usize >= n || l as usize >= n {
            continue;
        }
        let term = TSeries::shifted_var(n, d, k as usize).mul(&TSeries::shifted_var(n, d, l as usize));
        residual = residual.add(&term.scale_poly(c));
    }
    Genus0Check { residual }
}
