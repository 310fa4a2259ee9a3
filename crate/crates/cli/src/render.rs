//! Human-readable output for `--format text`.

use std::fmt::Write;

use vdeform::algebra::EpsSeries;
use vdeform::genus_expansion::DeformationData;
use vdeform::hierarchy::{HierarchyTable, NormalForm};
use vdeform::virasoro::OperatorSpec;

/// Rows shown for the linear part of an operator.
const LIN_ROWS: u32 = 6;

pub fn operator(op: &OperatorSpec) -> String {
    let mut out = String::new();
    for (&(i, j), a) in &op.quad_a {
        writeln!(out, "({a}) ε² ∂_{i} ∂_{j}").unwrap();
    }
    for p in 0..LIN_ROWS {
        for (q, b) in op.row(p) {
            writeln!(out, "({b}) t̃_{p} ∂_{q}").unwrap();
        }
    }
    for (&(k, l), c) in &op.quad_c {
        writeln!(out, "({c}) ε⁻² t̃_{k} t̃_{l}").unwrap();
    }
    if !op.constant.is_zero() {
        writeln!(out, "({})", op.constant).unwrap();
    }
    out
}

pub fn deformation(d: &DeformationData) -> String {
    let mut out = String::new();
    for g in 1..=d.g_max {
        let h = d.h(g).map(|h| h.to_string()).unwrap_or_else(|e| format!("<{e}>"));
        let flag = if d.truncated(g).unwrap_or(false) { "  [truncated]" } else { "" };
        writeln!(out, "H_{g} = {h}{flag}").unwrap();
    }
    writeln!(out, "key {}", d.provenance.key).unwrap();
    out
}

fn series(name: &str, s: &EpsSeries, out: &mut String) {
    for (g, c) in s.coeffs().iter().enumerate() {
        if !c.is_zero() {
            writeln!(out, "{name} [ε^{}] = {c}", 2 * g).unwrap();
        }
    }
}

pub fn hierarchy(t: &HierarchyTable) -> String {
    let mut out = String::new();
    for (&(p, q), s) in t.entries() {
        series(&format!("Ω_{{{p};{q}}}"), s, &mut out);
    }
    out
}

pub fn normal_form(nf: &NormalForm) -> String {
    let mut out = String::new();
    writeln!(out, "ε² rescaling {}", nf.rescale).unwrap();
    for (i, a) in nf.a.iter().enumerate() {
        writeln!(out, "a_{i} = {a}").unwrap();
    }
    for (i, b) in nf.b.iter().enumerate() {
        writeln!(out, "b_{} = {b}", i + 1).unwrap();
    }
    for (k, a) in nf.densities.iter().enumerate() {
        writeln!(out, "A_{k} = {a}").unwrap();
    }
    out
}
