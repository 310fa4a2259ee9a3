//! Virasoro and Virasoro-like operators, their algebra, the genus-0
//! constraint and the induced jet-space derivation.

pub mod build;
pub mod dgen;
pub mod genus0;
mod json;
pub mod operator;

pub use build::{build_l, extract_like, virasoro, NuOperator};
pub use dgen::{make_d, DGenerator};
pub use genus0::{check_genus0, Genus0Check};
pub use operator::{combine, commutator, LinFamily, OperatorSpec};
