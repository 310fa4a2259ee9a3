//! Exact symbolic engine for Virasoro-like deformations of the Riemann–Hopf
//! hierarchy.

pub mod algebra;
pub mod error;
pub mod frobenius1d;
pub mod genus_expansion;
pub mod hierarchy;
pub mod verify;
pub mod virasoro;

pub use error::{Error, Result};
