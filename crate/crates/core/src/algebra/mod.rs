//! Exact differential-polynomial and jet-function algebra in one dependent
//! variable.

pub mod calculus;
pub mod diffpoly;
pub mod jet;
pub mod jetfn;
pub mod json;
pub mod linsolve;
pub mod param;
pub mod parse;
pub mod rational;
pub mod series;
pub mod upoly;

pub use calculus::{integrate_x, substitute_jets, substitute_series, t_derivative_along, variational_derivative, Flow};
pub use diffpoly::DiffPoly;
pub use jet::{Mono, MAX_JET};
pub use jetfn::JetFunction;
pub use param::{Param, ParamMono, ParamPoly};
pub use parse::parse_jet_function;
pub use rational::Rational;
pub use series::EpsSeries;
pub use upoly::UPoly;
