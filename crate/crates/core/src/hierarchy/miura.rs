//! Jet-space changes of variable `w ↦ w + Φ(w)` with `Φ = O(ε²)`, their
//! inverses, and the quasi-Miura map of a deformation.

use crate::algebra::{substitute_series, EpsSeries, JetFunction, MAX_JET};
use crate::error::{Error, Result};
use crate::genus_expansion::DeformationData;

/// `w = v + Σ_g ε^{2g} ∂_x² H_g(v)` and its inverse `v = w + Ψ(w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiMiura {
    /// `w` as a series in `v`-jets.
    pub forward: EpsSeries,
    /// `v` as a series in `w`-jets.
    pub inverse: EpsSeries,
    pub g_max: usize,
}

/// Default jet cutoff for computations through genus `g_max`.
pub fn default_cutoff(g_max: usize) -> usize {
    (3 * g_max + 4).min(MAX_JET)
}

impl QuasiMiura {
    /// Builds the map from `[H_1, ..., H_G]`.
    pub fn from_free_energies(h: &[JetFunction], cutoff: usize) -> Result<QuasiMiura> {
        let g_max = h.len();
        let mut phi = EpsSeries::zero(g_max);
        for (i, hg) in h.iter().enumerate() {
            phi.set(i + 1, hg.dx(cutoff)?.dx(cutoff)?);
        }
        let inverse = invert(&phi, cutoff)?;
        let mut forward = phi;
        forward.set(0, JetFunction::jet(0));
        Ok(QuasiMiura { forward, inverse, g_max })
    }

    /// `forward(inverse(w)) - w`, zero when the inversion is exact.
    pub fn round_trip_residual(&self, cutoff: usize) -> Result<EpsSeries> {
        let composed = substitute_series(&self.forward, &self.inverse, self.g_max, cutoff)?;
        Ok(composed.sub(&EpsSeries::genus0(JetFunction::jet(0), self.g_max)))
    }
}

/// Quasi-Miura map of the symbolic-`s` free energies of a deformation.
pub fn quasi_miura(def: &DeformationData) -> Result<QuasiMiura> {
    let h: Vec<JetFunction> = (1..=def.g_max).map(|g| def.h(g)).collect::<Result<_>>()?;
    QuasiMiura::from_free_energies(&h, default_cutoff(def.g_max))
}

/// Given `Φ` with zero genus-0 part, returns `w + Ψ(w)` such that
/// `u = w + Ψ(w)` solves `u + Φ(u) = w` through the order of `Φ`.
pub fn invert(phi: &EpsSeries, cutoff: usize) -> Result<EpsSeries> {
    let g_max = phi.g_max();
    if !phi.get(0).is_zero() {
        return Err(Error::Singular("map perturbation has a genus-0 part".into()));
    }
    let identity = EpsSeries::genus0(JetFunction::jet(0), g_max);
    let mut image = identity.clone();
    // Each pass fixes one more order of Ψ = -Φ(w + Ψ).
    for _ in 0..g_max {
        let psi = substitute_series(phi, &image, g_max, cutoff)?.neg();
        image = identity.add(&psi);
    }
    let residual = image.add(&substitute_series(phi, &image, g_max, cutoff)?).sub(&identity);
    if !residual.is_zero() {
        return Err(Error::Invariant(format!("series inversion left residual {residual}")));
    }
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_jet_function;

    #[test]
    fn zero_map_is_identity() {
        let q = QuasiMiura::from_free_energies(&[JetFunction::zero(), JetFunction::zero()], 10).unwrap();
        assert_eq!(q.inverse, EpsSeries::genus0(JetFunction::jet(0), 2));
        assert_eq!(q.forward, q.inverse);
    }

    #[test]
    fn first_order_inverse() {
        let h1 = parse_jet_function("log(v1)/24 + v^3").unwrap();
        let q = QuasiMiura::from_free_energies(&[h1.clone(), JetFunction::zero()], 12).unwrap();
        assert_eq!(q.inverse.get(1), &h1.dx(12).unwrap().dx(12).unwrap().neg());
        assert!(q.round_trip_residual(12).unwrap().is_zero());
    }
}
