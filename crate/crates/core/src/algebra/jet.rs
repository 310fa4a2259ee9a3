//! Monomials in the jet variables `w_0, w_1, ...` times parameter monomials.

use std::cmp::Ordering;
use std::fmt;

use super::param::ParamMono;

/// Number of jet slots; the highest representable jet is `w_{JET_SLOTS-1}`.
pub const JET_SLOTS: usize = 24;
pub const MAX_JET: usize = JET_SLOTS - 1;

/// `Π w_k^{e_k} · (parameter monomial)`. Only `w_1` may carry a negative
/// exponent; this is how denominators that are powers of `w_1` are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mono {
    jets: [i8; JET_SLOTS],
    params: ParamMono,
}

impl Default for Mono {
    fn default() -> Self {
        Mono::one()
    }
}

impl Mono {
    pub fn one() -> Mono {
        Mono { jets: [0; JET_SLOTS], params: ParamMono::one() }
    }

    pub fn jet(k: usize, e: i8) -> Mono {
        let mut m = Mono::one();
        m.jets[k] = e;
        m
    }

    pub fn from_parts(jets: [i8; JET_SLOTS], params: ParamMono) -> Mono {
        debug_assert!(jets.iter().enumerate().all(|(k, e)| k == 1 || *e >= 0));
        Mono { jets, params }
    }

    pub fn from_params(params: ParamMono) -> Mono {
        Mono { jets: [0; JET_SLOTS], params }
    }

    pub fn jets(&self) -> &[i8; JET_SLOTS] {
        &self.jets
    }

    pub fn params(&self) -> &ParamMono {
        &self.params
    }

    pub fn exp(&self, k: usize) -> i8 {
        self.jets[k]
    }

    pub fn set_exp(&mut self, k: usize, e: i8) {
        self.jets[k] = e;
    }

    pub fn set_params(&mut self, p: ParamMono) {
        self.params = p;
    }

    pub fn is_one(&self) -> bool {
        self.jets.iter().all(|e| *e == 0) && self.params.is_one()
    }

    pub fn jets_only(&self) -> Mono {
        Mono { jets: self.jets, params: ParamMono::one() }
    }

    /// Differential degree `Σ k e_k`.
    pub fn deg(&self) -> i32 {
        self.jets.iter().enumerate().map(|(k, e)| k as i32 * *e as i32).sum()
    }

    /// `Σ_{k≥1} (k-1) e_k`.
    pub fn obar_deg(&self) -> i32 {
        self.jets.iter().enumerate().skip(2).map(|(k, e)| (k as i32 - 1) * *e as i32).sum()
    }

    /// Highest jet index with a nonzero exponent.
    pub fn max_jet(&self) -> Option<usize> {
        self.jets.iter().rposition(|e| *e != 0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut jets = self.jets;
        for (a, b) in jets.iter_mut().zip(o.jets.iter()) {
            *a += *b;
        }
        Mono { jets, params: self.params.mul(&o.params) }
    }

    fn cmp_jets(&self, o: &Mono) -> Ordering {
        // Higher jets are more significant.
        for k in (0..JET_SLOTS).rev() {
            match self.jets[k].cmp(&o.jets[k]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.deg().cmp(&o.deg()).then_with(|| self.cmp_jets(o)).then_with(|| self.params.cmp(&o.params))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.params.is_one() {
            parts.push(self.params.to_string());
        }
        for (k, e) in self.jets.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let base = if k == 0 { "w".to_string() } else { format!("w{k}") };
            if *e == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{e}"));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradings() {
        let m = Mono::jet(2, 3).mul(&Mono::jet(1, -4));
        assert_eq!(m.deg(), 2);
        assert_eq!(m.obar_deg(), 3);
        assert_eq!(m.max_jet(), Some(2));
    }
}
