use std::collections::BTreeMap;

/// Occupation numbers as sorted `(mode, count)` pairs with `count > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Occupation(Vec<(u32, u32)>);

impl Occupation {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    /// Builds from `(mode, count)` pairs in any order; repeated modes add up.
    pub fn from_counts(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut occ = Self::vacuum();
        for (mode, count) in pairs {
            for _ in 0..count {
                occ = occ.raised(mode);
            }
        }
        occ
    }

    pub fn particles(&self) -> usize {
        self.0.iter().map(|&(_, c)| c as usize).sum()
    }

    pub fn count(&self, mode: usize) -> usize {
        self.position(mode).map_or(0, |p| self.0[p].1 as usize)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|&(m, c)| (m as usize, c as usize))
    }

    fn position(&self, mode: usize) -> Option<usize> {
        self.0.binary_search_by_key(&(mode as u32), |&(m, _)| m).ok()
    }

    pub fn raised(&self, mode: usize) -> Self {
        let mut v = self.0.clone();
        match v.binary_search_by_key(&(mode as u32), |&(m, _)| m) {
            Ok(p) => v[p].1 += 1,
            Err(p) => v.insert(p, (mode as u32, 1)),
        }
        Self(v)
    }

    /// `None` if `mode` is empty.
    pub fn lowered(&self, mode: usize) -> Option<Self> {
        let p = self.position(mode)?;
        let mut v = self.0.clone();
        if v[p].1 == 1 {
            v.remove(p);
        } else {
            v[p].1 -= 1;
        }
        Some(Self(v))
    }

    /// `∏ νₘ!`.
    pub fn factorial_product(&self) -> f64 {
        self.0
            .iter()
            .map(|&(_, c)| (1..=c).map(f64::from).product::<f64>())
            .product()
    }
}

/// Amplitude of `e_{m₁} ⊙ ⋯ ⊙ e_{mₙ}` on the normalized occupation state
/// with the same mode counts: `√(∏ νₘ!)`.
///
/// This is the single conversion between the `n!`-weighted symmetric tensor
/// picture and the orthonormal occupation basis.
pub fn symmetric_product_amplitude(occ: &Occupation) -> f64 {
    occ.factorial_product().sqrt()
}

const PRUNE_REL: f64 = 1e-15;

/// A vector of the truncated symmetric Fock space in the orthonormal
/// occupation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    truncation: usize,
    amplitudes: BTreeMap<Occupation, f64>,
    truncation_loss: bool,
}

impl FockVector {
    pub fn zero(truncation: usize) -> Self {
        Self { truncation, amplitudes: BTreeMap::new(), truncation_loss: false }
    }

    /// The vacuum `Ω`.
    pub fn vacuum(truncation: usize) -> Self {
        Self::basis_state(truncation, Occupation::vacuum())
    }

    pub fn basis_state(truncation: usize, occ: Occupation) -> Self {
        let mut v = Self::zero(truncation);
        v.add_amplitude(occ, 1.0);
        v
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Set when an operation dropped components above the particle cut.
    pub fn truncation_loss(&self) -> bool {
        self.truncation_loss
    }

    pub(crate) fn mark_loss(&mut self) {
        self.truncation_loss = true;
    }

    pub fn amplitude(&self, occ: &Occupation) -> f64 {
        self.amplitudes.get(occ).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, f64)> {
        self.amplitudes.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Adds to the amplitude of `occ`. Components above the particle cut are
    /// dropped and flagged.
    pub fn add_amplitude(&mut self, occ: Occupation, amp: f64) {
        if amp == 0.0 {
            return;
        }
        if occ.particles() > self.truncation {
            self.truncation_loss = true;
            return;
        }
        *self.amplitudes.entry(occ).or_insert(0.0) += amp;
    }

    pub fn inner(&self, other: &Self) -> f64 {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small
            .amplitudes
            .iter()
            .map(|(k, a)| a * large.amplitude(k))
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.values().map(|a| a * a).sum()
    }

    pub fn scaled(mut self, c: f64) -> Self {
        for a in self.amplitudes.values_mut() {
            *a *= c;
        }
        self.prune();
        self
    }

    pub fn add_scaled(&mut self, other: &Self, c: f64) {
        self.truncation_loss |= other.truncation_loss;
        for (k, a) in &other.amplitudes {
            self.add_amplitude(k.clone(), c * a);
        }
        self.prune();
    }

    /// Drops amplitudes below `1e-15` of the largest one.
    pub fn prune(&mut self) {
        let max = self.amplitudes.values().fold(0.0f64, |m, a| m.max(a.abs()));
        let cut = PRUNE_REL * max;
        self.amplitudes.retain(|_, a| a.abs() > cut);
    }

    /// Keeps only the components with exactly `n` particles.
    pub fn particle_sector(&self, n: usize) -> Self {
        let mut out = Self::zero(self.truncation);
        for (k, a) in &self.amplitudes {
            if k.particles() == n {
                out.amplitudes.insert(k.clone(), *a);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occupation_raise_lower() {
        let o = Occupation::vacuum().raised(3).raised(1).raised(3);
        assert_eq!(o.entries().collect::<Vec<_>>(), vec![(1, 1), (3, 2)]);
        assert_eq!(o.particles(), 3);
        assert_eq!(o.lowered(3).unwrap().count(3), 1);
        assert_eq!(o.lowered(1).unwrap().count(1), 0);
        assert!(o.lowered(0).is_none());
        assert_eq!(o, Occupation::from_counts([(3, 2), (1, 1)]));
        assert_eq!(o.factorial_product(), 2.0);
    }

    #[test]
    fn over_cut_components_are_flagged() {
        let mut v = FockVector::zero(1);
        v.add_amplitude(Occupation::from_counts([(0, 2)]), 1.0);
        assert!(v.is_empty());
        assert!(v.truncation_loss());
    }

    #[test]
    fn prune_relative() {
        let mut v = FockVector::zero(3);
        v.add_amplitude(Occupation::vacuum(), 1.0);
        v.add_amplitude(Occupation::from_counts([(0, 1)]), 1e-17);
        v.prune();
        assert_eq!(v.len(), 1);
    }
}
