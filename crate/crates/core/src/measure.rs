//! Spectral measures `σ(x, ds)` and piecewise-constant measure fields.
//!
//! The atom of `σ` at `s = 0` carries the Gaussian part of the noise; the
//! off-zero mass rescaled by `1/s²` is the Lévy (jump) measure.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::lattice::Lattice;

const MASS_TOL: f64 = 1e-12;
const HANKEL_TOL: f64 = 1e-10;

/// A probability measure on `ℝ`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralMeasure {
    /// `zero_weight·δ₀ + Σ wᵣ δ_{sᵣ}` with every `sᵣ ≠ 0`.
    Discrete { zero_weight: f64, atoms: Vec<(f64, f64)> },
    /// Known only through its power moments `m₀ = 1, m₁, …`.
    MomentSequence { moments: Vec<f64> },
}

impl SpectralMeasure {
    /// Validated discrete measure. `atoms` are `(location, weight)` pairs.
    pub fn discrete(zero_weight: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        if !(0.0..=1.0).contains(&zero_weight) {
            return Err(Error::InvalidMeasure(format!(
                "zero_weight {zero_weight} outside [0, 1]"
            )));
        }
        for (i, &(s, w)) in atoms.iter().enumerate() {
            if !s.is_finite() || s == 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "atom {i} has location {s}; off-zero atoms must be finite and nonzero"
                )));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidMeasure(format!("atom {i} has non-positive weight {w}")));
            }
            if atoms[..i].iter().any(|&(t, _)| t == s) {
                return Err(Error::InvalidMeasure(format!("atom location {s} repeated")));
            }
        }
        let mass = zero_weight + atoms.iter().map(|a| a.1).sum::<f64>();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("total mass {mass} differs from 1")));
        }
        Ok(Self::Discrete { zero_weight, atoms })
    }

    /// `δ_s`; `s = 0` gives the Gaussian white-noise measure.
    pub fn dirac(s: f64) -> Self {
        if s == 0.0 {
            Self::Discrete { zero_weight: 1.0, atoms: vec![] }
        } else {
            Self::Discrete { zero_weight: 0.0, atoms: vec![(s, 1.0)] }
        }
    }

    /// Validated moment sequence; the Hankel matrix `(m_{i+j})` must be
    /// positive semidefinite.
    pub fn from_moments(moments: Vec<f64>) -> Result<Self> {
        if moments.is_empty() {
            return Err(Error::InvalidMeasure("empty moment sequence".into()));
        }
        if let Some(m) = moments.iter().find(|m| !m.is_finite()) {
            return Err(Error::InvalidMeasure(format!("non-finite moment {m}")));
        }
        if (moments[0] - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("m0 = {} differs from 1", moments[0])));
        }
        let size = (moments.len() - 1) / 2 + 1;
        let hankel = DMatrix::from_fn(size, size, |i, j| moments[i + j]);
        let eig = SymmetricEigen::new(hankel).eigenvalues;
        let norm = eig.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -HANKEL_TOL * norm {
            return Err(Error::InvalidMeasure(format!(
                "Hankel matrix has eigenvalue {min:e} (norm {norm:e}); not a moment sequence"
            )));
        }
        Ok(Self::MomentSequence { moments })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Discrete { .. } => "discrete",
            Self::MomentSequence { .. } => "moment-sequence",
        }
    }

    /// Support points with their weights, the zero atom first when present.
    /// `None` for moment sequences.
    pub fn support(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            Self::Discrete { zero_weight, atoms } => {
                let mut pts = Vec::with_capacity(atoms.len() + 1);
                if *zero_weight > 0.0 {
                    pts.push((0.0, *zero_weight));
                }
                pts.extend(atoms.iter().copied());
                Some(pts)
            }
            Self::MomentSequence { .. } => None,
        }
    }

    /// Largest moment order available; `None` means unbounded.
    pub fn max_moment_order(&self) -> Option<usize> {
        match self {
            Self::Discrete { .. } => None,
            Self::MomentSequence { moments } => Some(moments.len() - 1),
        }
    }

    /// `∫ sᵏ σ(ds)`.
    pub fn moment(&self, k: usize) -> Result<f64> {
        match self {
            Self::Discrete { zero_weight, atoms } => {
                let jumps: f64 = atoms.iter().map(|&(s, w)| w * s.powi(k as i32)).sum();
                Ok(if k == 0 { zero_weight + jumps } else { jumps })
            }
            Self::MomentSequence { moments } => {
                moments.get(k).copied().ok_or(Error::OrderExceeded {
                    requested: k,
                    available: moments.len() - 1,
                })
            }
        }
    }

    /// Smallest `C ≥ 0` with `∫|s|ⁿ σ(ds) ≤ Cⁿ n!` for `1 ≤ n ≤ n_max`.
    pub fn fit_moment_bound(&self, n_max: usize) -> Result<f64> {
        let Self::Discrete { atoms, .. } = self else {
            return Err(Error::UnsupportedKind { op: "fit_moment_bound", kind: self.kind() });
        };
        let mut best = 0.0f64;
        let mut log_fact = 0.0f64;
        for n in 1..=n_max {
            log_fact += (n as f64).ln();
            let abs_moment: f64 = atoms.iter().map(|&(s, w)| w * s.abs().powi(n as i32)).sum();
            if abs_moment > 0.0 {
                best = best.max(((abs_moment.ln() - log_fact) / n as f64).exp());
            }
        }
        Ok(best)
    }

    /// Gaussian variance density and jump sizes with their intensity
    /// densities `λᵣ = wᵣ / sᵣ²`.
    pub fn levy_decomposition(&self) -> Result<LevyDecomposition> {
        let Self::Discrete { zero_weight, atoms } = self else {
            return Err(Error::UnsupportedKind { op: "levy_decomposition", kind: self.kind() });
        };
        Ok(LevyDecomposition {
            gaussian_variance_density: *zero_weight,
            jump_atoms: atoms.iter().map(|&(s, w)| (s, w / (s * s))).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevyDecomposition {
    pub gaussian_variance_density: f64,
    /// `(jump size, intensity per unit volume)`.
    pub jump_atoms: Vec<(f64, f64)>,
}

/// One spectral measure per lattice cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureField {
    lattice: Lattice,
    cell_measures: Vec<SpectralMeasure>,
}

impl MeasureField {
    pub fn new(lattice: Lattice, cell_measures: Vec<SpectralMeasure>) -> Result<Self> {
        if cell_measures.len() != lattice.len() {
            return Err(Error::DimensionMismatch {
                expected: lattice.len(),
                actual: cell_measures.len(),
            });
        }
        Ok(Self { lattice, cell_measures })
    }

    /// The same measure in every cell.
    pub fn homogeneous(lattice: Lattice, measure: SpectralMeasure) -> Self {
        let cell_measures = vec![measure; lattice.len()];
        Self { lattice, cell_measures }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn measures(&self) -> &[SpectralMeasure] {
        &self.cell_measures
    }

    pub fn measure(&self, cell: usize) -> &SpectralMeasure {
        &self.cell_measures[cell]
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.cell_measures
            .iter()
            .all(|m| matches!(m, SpectralMeasure::Discrete { .. }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym2() -> SpectralMeasure {
        SpectralMeasure::discrete(0.0, vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap()
    }

    fn sym3() -> SpectralMeasure {
        SpectralMeasure::discrete(0.5, vec![(-1.0, 0.25), (1.0, 0.25)]).unwrap()
    }

    #[test]
    fn named_moments() {
        assert_eq!(SpectralMeasure::dirac(0.0).moment(2).unwrap(), 0.0);
        assert_eq!(sym2().moment(2).unwrap(), 1.0);
        assert_eq!(sym2().moment(3).unwrap(), 0.0);
        assert_eq!(sym3().moment(4).unwrap(), 0.5);
    }

    #[test]
    fn moment_sequence_order_exceeded() {
        let m = SpectralMeasure::from_moments(vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(m.moment(2).unwrap(), 1.0);
        assert_eq!(
            m.moment(3),
            Err(Error::OrderExceeded { requested: 3, available: 2 })
        );
    }

    #[test]
    fn moment_bound_examples() {
        assert_eq!(SpectralMeasure::dirac(0.0).fit_moment_bound(10).unwrap(), 0.0);
        assert!((sym2().fit_moment_bound(10).unwrap() - 1.0).abs() < 1e-14);
        let wide = SpectralMeasure::discrete(0.0, vec![(-2.0, 0.5), (2.0, 0.5)]).unwrap();
        assert!((wide.fit_moment_bound(10).unwrap() - 2.0).abs() < 1e-14);
        let ms = SpectralMeasure::from_moments(vec![1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(ms.fit_moment_bound(2), Err(Error::UnsupportedKind { .. })));
    }

    #[test]
    fn levy_examples() {
        let g = SpectralMeasure::dirac(0.0).levy_decomposition().unwrap();
        assert_eq!(g.gaussian_variance_density, 1.0);
        assert!(g.jump_atoms.is_empty());
        let p = SpectralMeasure::dirac(1.0).levy_decomposition().unwrap();
        assert_eq!((p.gaussian_variance_density, p.jump_atoms), (0.0, vec![(1.0, 1.0)]));
        let mixed = SpectralMeasure::discrete(0.5, vec![(2.0, 0.5)]).unwrap();
        let d = mixed.levy_decomposition().unwrap();
        assert_eq!((d.gaussian_variance_density, d.jump_atoms), (0.5, vec![(2.0, 0.125)]));
    }

    #[test]
    fn invalid_measures_rejected() {
        assert!(SpectralMeasure::discrete(0.5, vec![(1.0, 0.25)]).is_err());
        assert!(SpectralMeasure::discrete(0.0, vec![(1.0, 0.5), (1.0, 0.5)]).is_err());
        assert!(SpectralMeasure::discrete(0.5, vec![(0.0, 0.5)]).is_err());
        assert!(SpectralMeasure::discrete(1.5, vec![]).is_err());
        // m2 < m1² is impossible for a probability measure.
        assert!(SpectralMeasure::from_moments(vec![1.0, 1.0, 0.5]).is_err());
        assert!(SpectralMeasure::from_moments(vec![0.9, 0.0, 1.0]).is_err());
    }

    #[test]
    fn gaussian_moments_pass_hankel_check() {
        let m = SpectralMeasure::from_moments(vec![1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0]).unwrap();
        assert_eq!(m.max_moment_order(), Some(6));
    }

    fn random_discrete() -> impl Strategy<Value = SpectralMeasure> {
        (
            0.0f64..1.0,
            prop::collection::vec((0.1f64..3.0, 0.05f64..1.0), 1..5),
        )
            .prop_map(|(z, raw)| {
                let total: f64 = raw.iter().map(|a| a.1).sum::<f64>();
                let scale = (1.0 - z) / total;
                let mut atoms: Vec<(f64, f64)> = Vec::new();
                for (i, (s, w)) in raw.into_iter().enumerate() {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    atoms.push((sign * (s + i as f64 * 3.0), w * scale));
                }
                let mass: f64 = atoms.iter().map(|a| a.1).sum();
                SpectralMeasure::discrete((1.0 - mass).max(0.0), atoms).unwrap()
            })
    }

    fn random_symmetric() -> impl Strategy<Value = SpectralMeasure> {
        (0.0f64..1.0, prop::collection::vec((0.1f64..3.0, 0.05f64..1.0), 1..4)).prop_map(
            |(z, raw)| {
                let total: f64 = raw.iter().map(|a| 2.0 * a.1).sum::<f64>();
                let scale = (1.0 - z) / total;
                let mut atoms = Vec::new();
                for (i, (s, w)) in raw.into_iter().enumerate() {
                    let s = s + 3.0 * i as f64;
                    atoms.push((s, w * scale));
                    atoms.push((-s, w * scale));
                }
                let mass: f64 = atoms.iter().map(|a| a.1).sum();
                SpectralMeasure::discrete((1.0 - mass).max(0.0), atoms).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn unit_mass(m in random_discrete()) {
            prop_assert!((m.moment(0).unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn symmetric_measures_have_vanishing_odd_moments(m in random_symmetric(), k in 0usize..5) {
            let odd = m.moment(2 * k + 1).unwrap();
            let scale = m.moment(2 * k + 2).unwrap().max(1.0);
            prop_assert!(odd.abs() <= 1e-12 * scale);
        }

        #[test]
        fn levy_round_trip(m in random_discrete()) {
            let d = m.levy_decomposition().unwrap();
            let total = d.gaussian_variance_density
                + d.jump_atoms.iter().map(|(s, l)| l * s * s).sum::<f64>();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn moment_bound_nondecreasing(m in random_discrete(), n in 1usize..15) {
            prop_assert!(m.fit_moment_bound(n).unwrap() <= m.fit_moment_bound(n + 1).unwrap());
        }
    }
}
