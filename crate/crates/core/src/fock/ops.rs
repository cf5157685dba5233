//! Creation, annihilation and neutral operators in the occupation basis, and
//! the field operators built from them.

use crate::error::{Error, Result};

use super::basis::{ModeBasis, OneParticleOperator, OneParticleVector};
use super::state::FockVector;

/// `a⁺(f)`: raising mode `m` multiplies by `f_m √(ν_m + 1)`.
pub fn create(f: &OneParticleVector, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero(v.truncation());
    if v.truncation_loss() {
        out.mark_loss();
    }
    for (occ, amp) in v.iter() {
        for (m, &fm) in f.coeffs().iter().enumerate() {
            if fm != 0.0 {
                let factor = ((occ.count(m) + 1) as f64).sqrt();
                out.add_amplitude(occ.raised(m), amp * fm * factor);
            }
        }
    }
    out.prune();
    out
}

/// `a⁻(f)`, the adjoint of [`create`]: lowering mode `m` multiplies by `f_m √ν_m`.
pub fn annihilate(f: &OneParticleVector, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero(v.truncation());
    if v.truncation_loss() {
        out.mark_loss();
    }
    for (occ, amp) in v.iter() {
        for (m, count) in occ.entries() {
            let fm = f.coeffs()[m];
            if fm != 0.0 {
                let lowered = occ.lowered(m).expect("occupied mode");
                out.add_amplitude(lowered, amp * fm * (count as f64).sqrt());
            }
        }
    }
    out.prune();
    out
}

/// `a⁰(B) = dΓ(B)`: `B` acts on every particle in turn.
pub fn neutral(b: &OneParticleOperator, v: &FockVector) -> Result<FockVector> {
    let mut out = FockVector::zero(v.truncation());
    if v.truncation_loss() {
        out.mark_loss();
    }
    for (occ, amp) in v.iter() {
        for (m, count) in occ.entries() {
            let (cell, degree) = b.cell_of(m);
            b.check_exact(cell, degree)?;
            let block = b.block(cell);
            let lowered = occ.lowered(m).expect("occupied mode");
            let base = amp * (count as f64).sqrt();
            for row in 0..block.nrows() {
                let x = block[(row, degree)];
                if x == 0.0 {
                    continue;
                }
                let target = b.offset(cell) + row;
                let factor = ((lowered.count(target) + 1) as f64).sqrt();
                out.add_amplitude(lowered.raised(target), base * x * factor);
            }
        }
    }
    out.prune();
    Ok(out)
}

/// An operator of the form `a⁺(f) + a⁻(f) + a⁰(B)`.
#[derive(Debug, Clone)]
pub struct FieldOperator {
    ladder: OneParticleVector,
    neutral: OneParticleOperator,
}

impl FieldOperator {
    pub fn new(ladder: OneParticleVector, neutral: OneParticleOperator) -> Self {
        Self { ladder, neutral }
    }

    /// `A(φ) = a⁺(φ⊗m₀) + a⁻(φ⊗m₀) + a⁰(φ⊗m₁)`.
    pub fn field(basis: &ModeBasis, phi: &[f64]) -> Result<Self> {
        Self::power(basis, phi, 1)
    }

    /// `A⁽ᵏ⁾(φ) = a⁺(φ⊗m_{k−1}) + a⁻(φ⊗m_{k−1}) + a⁰(φ⊗m_k)`.
    ///
    /// # Panics
    /// If `k == 0`.
    pub fn power(basis: &ModeBasis, phi: &[f64], k: usize) -> Result<Self> {
        assert!(k >= 1, "A^(k) is defined for k >= 1");
        Ok(Self {
            ladder: basis.embed_kernel(phi, k - 1)?,
            neutral: basis.kernel_operator(phi, k)?,
        })
    }

    /// `R⁽ᵏ⁾(φ) = a⁺(φq⁽ᵏ⁾) + a⁻(φq⁽ᵏ⁾) + a⁰(φ s q⁽ᵏ⁾)`.
    pub fn orthogonalized(basis: &ModeBasis, phi: &[f64], k: usize) -> Result<Self> {
        let mut polys = Vec::with_capacity(basis.cells());
        for cell in 0..basis.cells() {
            let table = basis.table(cell);
            if table.is_degenerate(k) || phi.get(cell) == Some(&0.0) {
                polys.push(Vec::new());
                continue;
            }
            let mut shifted = vec![0.0];
            shifted.extend(table.monomial_coefficients(k)?);
            polys.push(shifted);
        }
        Ok(Self {
            ladder: basis.embed_orthogonal(phi, k)?,
            neutral: basis.multiplication_operator(phi, &polys)?,
        })
    }

    pub fn ladder(&self) -> &OneParticleVector {
        &self.ladder
    }

    pub fn neutral_part(&self) -> &OneParticleOperator {
        &self.neutral
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        let mut out = neutral(&self.neutral, v)?;
        out.add_scaled(&create(&self.ladder, v), 1.0);
        out.add_scaled(&annihilate(&self.ladder, v), 1.0);
        Ok(out)
    }
}

/// Which field operator to build for [`vacuum_moment`].
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    /// `A(φ)`
    Field(Vec<f64>),
    /// `A⁽ᵏ⁾(φ)`
    Power(Vec<f64>, usize),
    /// `R⁽ᵏ⁾(φ)`
    Orthogonalized(Vec<f64>, usize),
}

impl OperatorSpec {
    pub fn build(&self, basis: &ModeBasis) -> Result<FieldOperator> {
        match self {
            Self::Field(phi) => FieldOperator::field(basis, phi),
            Self::Power(phi, k) => FieldOperator::power(basis, phi, *k),
            Self::Orthogonalized(phi, k) => FieldOperator::orthogonalized(basis, phi, *k),
        }
    }
}

pub fn apply_a(basis: &ModeBasis, phi: &[f64], v: &FockVector) -> Result<FockVector> {
    FieldOperator::field(basis, phi)?.apply(v)
}

pub fn apply_a_k(basis: &ModeBasis, phi: &[f64], k: usize, v: &FockVector) -> Result<FockVector> {
    FieldOperator::power(basis, phi, k)?.apply(v)
}

pub fn apply_r_k(basis: &ModeBasis, phi: &[f64], k: usize, v: &FockVector) -> Result<FockVector> {
    FieldOperator::orthogonalized(basis, phi, k)?.apply(v)
}

/// `⟨Ω, Op₁ ⋯ Opₙ Ω⟩` with a particle cut of `truncation`.
pub fn vacuum_moment_of(ops: &[FieldOperator], truncation: usize) -> Result<f64> {
    if ops.len() > truncation {
        return Err(Error::ParticleCutExceeded { ops: ops.len(), cut: truncation });
    }
    let mut state = FockVector::vacuum(truncation);
    for op in ops.iter().rev() {
        state = op.apply(&state)?;
    }
    Ok(state.inner(&FockVector::vacuum(truncation)))
}

pub fn vacuum_moment(basis: &ModeBasis, truncation: usize, specs: &[OperatorSpec]) -> Result<f64> {
    let ops = specs
        .iter()
        .map(|s| s.build(basis))
        .collect::<Result<Vec<_>>>()?;
    vacuum_moment_of(&ops, truncation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::state::{symmetric_product_amplitude, Occupation};
    use crate::fock::sym::sym_project_dense;
    use crate::lattice::Lattice;
    use crate::measure::{MeasureField, SpectralMeasure};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mixed_field() -> MeasureField {
        MeasureField::new(
            Lattice::intervals(&[0.5, 1.0, 2.0]).unwrap(),
            vec![
                SpectralMeasure::discrete(0.5, vec![(-1.0, 0.25), (1.0, 0.25)]).unwrap(),
                SpectralMeasure::dirac(1.0),
                SpectralMeasure::discrete(0.1, vec![(-2.0, 0.3), (0.5, 0.4), (1.5, 0.2)]).unwrap(),
            ],
        )
        .unwrap()
    }

    /// Every cell is closed at this cut, so all operators are exact.
    fn closed_basis() -> ModeBasis {
        ModeBasis::new(&mixed_field(), 3).unwrap()
    }

    fn random_state(basis: &ModeBasis, max_particles: usize, truncation: usize, rng: &mut ChaCha8Rng) -> FockVector {
        let mut v = FockVector::zero(truncation);
        for _ in 0..6 {
            let n = rng.random_range(0..=max_particles);
            let occ = Occupation::from_counts((0..n).map(|_| (rng.random_range(0..basis.len()), 1)).fold(
                Vec::<(usize, usize)>::new(),
                |mut acc, (m, _)| {
                    match acc.iter_mut().find(|e| e.0 == m) {
                        Some(e) => e.1 += 1,
                        None => acc.push((m, 1)),
                    }
                    acc
                },
            ));
            v.add_amplitude(occ, rng.random_range(-1.0..1.0));
        }
        v
    }

    fn random_phi(cells: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..cells).map(|_| rng.random_range(-1.5..1.5)).collect()
    }

    fn double_factorial(n: i64) -> f64 {
        (1..=n).rev().step_by(2).map(|k| k as f64).product()
    }

    proptest! {
        #[test]
        fn field_operators_are_symmetric(seed in any::<u64>(), k in 1usize..=3) {
            let basis = closed_basis();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 4;
            let u = random_state(&basis, n, n, &mut rng);
            let v = random_state(&basis, n, n, &mut rng);
            let phi = random_phi(basis.cells(), &mut rng);
            let ops = [
                FieldOperator::field(&basis, &phi).unwrap(),
                FieldOperator::power(&basis, &phi, k).unwrap(),
                FieldOperator::orthogonalized(&basis, &phi, k).unwrap(),
            ];
            for op in &ops {
                let lhs = u.inner(&op.apply(&v).unwrap());
                let rhs = op.apply(&u).unwrap().inner(&v);
                let scale = 1.0 + lhs.abs().max(rhs.abs());
                prop_assert!((lhs - rhs).abs() <= 1e-11 * scale, "{} vs {}", lhs, rhs);
            }
        }

        #[test]
        fn canonical_commutator(seed in any::<u64>()) {
            let basis = closed_basis();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 4;
            // strictly below the particle cut, so a⁺ never truncates
            let v = random_state(&basis, n - 1, n, &mut rng);
            let f = OneParticleVector::from_coeffs((0..basis.len()).map(|_| rng.random_range(-1.0..1.0)).collect());
            let g = OneParticleVector::from_coeffs((0..basis.len()).map(|_| rng.random_range(-1.0..1.0)).collect());
            let mut lhs = annihilate(&f, &create(&g, &v));
            lhs.add_scaled(&create(&g, &annihilate(&f, &v)), -1.0);
            lhs.add_scaled(&v, -f.dot(&g));
            prop_assert!(lhs.norm_sq().sqrt() <= 1e-12 * (1.0 + v.norm_sq().sqrt()));
        }

        #[test]
        fn number_operator_counts_particles(seed in any::<u64>()) {
            let basis = closed_basis();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = random_state(&basis, 4, 4, &mut rng);
            let nv = neutral(&basis.identity_operator(), &v).unwrap();
            for (occ, amp) in v.iter() {
                prop_assert!((nv.amplitude(occ) - occ.particles() as f64 * amp).abs() <= 1e-12);
            }
            prop_assert_eq!(nv.len(), v.iter().filter(|(o, _)| o.particles() > 0).count());
        }

        #[test]
        fn dense_symmetrization_matches_creation(seed in any::<u64>(), n in 1usize..=4) {
            let basis = closed_basis();
            let dim = 6;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let factors: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let dense = sym_project_dense(&factors).unwrap();
            let mut v = FockVector::vacuum(n);
            for f in &factors {
                let mut padded = f.clone();
                padded.resize(basis.len(), 0.0);
                v = create(&OneParticleVector::from_coeffs(padded), &v);
            }
            let nfact: f64 = (1..=n).map(|k| k as f64).product();
            let lhs = nfact * dense.norm_sq();
            prop_assert!((lhs - v.norm_sq()).abs() <= 1e-11 * lhs.max(1e-300), "{} vs {}", lhs, v.norm_sq());
        }
    }

    #[test]
    fn occupation_amplitude_of_repeated_creation() {
        let basis = closed_basis();
        let mut e0 = vec![0.0; basis.len()];
        e0[0] = 1.0;
        let mut e1 = vec![0.0; basis.len()];
        e1[1] = 1.0;
        let (e0, e1) = (OneParticleVector::from_coeffs(e0), OneParticleVector::from_coeffs(e1));
        let v = create(&e1, &create(&e0, &create(&e0, &FockVector::vacuum(3))));
        let occ = Occupation::from_counts([(0, 2), (1, 1)]);
        assert_eq!(v.len(), 1);
        assert_relative_eq!(v.amplitude(&occ), symmetric_product_amplitude(&occ), epsilon = 1e-15);
        assert_relative_eq!(v.norm_sq(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn gaussian_vacuum_moments() {
        let field = MeasureField::homogeneous(Lattice::intervals(&[0.5, 1.0, 1.5]).unwrap(), SpectralMeasure::dirac(0.0));
        let basis = ModeBasis::new(&field, 2).unwrap();
        let phi = vec![0.7, -1.2, 0.4];
        let norm_sq = field.lattice().l2_inner(&phi, &phi);
        for n in 1..=6usize {
            let specs = vec![OperatorSpec::Field(phi.clone()); n];
            let got = vacuum_moment(&basis, n, &specs).unwrap();
            if n % 2 == 1 {
                assert_eq!(got, 0.0);
            } else {
                let m = (n / 2) as i32;
                let expect = double_factorial(n as i64 - 1) * norm_sq.powi(m);
                assert_relative_eq!(got, expect, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn poisson_vacuum_moments() {
        // σ = δ₁, |Δ| = 1: the pairing is N − 1 with N ~ Poisson(1);
        // centered Poisson moments are 0, 1, 1, 4.
        let field = MeasureField::homogeneous(Lattice::unit_intervals(1).unwrap(), SpectralMeasure::dirac(1.0));
        let basis = ModeBasis::new(&field, 1).unwrap();
        for (n, expect) in [(1, 0.0), (2, 1.0), (3, 1.0), (4, 4.0)] {
            let specs = vec![OperatorSpec::Field(vec![1.0]); n];
            assert_relative_eq!(vacuum_moment(&basis, n, &specs).unwrap(), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn orthogonalized_fields_are_orthogonal_on_vacuum() {
        let basis = closed_basis();
        let phi = vec![1.0, -0.5, 2.0];
        let vols = basis.volumes().to_vec();
        for k in 0..3 {
            for l in 0..3 {
                let specs = [OperatorSpec::Orthogonalized(phi.clone(), k), OperatorSpec::Orthogonalized(phi.clone(), l)];
                let got = vacuum_moment(&basis, 2, &specs).unwrap();
                let expect: f64 = if k == l {
                    (0..3).map(|c| phi[c] * phi[c] * vols[c] * basis.table(c).gamma_at(k).unwrap_or(0.0)).sum()
                } else {
                    0.0
                };
                assert!((got - expect).abs() < 1e-12, "k={k} l={l}: {got} vs {expect}");
            }
        }
    }

    #[test]
    fn power_second_moments_are_kernel_inner_products() {
        // ⟨Ω, A⁽ᵏ⁾A⁽ˡ⁾Ω⟩ = ⟨φ⊗m_{k−1}, φ⊗m_{l−1}⟩ = Σ φ²|Δ| ∫ s^{k+l−2} dσ
        let field = mixed_field();
        let basis = closed_basis();
        let phi = vec![0.3, 1.0, -0.8];
        for k in 1..=3 {
            for l in 1..=3 {
                let specs = [OperatorSpec::Power(phi.clone(), k), OperatorSpec::Power(phi.clone(), l)];
                let got = vacuum_moment(&basis, 2, &specs).unwrap();
                let expect: f64 = (0..3)
                    .map(|c| phi[c] * phi[c] * field.lattice().volume(c) * field.measure(c).moment(k + l - 2).unwrap())
                    .sum();
                assert_relative_eq!(got, expect, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn truncation_errors() {
        let basis = ModeBasis::new(&mixed_field(), 1).unwrap();
        let specs = vec![OperatorSpec::Field(vec![1.0; 3]); 3];
        assert_eq!(
            vacuum_moment(&basis, 2, &specs),
            Err(Error::ParticleCutExceeded { ops: 3, cut: 2 })
        );
        // cell 2 has four atoms, so degree 1 is open at K = 1 and A(φ)³ needs m₁ on q⁽¹⁾
        assert!(matches!(vacuum_moment(&basis, 3, &specs), Err(Error::TruncationOverflow { .. })));
    }
}
