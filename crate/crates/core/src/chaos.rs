//! Chaos coefficients and the chaos map on both sides: into the Fock space
//! and into pathwise multiple stochastic integrals.
//!
//! A coefficient `f_α` is stored through one canonical representative per
//! orbit of block permutations: inside each degree block the cells are sorted,
//! and all cells of a tuple are distinct. The full symmetric function takes
//! the stored value on every tuple of the orbit, and each orbit has exactly
//! `α! = α₀!α₁!⋯` tuples.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fock::{FockVector, Mode, ModeBasis, Occupation};
use crate::mc::{Estimate, MonteCarlo};
use crate::measure::MeasureField;
use crate::sampler::{PathSample, PathSampler};

/// Occupation multi-index `α = (α₀, α₁, …)`; `αₙ` slots carry degree `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChaosIndex(Vec<usize>);

impl ChaosIndex {
    pub fn new(mut alpha: Vec<usize>) -> Self {
        while alpha.last() == Some(&0) {
            alpha.pop();
        }
        Self(alpha)
    }

    pub fn alpha(&self) -> &[usize] {
        &self.0
    }

    /// `|α|`.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// `α₀!α₁!⋯`.
    pub fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    /// Degree carried by each tuple position, blocks in order.
    pub fn block_degrees(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(n, &a)| std::iter::repeat_n(n, a))
            .collect()
    }

    fn canonicalize(&self, cells: &[usize]) -> Result<Vec<usize>> {
        if cells.len() != self.order() {
            return Err(Error::DimensionMismatch { expected: self.order(), actual: cells.len() });
        }
        let mut sorted = cells.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedCell(cells.to_vec()));
        }
        let mut canon = cells.to_vec();
        let mut start = 0;
        for &a in &self.0 {
            canon[start..start + a].sort_unstable();
            start += a;
        }
        Ok(canon)
    }
}

impl fmt::Display for ChaosIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `f_α` restricted to lattice tuples with pairwise distinct cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosCoefficient {
    index: ChaosIndex,
    values: BTreeMap<Vec<usize>, f64>,
}

impl ChaosCoefficient {
    pub fn new(index: ChaosIndex) -> Self {
        Self { index, values: BTreeMap::new() }
    }

    pub fn index(&self) -> &ChaosIndex {
        &self.index
    }

    /// Sets `f` on the orbit of `cells` (any ordering within blocks).
    pub fn insert(&mut self, cells: &[usize], value: f64) -> Result<()> {
        let canon = self.index.canonicalize(cells)?;
        self.values.insert(canon, value);
        Ok(())
    }

    pub fn get(&self, cells: &[usize]) -> f64 {
        self.index
            .canonicalize(cells)
            .ok()
            .and_then(|c| self.values.get(&c).copied())
            .unwrap_or(0.0)
    }

    /// Canonical representatives and their values.
    pub fn iter(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.values.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The symmetrized tensor product of cell indicators, e.g.
    /// `χ_{Δ₁} ⊙ χ_{Δ₂}` for `α = (2)`; its value on each full tuple is `1/α!`.
    pub fn product_of_indicators(index: ChaosIndex, cells: &[usize]) -> Result<Self> {
        let value = 1.0 / index.factorial_product();
        let mut f = Self::new(index);
        f.insert(cells, value)?;
        Ok(f)
    }

    /// Independent standard normal values on every tuple in `tuples`.
    pub fn random<R: Rng + ?Sized>(index: ChaosIndex, tuples: &[Vec<usize>], rng: &mut R) -> Result<Self> {
        let mut f = Self::new(index);
        for t in tuples {
            f.insert(t, rng.sample(StandardNormal))?;
        }
        Ok(f)
    }
}

/// Lattice, mode basis and sampler bundled for chaos computations.
#[derive(Debug, Clone)]
pub struct ChaosModel {
    field: MeasureField,
    basis: ModeBasis,
    sampler: Option<PathSampler>,
    /// `monomials[cell][k]`: coefficients of `q⁽ᵏ⁾`, for non-degenerate `k ≤ K`.
    monomials: Vec<Vec<Vec<f64>>>,
}

impl ChaosModel {
    /// Path-side operations need every cell measure to be discrete; the
    /// Fock side works for moment sequences too.
    pub fn new(field: MeasureField, degree_cut: usize) -> Result<Self> {
        let basis = ModeBasis::new(&field, degree_cut)?;
        let sampler = field.is_discrete().then(|| PathSampler::new(&field)).transpose()?;
        let monomials = (0..basis.cells())
            .map(|cell| {
                (0..basis.cell_dim(cell).min(degree_cut + 1))
                    .map(|k| basis.table(cell).monomial_coefficients(k))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { field, basis, sampler, monomials })
    }

    pub fn field(&self) -> &MeasureField {
        &self.field
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn sampler(&self) -> Result<&PathSampler> {
        self.sampler.as_ref().ok_or(Error::UnsupportedKind { op: "path functional", kind: "moments" })
    }

    pub fn cells(&self) -> usize {
        self.basis.cells()
    }

    /// Largest usable chaos degree in `cell`.
    pub fn degrees_in(&self, cell: usize) -> usize {
        self.monomials[cell].len()
    }

    fn check_slot(&self, cell: usize, degree: usize) -> Result<()> {
        if cell >= self.cells() {
            return Err(Error::CellOutOfRange { cell, cells: self.cells() });
        }
        if degree >= self.degrees_in(cell) {
            return Err(match self.basis.table(cell).support_size() {
                Some(support) if degree >= support => Error::DegenerateDegree { degree, support },
                _ => Error::TruncationOverflow { cell, degree, cut: self.basis.degree_cut() },
            });
        }
        Ok(())
    }

    fn check(&self, f: &ChaosCoefficient) -> Result<()> {
        let degrees = f.index.block_degrees();
        for (cells, _) in f.iter() {
            for (&c, &d) in cells.iter().zip(&degrees) {
                self.check_slot(c, d)?;
            }
        }
        Ok(())
    }

    /// Every canonical tuple on which a coefficient of index `α` can live:
    /// distinct cells, each able to carry its slot's degree.
    pub fn admissible_tuples(&self, index: &ChaosIndex) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        let mut used = vec![false; self.cells()];
        self.extend_tuples(index, 0, 0, 0, &mut current, &mut used, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_tuples(
        &self,
        index: &ChaosIndex,
        block: usize,
        filled: usize,
        min_cell: usize,
        current: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let alpha = index.alpha();
        if block == alpha.len() {
            out.push(current.clone());
            return;
        }
        if filled == alpha[block] {
            self.extend_tuples(index, block + 1, 0, 0, current, used, out);
            return;
        }
        for cell in min_cell..self.cells() {
            if used[cell] || block >= self.degrees_in(cell) {
                continue;
            }
            used[cell] = true;
            current.push(cell);
            self.extend_tuples(index, block, filled + 1, cell + 1, current, used, out);
            current.pop();
            used[cell] = false;
        }
    }

    fn weight(&self, cells: &[usize], degrees: &[usize]) -> f64 {
        cells.iter().zip(degrees).map(|(&c, &d)| self.basis.rho(c, d)).product()
    }

    /// `‖f‖²_𝒢 = α! Σ_{full tuples} f² ∏ ρ = (α!)² Σ_{canonical} f² ∏ ρ`.
    pub fn g_norm_sq(&self, f: &ChaosCoefficient) -> Result<f64> {
        self.g_inner(f, f)
    }

    pub fn g_inner(&self, f: &ChaosCoefficient, g: &ChaosCoefficient) -> Result<f64> {
        self.check(f)?;
        self.check(g)?;
        if f.index != g.index {
            return Ok(0.0);
        }
        let degrees = f.index.block_degrees();
        let fact = f.index.factorial_product();
        let sum: f64 = f
            .values
            .iter()
            .filter_map(|(cells, &x)| g.values.get(cells).map(|&y| x * y * self.weight(cells, &degrees)))
            .sum();
        Ok(fact * fact * sum)
    }

    /// Image of `f` in the Fock space with particle cut `truncation`: one
    /// particle per slot in mode `(cellₚ, degreeₚ)`, amplitude `α! f ∏√ρ`.
    pub fn kmap_fock(&self, f: &ChaosCoefficient, truncation: usize) -> Result<FockVector> {
        self.check(f)?;
        let order = f.index.order();
        if order > truncation {
            return Err(Error::ParticleCutExceeded { ops: order, cut: truncation });
        }
        let degrees = f.index.block_degrees();
        let fact = f.index.factorial_product();
        let mut v = FockVector::zero(truncation);
        for (cells, x) in f.iter() {
            let modes = cells.iter().zip(&degrees).map(|(&cell, &degree)| {
                let idx = self.basis.index(Mode { cell, degree }).expect("checked slot");
                (idx, 1)
            });
            let amp = fact * x * self.weight(cells, &degrees).sqrt();
            v.add_amplitude(Occupation::from_counts(modes), amp);
        }
        Ok(v)
    }

    /// `Y⁽ᵏ⁾(χ_Δ)`: the compensated pairing for `k = 0`, otherwise
    /// `Σᵣ sᵣ^{k+1} Nᵣ − |Δ| Σᵣ wᵣ sᵣ^{k−1}`.
    pub fn evaluate_y(&self, path: &PathSample, cell: usize, k: usize) -> Result<f64> {
        let sampler = self.sampler()?;
        if cell >= self.cells() {
            return Err(Error::CellOutOfRange { cell, cells: self.cells() });
        }
        Ok(y_value(sampler, path, cell, k))
    }

    /// `Z⁽ᵏ⁾(χ_Δ) = Σᵢ bᵢ⁽ᵏ⁾ Y⁽ⁱ⁾(χ_Δ)`.
    pub fn evaluate_z(&self, path: &PathSample, cell: usize, k: usize) -> Result<f64> {
        let sampler = self.sampler()?;
        self.check_slot(cell, k)?;
        Ok(self.z_value(sampler, path, cell, k))
    }

    fn z_value(&self, sampler: &PathSampler, path: &PathSample, cell: usize, k: usize) -> f64 {
        self.monomials[cell][k]
            .iter()
            .enumerate()
            .map(|(i, &b)| b * y_value(sampler, path, cell, i))
            .sum()
    }

    /// `Z⁽ⁿ⁾(χ_Δⱼ)` for every cell and every usable degree `n ≤ max_degree`.
    fn z_table(&self, sampler: &PathSampler, path: &PathSample, max_degree: usize) -> Vec<Vec<f64>> {
        (0..self.cells())
            .map(|cell| {
                (0..self.degrees_in(cell).min(max_degree + 1))
                    .map(|k| self.z_value(sampler, path, cell, k))
                    .collect()
            })
            .collect()
    }

    /// `∫ f dZ^{⊗α} = α! Σ_{canonical} f ∏ₚ Z^{(degₚ)}(Δ_{cₚ})`.
    pub fn evaluate_multiple_integral(&self, path: &PathSample, f: &ChaosCoefficient) -> Result<f64> {
        let sampler = self.sampler()?;
        self.check(f)?;
        let table = self.z_table(sampler, path, f.index.max_degree().unwrap_or(0));
        Ok(multiple_integral(&table, f))
    }

    /// Sample covariance of `∫f dZ` and `∫g dZ`, with the standard error of
    /// the per-sample product.
    pub fn mc_verify(&self, f: &ChaosCoefficient, g: &ChaosCoefficient, samples: u64, seed: u64) -> Result<Estimate> {
        let gram = self.mc_gram(&[f.clone(), g.clone()], &MonteCarlo::new(samples, seed))?;
        Ok(gram.covariances[0][1])
    }

    /// Means of `∫fᵢ dZ` and all pairwise covariances in one Monte Carlo pass.
    pub fn mc_gram(&self, fs: &[ChaosCoefficient], mc: &MonteCarlo) -> Result<ChaosGram> {
        let sampler = self.sampler()?;
        for f in fs {
            self.check(f)?;
        }
        let n = fs.len();
        let max_degree = fs.iter().filter_map(|f| f.index.max_degree()).max().unwrap_or(0);
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let est = mc.estimate(sampler, n + pairs.len(), |path, out| {
            let table = self.z_table(sampler, path, max_degree);
            for (i, f) in fs.iter().enumerate() {
                out[i] = multiple_integral(&table, f);
            }
            for (p, &(i, j)) in pairs.iter().enumerate() {
                out[n + p] = out[i] * out[j];
            }
        })?;
        let means = est[..n].to_vec();
        let mut covariances = vec![vec![Estimate { mean: 0.0, stderr: 0.0 }; n]; n];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let prod = est[n + p];
            let cov = Estimate { mean: prod.mean - means[i].mean * means[j].mean, stderr: prod.stderr };
            covariances[i][j] = cov;
            covariances[j][i] = cov;
        }
        Ok(ChaosGram { means, covariances })
    }
}

/// Result of [`ChaosModel::mc_gram`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosGram {
    pub means: Vec<Estimate>,
    pub covariances: Vec<Vec<Estimate>>,
}

fn y_value(sampler: &PathSampler, path: &PathSample, cell: usize, k: usize) -> f64 {
    if k == 0 {
        return sampler.cell_pairing(path, cell);
    }
    // |Δ| w s^{k−1} = λ s^{k+1}
    sampler
        .jump_atoms(cell)
        .zip(&path.jump_counts[cell])
        .map(|((s, _, lambda), &count)| s.powi(k as i32 + 1) * (count as f64 - lambda))
        .sum()
}

fn multiple_integral(z: &[Vec<f64>], f: &ChaosCoefficient) -> f64 {
    let degrees = f.index.block_degrees();
    let sum: f64 = f
        .iter()
        .map(|(cells, x)| x * cells.iter().zip(&degrees).map(|(&c, &d)| z[c][d]).product::<f64>())
        .sum();
    f.index.factorial_product() * sum
}
