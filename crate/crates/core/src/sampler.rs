//! Exact simulation of the lattice noise and its characteristic functional.
//!
//! In cell `Δⱼ` the noise is a centered Gaussian with variance
//! `σⱼ({0})·|Δⱼ|` plus, for every off-zero atom `(sᵣ, wᵣ)`, a compensated
//! Poisson number of jumps of size `sᵣ` with mean `λⱼᵣ = |Δⱼ| wᵣ / sᵣ²`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::mc::MonteCarlo;
use crate::measure::{MeasureField, SpectralMeasure};

/// One realization of the noise on the lattice.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathSample {
    pub gaussian: Vec<f64>,
    /// `jump_counts[cell][atom]`.
    pub jump_counts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone)]
struct JumpAtom {
    size: f64,
    weight: f64,
    intensity: f64,
    poisson: Poisson<f64>,
}

#[derive(Debug, Clone)]
struct CellNoise {
    volume: f64,
    zero_weight: f64,
    gaussian_sd: f64,
    atoms: Vec<JumpAtom>,
}

/// Draws reproducible [`PathSample`]s: sample `i` under seed `s` always
/// comes from ChaCha8 stream `i` of key `s`, independent of thread layout.
#[derive(Debug, Clone)]
pub struct PathSampler {
    cells: Vec<CellNoise>,
}

impl PathSampler {
    pub fn new(field: &MeasureField) -> Result<Self> {
        let mut cells = Vec::with_capacity(field.len());
        for (cell, measure) in field.measures().iter().enumerate() {
            let SpectralMeasure::Discrete { zero_weight, atoms } = measure else {
                return Err(Error::UnsupportedKind { op: "sample_path", kind: measure.kind() });
            };
            let volume = field.lattice().volume(cell);
            let atoms = atoms
                .iter()
                .map(|&(size, weight)| {
                    let intensity = volume * weight / (size * size);
                    let poisson = Poisson::new(intensity).map_err(|e| {
                        Error::InvalidMeasure(format!("cell {cell}: jump intensity {intensity}: {e}"))
                    })?;
                    Ok(JumpAtom { size, weight, intensity, poisson })
                })
                .collect::<Result<Vec<_>>>()?;
            cells.push(CellNoise {
                volume,
                zero_weight: *zero_weight,
                gaussian_sd: (zero_weight * volume).sqrt(),
                atoms,
            });
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> usize {
        self.cells.len()
    }

    pub fn volume(&self, cell: usize) -> f64 {
        self.cells[cell].volume
    }

    /// `(size, weight, intensity)` of every jump atom of `cell`.
    pub fn jump_atoms(&self, cell: usize) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.cells[cell].atoms.iter().map(|a| (a.size, a.weight, a.intensity))
    }

    pub fn max_atoms(&self) -> usize {
        self.cells.iter().map(|c| c.atoms.len()).max().unwrap_or(0)
    }

    pub fn empty_sample(&self) -> PathSample {
        PathSample {
            gaussian: vec![0.0; self.cells.len()],
            jump_counts: self.cells.iter().map(|c| vec![0; c.atoms.len()]).collect(),
        }
    }

    pub fn sample_path(&self, seed: u64, index: u64) -> PathSample {
        let mut path = self.empty_sample();
        self.sample_into(seed, index, &mut path);
        path
    }

    /// Overwrites `path` with sample `index`; `path` must come from
    /// [`Self::empty_sample`].
    pub fn sample_into(&self, seed: u64, index: u64, path: &mut PathSample) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        for (j, cell) in self.cells.iter().enumerate() {
            path.gaussian[j] = if cell.gaussian_sd > 0.0 {
                let z: f64 = StandardNormal.sample(&mut rng);
                cell.gaussian_sd * z
            } else {
                0.0
            };
            for (r, atom) in cell.atoms.iter().enumerate() {
                path.jump_counts[j][r] = atom.poisson.sample(&mut rng) as u64;
            }
        }
    }

    /// `⟨ω, χ_Δ⟩`: the Gaussian value plus compensated jumps of one cell.
    pub fn cell_pairing(&self, path: &PathSample, cell: usize) -> f64 {
        let noise = &self.cells[cell];
        path.gaussian[cell]
            + noise
                .atoms
                .iter()
                .zip(&path.jump_counts[cell])
                .map(|(a, &n)| a.size * (n as f64 - a.intensity))
                .sum::<f64>()
    }

    /// `⟨ω, φ⟩ = Σⱼ φⱼ [Gⱼ + Σᵣ sᵣ (Nⱼᵣ − λⱼᵣ)]`.
    pub fn pairing(&self, path: &PathSample, phi: &[f64]) -> f64 {
        phi.iter()
            .enumerate()
            .filter(|(_, &p)| p != 0.0)
            .map(|(j, p)| p * self.cell_pairing(path, j))
            .sum()
    }

    /// `∫ e^{iθ⟨ω,φ⟩} μ(dω)` in closed form.
    pub fn char_functional(&self, phi: &[f64], theta: f64) -> Complex64 {
        let mut exponent = Complex64::new(0.0, 0.0);
        for (cell, &p) in self.cells.iter().zip(phi) {
            let t = theta * p;
            exponent -= 0.5 * t * t * cell.zero_weight * cell.volume;
            for a in &cell.atoms {
                let x = t * a.size;
                let lambda = cell.volume * a.weight / (a.size * a.size);
                exponent += lambda * (Complex64::new(0.0, x).exp() - Complex64::new(1.0, x));
            }
        }
        exponent.exp()
    }

    /// Monte Carlo estimate of the characteristic functional at each `θ`
    /// with the standard error of the complex mean.
    pub fn empirical_cf(&self, phi: &[f64], thetas: &[f64], mc: &MonteCarlo) -> Result<Vec<(Complex64, f64)>> {
        let est = mc.estimate(self, 2 * thetas.len(), |path, out| {
            let x = self.pairing(path, phi);
            for (i, &th) in thetas.iter().enumerate() {
                let (s, c) = (th * x).sin_cos();
                out[2 * i] = c;
                out[2 * i + 1] = s;
            }
        })?;
        Ok(est
            .chunks(2)
            .map(|p| {
                let z = Complex64::new(p[0].mean, p[1].mean);
                (z, p[0].stderr.hypot(p[1].stderr))
            })
            .collect())
    }
}

pub fn sample_path(field: &MeasureField, seed: u64, index: u64) -> Result<PathSample> {
    Ok(PathSampler::new(field)?.sample_path(seed, index))
}

pub fn char_functional(field: &MeasureField, phi: &[f64], theta: f64) -> Result<Complex64> {
    field.lattice().check_function(phi)?;
    Ok(PathSampler::new(field)?.char_functional(phi, theta))
}

pub fn empirical_cf(
    field: &MeasureField,
    phi: &[f64],
    theta: f64,
    n_samples: u64,
    seed: u64,
) -> Result<(Complex64, f64)> {
    field.lattice().check_function(phi)?;
    let sampler = PathSampler::new(field)?;
    let mc = MonteCarlo::new(n_samples, seed);
    Ok(sampler.empirical_cf(phi, &[theta], &mc)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use approx::assert_relative_eq;

    fn field(measure: SpectralMeasure, m: usize) -> MeasureField {
        MeasureField::homogeneous(Lattice::unit_intervals(m).unwrap(), measure)
    }

    #[test]
    fn gaussian_paths_have_no_jumps() {
        let s = PathSampler::new(&field(SpectralMeasure::dirac(0.0), 3)).unwrap();
        let p = s.sample_path(1, 2);
        assert!(p.jump_counts.iter().all(|c| c.is_empty()));
        assert!(p.gaussian.iter().all(|g| *g != 0.0));
    }

    #[test]
    fn poisson_paths_have_no_gaussian() {
        let s = PathSampler::new(&field(SpectralMeasure::dirac(1.0), 1)).unwrap();
        let (size, _, lambda) = s.jump_atoms(0).next().unwrap();
        assert_eq!((size, lambda), (1.0, 1.0));
        let p = s.sample_path(9, 0);
        assert_eq!(p.gaussian, vec![0.0]);
        assert_eq!(s.cell_pairing(&p, 0), p.jump_counts[0][0] as f64 - 1.0);
    }

    #[test]
    fn deterministic_per_index() {
        let m = SpectralMeasure::discrete(0.5, vec![(-1.0, 0.25), (2.0, 0.25)]).unwrap();
        let s = PathSampler::new(&field(m, 4)).unwrap();
        assert_eq!(s.sample_path(5, 17), s.sample_path(5, 17));
        assert_ne!(s.sample_path(5, 17), s.sample_path(5, 18));
        assert_ne!(s.sample_path(5, 17), s.sample_path(6, 17));
    }

    #[test]
    fn zero_test_function_pairs_to_zero() {
        let s = PathSampler::new(&field(SpectralMeasure::dirac(0.0), 2)).unwrap();
        let p = s.sample_path(0, 0);
        assert_eq!(s.pairing(&p, &[0.0, 0.0]), 0.0);
    }

    #[test]
    fn closed_form_examples() {
        let g = PathSampler::new(&field(SpectralMeasure::dirac(0.0), 1)).unwrap();
        for th in [-2.0, 0.3, 1.7] {
            let z = g.char_functional(&[1.0], th);
            assert_relative_eq!(z.re, (-th * th / 2.0f64).exp(), epsilon = 1e-15);
            assert_relative_eq!(z.im, 0.0);
        }
        assert_eq!(g.char_functional(&[3.0], 0.0), Complex64::new(1.0, 0.0));

        let p = PathSampler::new(&field(SpectralMeasure::dirac(1.0), 1)).unwrap();
        for th in [-1.0, 0.5, 2.5f64] {
            let expect = (Complex64::new(0.0, th).exp() - Complex64::new(1.0, th)).exp();
            let z = p.char_functional(&[1.0], th);
            assert_relative_eq!(z.re, expect.re, epsilon = 1e-15);
            assert_relative_eq!(z.im, expect.im, epsilon = 1e-15);
        }
    }

    #[test]
    fn moment_sequence_cells_rejected() {
        let ms = SpectralMeasure::from_moments(vec![1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            PathSampler::new(&field(ms, 1)),
            Err(Error::UnsupportedKind { .. })
        ));
    }
}
