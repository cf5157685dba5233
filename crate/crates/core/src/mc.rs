//! Deterministic parallel Monte Carlo over reproducible noise paths.
//!
//! Sample indices are split into fixed chunks; each chunk is summed in index
//! order and chunk sums are merged in chunk order, so estimates are
//! bit-identical for any thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sampler::{PathSample, PathSampler};

const CHUNK: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    /// `|mean − target| ≤ k·stderr`.
    pub fn within(&self, target: f64, k_sigma: f64) -> bool {
        (self.mean - target).abs() <= k_sigma * self.stderr
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarlo {
    pub samples: u64,
    pub seed: u64,
    /// `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl MonteCarlo {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, seed, threads: None }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    /// Mean and standard error of each of the `outputs` statistics written by
    /// `f` for every sample path.
    pub fn estimate<F>(&self, sampler: &PathSampler, outputs: usize, f: F) -> Result<Vec<Estimate>>
    where
        F: Fn(&PathSample, &mut [f64]) + Sync,
    {
        if self.samples < 2 {
            return Err(Error::TooFewSamples(self.samples));
        }
        let chunks = self.samples.div_ceil(CHUNK);
        let run_chunk = |c: u64| {
            let mut sums = vec![(0.0f64, 0.0f64); outputs];
            let mut path = sampler.empty_sample();
            let mut out = vec![0.0; outputs];
            let end = ((c + 1) * CHUNK).min(self.samples);
            for index in c * CHUNK..end {
                sampler.sample_into(self.seed, index, &mut path);
                f(&path, &mut out);
                for (acc, &x) in sums.iter_mut().zip(&out) {
                    acc.0 += x;
                    acc.1 += x * x;
                }
            }
            sums
        };
        let partials: Vec<Vec<(f64, f64)>> = match self.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::ThreadPool(e.to_string()))?
                .install(|| (0..chunks).into_par_iter().map(run_chunk).collect()),
            None => (0..chunks).into_par_iter().map(run_chunk).collect(),
        };
        let mut totals = vec![(0.0f64, 0.0f64); outputs];
        for part in &partials {
            for (t, p) in totals.iter_mut().zip(part) {
                t.0 += p.0;
                t.1 += p.1;
            }
        }
        let n = self.samples as f64;
        Ok(totals
            .into_iter()
            .map(|(s, ss)| {
                let mean = s / n;
                let var = ((ss / n - mean * mean) * n / (n - 1.0)).max(0.0);
                Estimate { mean, stderr: (var / n).sqrt() }
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::measure::{MeasureField, SpectralMeasure};

    fn sampler() -> PathSampler {
        let m = SpectralMeasure::discrete(0.5, vec![(-1.0, 0.25), (1.0, 0.25)]).unwrap();
        PathSampler::new(&MeasureField::homogeneous(Lattice::unit_intervals(2).unwrap(), m)).unwrap()
    }

    #[test]
    fn too_few_samples() {
        let s = sampler();
        assert_eq!(
            MonteCarlo::new(1, 0).estimate(&s, 1, |_, o| o[0] = 0.0),
            Err(Error::TooFewSamples(1))
        );
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let s = sampler();
        let f = |p: &PathSample, o: &mut [f64]| {
            let x = s.pairing(p, &[1.0, -0.5]);
            o[0] = x;
            o[1] = x * x;
        };
        let a = MonteCarlo::new(50_000, 3).with_threads(1).estimate(&s, 2, f).unwrap();
        let b = MonteCarlo::new(50_000, 3).with_threads(4).estimate(&s, 2, f).unwrap();
        let c = MonteCarlo::new(50_000, 3).estimate(&s, 2, f).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn mean_and_variance_of_pairing() {
        let s = sampler();
        let est = MonteCarlo::new(200_000, 11)
            .estimate(&s, 2, |p, o| {
                let x = s.pairing(p, &[1.0, -0.5]);
                o[0] = x;
                o[1] = x * x;
            })
            .unwrap();
        assert!(est[0].within(0.0, 3.0), "{:?}", est[0]);
        assert!(est[1].within(1.25, 3.0), "{:?}", est[1]);
    }
}
