//! Dense tensors over a handful of modes, used as an independent check of
//! the occupation-basis arithmetic.

use itertools::Itertools;

use crate::error::{Error, Result};

const MAX_ORDER: usize = 4;
const MAX_ENTRIES: usize = 1 << 16;

/// A dense tensor in `(ℝ^dim)^{⊗order}`, row-major in the slot index.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dim: usize,
    order: usize,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(dim: usize, order: usize) -> Result<Self> {
        if order > MAX_ORDER || dim.checked_pow(order as u32).is_none_or(|n| n > MAX_ENTRIES) {
            return Err(Error::SizeExceeded { order, dim });
        }
        Ok(Self { dim, order, data: vec![0.0; dim.pow(order as u32)] })
    }

    pub fn from_data(dim: usize, order: usize, data: Vec<f64>) -> Result<Self> {
        let mut t = Self::zeros(dim, order)?;
        if data.len() != t.data.len() {
            return Err(Error::DimensionMismatch { expected: t.data.len(), actual: data.len() });
        }
        t.data = data;
        Ok(t)
    }

    /// `f₁ ⊗ ⋯ ⊗ fₙ`.
    pub fn elementary(factors: &[Vec<f64>]) -> Result<Self> {
        let dim = factors.first().map_or(0, Vec::len);
        if let Some(f) = factors.iter().find(|f| f.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, actual: f.len() });
        }
        let mut t = Self::zeros(dim, factors.len())?;
        for (flat, x) in t.data.iter_mut().enumerate() {
            let idx = unflatten(flat, dim, factors.len());
            *x = idx.iter().zip(factors).map(|(&i, f)| f[i]).product();
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.data[flatten(index, self.dim)]
    }

    /// Plain `H^{⊗n}` inner product (no `n!` weight).
    pub fn inner(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    /// `Symₙ`: average over all permutations of the tensor slots.
    pub fn symmetrize(&self) -> Self {
        let perms: Vec<Vec<usize>> = (0..self.order).permutations(self.order).collect();
        let scale = 1.0 / perms.len() as f64;
        let mut out = self.clone();
        let mut permuted = vec![0; self.order];
        for (flat, x) in out.data.iter_mut().enumerate() {
            let idx = unflatten(flat, self.dim, self.order);
            let mut acc = 0.0;
            for p in &perms {
                for (slot, &src) in p.iter().enumerate() {
                    permuted[slot] = idx[src];
                }
                acc += self.data[flatten(&permuted, self.dim)];
            }
            *x = acc * scale;
        }
        out
    }
}

/// `Symₙ(f₁ ⊗ ⋯ ⊗ fₙ) = f₁ ⊙ ⋯ ⊙ fₙ` for `n ≤ 4`.
pub fn sym_project_dense(factors: &[Vec<f64>]) -> Result<DenseTensor> {
    Ok(DenseTensor::elementary(factors)?.symmetrize())
}

fn flatten(index: &[usize], dim: usize) -> usize {
    index.iter().fold(0, |acc, &i| acc * dim + i)
}

fn unflatten(mut flat: usize, dim: usize, order: usize) -> Vec<usize> {
    let mut idx = vec![0; order];
    for slot in (0..order).rev() {
        idx[slot] = flat % dim;
        flat /= dim;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn order_two_symmetrization() {
        let f = vec![1.0, 2.0, 0.0];
        let g = vec![0.0, -1.0, 3.0];
        let s = sym_project_dense(&[f.clone(), g.clone()]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(s.get(&[i, j]), 0.5 * (f[i] * g[j] + g[i] * f[j]));
            }
        }
    }

    #[test]
    fn idempotent() {
        let t = DenseTensor::from_data(2, 3, (0..8).map(|x| x as f64 * 0.3 - 1.0).collect()).unwrap();
        let s = t.symmetrize();
        let ss = s.symmetrize();
        for (a, b) in s.data().iter().zip(ss.data()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn size_limit() {
        assert!(matches!(DenseTensor::zeros(3, 5), Err(Error::SizeExceeded { .. })));
        assert!(matches!(DenseTensor::zeros(100, 4), Err(Error::SizeExceeded { .. })));
        assert!(DenseTensor::zeros(6, 4).is_ok());
    }
}
