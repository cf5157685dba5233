//! Finite lattices of disjoint boxes in `ℝᵈ`.

use crate::error::{Error, Result};

/// An axis-aligned box `[lower, upper)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl CellBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        Self { lower, upper }
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    /// True when the interiors of the two boxes intersect.
    pub fn overlaps(&self, other: &CellBox) -> bool {
        self.lower
            .iter()
            .zip(&self.upper)
            .zip(other.lower.iter().zip(&other.upper))
            .all(|((lo_a, hi_a), (lo_b, hi_b))| lo_a.max(*lo_b) < hi_a.min(*hi_b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    dimension: usize,
    cells: Vec<CellBox>,
    volumes: Vec<f64>,
}

impl Lattice {
    pub fn from_boxes(dimension: usize, cells: Vec<CellBox>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidLattice("dimension must be at least 1".into()));
        }
        if cells.is_empty() {
            return Err(Error::InvalidLattice("lattice has no cells".into()));
        }
        for (j, cell) in cells.iter().enumerate() {
            if cell.lower.len() != dimension || cell.upper.len() != dimension {
                return Err(Error::InvalidLattice(format!(
                    "cell {j} has corners of length {}/{}, expected {dimension}",
                    cell.lower.len(),
                    cell.upper.len()
                )));
            }
            let v = cell.volume();
            if !(v.is_finite() && v > 0.0) || cell.lower.iter().zip(&cell.upper).any(|(l, u)| u <= l) {
                return Err(Error::InvalidLattice(format!("cell {j} has non-positive volume")));
            }
        }
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                if cells[i].overlaps(&cells[j]) {
                    return Err(Error::InvalidLattice(format!("cells {i} and {j} overlap")));
                }
            }
        }
        let volumes = cells.iter().map(CellBox::volume).collect();
        Ok(Self { dimension, cells, volumes })
    }

    /// Consecutive intervals on the line starting at 0 with the given lengths.
    pub fn intervals(lengths: &[f64]) -> Result<Self> {
        let mut start = 0.0;
        let mut cells = Vec::with_capacity(lengths.len());
        for &len in lengths {
            cells.push(CellBox::new(vec![start], vec![start + len]));
            start += len;
        }
        Self::from_boxes(1, cells)
    }

    /// `m` unit intervals `[j, j+1)`.
    pub fn unit_intervals(m: usize) -> Result<Self> {
        Self::intervals(&vec![1.0; m])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[CellBox] {
        &self.cells
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn volume(&self, cell: usize) -> f64 {
        self.volumes[cell]
    }

    /// `∫ φ ψ dx` for piecewise-constant functions.
    pub fn l2_inner(&self, phi: &[f64], psi: &[f64]) -> f64 {
        self.volumes
            .iter()
            .zip(phi.iter().zip(psi))
            .map(|(v, (a, b))| v * a * b)
            .sum()
    }

    pub(crate) fn check_function(&self, phi: &[f64]) -> Result<()> {
        if phi.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), actual: phi.len() });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals_are_disjoint_and_sized() {
        let lat = Lattice::intervals(&[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(lat.volumes(), &[0.5, 1.0, 2.0]);
        assert_eq!(lat.cells()[2].lower, vec![1.5]);
    }

    #[test]
    fn overlapping_boxes_rejected() {
        let boxes = vec![
            CellBox::new(vec![0.0, 0.0], vec![1.0, 1.0]),
            CellBox::new(vec![0.5, 0.5], vec![1.5, 1.5]),
        ];
        assert!(matches!(Lattice::from_boxes(2, boxes), Err(Error::InvalidLattice(_))));
    }

    #[test]
    fn touching_boxes_accepted() {
        let boxes = vec![
            CellBox::new(vec![0.0, 0.0], vec![1.0, 1.0]),
            CellBox::new(vec![1.0, 0.0], vec![2.0, 1.0]),
        ];
        let lat = Lattice::from_boxes(2, boxes).unwrap();
        assert_eq!(lat.volumes(), &[1.0, 1.0]);
    }

    #[test]
    fn degenerate_box_rejected() {
        assert!(Lattice::intervals(&[1.0, 0.0]).is_err());
        assert!(Lattice::intervals(&[]).is_err());
    }
}
