use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::measure::MeasureField;
use crate::orthopoly::{recurrence_coefficients, RecurrenceTable};

const SYMMETRY_TOL: f64 = 1e-12;

/// A one-particle mode `χ_Δⱼ q⁽ⁿ⁾ / ‖χ_Δⱼ q⁽ⁿ⁾‖`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub cell: usize,
    pub degree: usize,
}

/// Orthonormal modes of the discretized one-particle space, degrees cut at `K`.
///
/// Per-cell tables are computed to order `K + 1` so that the
/// `(K+1)×(K+1)` Jacobi block is complete and the coupling `a_{K+1}` out of
/// the window is known.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    volumes: Vec<f64>,
    degree_cut: usize,
    tables: Vec<RecurrenceTable>,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    jacobi: Vec<DMatrix<f64>>,
}

impl ModeBasis {
    pub fn new(field: &MeasureField, degree_cut: usize) -> Result<Self> {
        let volumes = field.lattice().volumes().to_vec();
        let mut tables = Vec::with_capacity(field.len());
        let mut dims = Vec::with_capacity(field.len());
        let mut offsets = Vec::with_capacity(field.len() + 1);
        let mut jacobi = Vec::with_capacity(field.len());
        let mut offset = 0;
        for measure in field.measures() {
            let table = recurrence_coefficients(measure, degree_cut + 1)?;
            let dim = table
                .support_size()
                .map_or(degree_cut + 1, |m| m.min(degree_cut + 1));
            jacobi.push(table.jacobi_matrix(dim - 1)?);
            offsets.push(offset);
            offset += dim;
            dims.push(dim);
            tables.push(table);
        }
        offsets.push(offset);
        Ok(Self { volumes, degree_cut, tables, dims, offsets, jacobi })
    }

    pub fn degree_cut(&self) -> usize {
        self.degree_cut
    }

    pub fn cells(&self) -> usize {
        self.volumes.len()
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn table(&self, cell: usize) -> &RecurrenceTable {
        &self.tables[cell]
    }

    pub fn tables(&self) -> &[RecurrenceTable] {
        &self.tables
    }

    /// Total number of modes.
    pub fn len(&self) -> usize {
        self.offsets[self.cells()]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of degrees represented in `cell`.
    pub fn cell_dim(&self, cell: usize) -> usize {
        self.dims[cell]
    }

    /// The whole of `L²(σⱼ)` fits in the window (support ≤ K + 1).
    pub fn is_closed(&self, cell: usize) -> bool {
        self.tables[cell]
            .support_size()
            .is_some_and(|m| m <= self.degree_cut + 1)
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.cells()).flat_map(move |cell| (0..self.dims[cell]).map(move |degree| Mode { cell, degree }))
    }

    pub fn mode(&self, index: usize) -> Mode {
        let cell = self.offsets.partition_point(|&o| o <= index) - 1;
        Mode { cell, degree: index - self.offsets[cell] }
    }

    pub fn index(&self, mode: Mode) -> Option<usize> {
        (mode.cell < self.cells() && mode.degree < self.dims[mode.cell])
            .then(|| self.offsets[mode.cell] + mode.degree)
    }

    /// `‖χ_Δⱼ q⁽ⁿ⁾‖²_H = |Δⱼ| γₙ(j)`.
    pub fn mode_norm_sq(&self, mode: Mode) -> f64 {
        self.volumes[mode.cell] * self.tables[mode.cell].gamma_at(mode.degree).unwrap_or(0.0)
    }

    /// `ρₙ(Δⱼ)`, the weight a degree-`n` chaos slot carries in cell `j`.
    pub fn rho(&self, cell: usize, degree: usize) -> f64 {
        self.mode_norm_sq(Mode { cell, degree })
    }

    /// Largest degree `n` for which `p(J)` applied to `q⁽ⁿ⁾` with `deg p = reach`
    /// is computed exactly inside the window; `None` if no degree is.
    pub(crate) fn exact_limit(&self, cell: usize, reach: usize) -> Option<usize> {
        if self.is_closed(cell) {
            Some(self.dims[cell] - 1)
        } else {
            self.degree_cut.checked_sub(reach)
        }
    }

    fn check_function(&self, phi: &[f64]) -> Result<()> {
        if phi.len() != self.cells() {
            return Err(Error::DimensionMismatch { expected: self.cells(), actual: phi.len() });
        }
        Ok(())
    }

    fn poly_times_vector(&self, cell: usize, poly: &[f64], v: &[f64]) -> Vec<f64> {
        // Horner in the Jacobi matrix: p(J) v.
        let jac = &self.jacobi[cell];
        let mut acc = vec![0.0; v.len()];
        for &c in poly.iter().rev() {
            let mut next = vec![0.0; v.len()];
            for r in 0..v.len() {
                let mut sum = c * v[r];
                for (k, &x) in acc.iter().enumerate() {
                    sum += jac[(r, k)] * x;
                }
                next[r] = sum;
            }
            acc = next;
        }
        acc
    }

    /// One-particle vector of `φ(x) p_j(s)` where `p_j` is the per-cell
    /// polynomial (monomial coefficients, lowest first).
    pub fn embed_polynomial(&self, phi: &[f64], polys: &[Vec<f64>]) -> Result<OneParticleVector> {
        self.check_function(phi)?;
        let mut coeffs = vec![0.0; self.len()];
        for cell in 0..self.cells() {
            let poly = trim(&polys[cell]);
            if phi[cell] == 0.0 || poly.is_empty() {
                continue;
            }
            let reach = poly.len() - 1;
            if self.exact_limit(cell, reach).is_none() {
                return Err(Error::TruncationOverflow { cell, degree: reach, cut: self.degree_cut });
            }
            let mut unit = vec![0.0; self.dims[cell]];
            unit[0] = 1.0;
            let expansion = self.poly_times_vector(cell, poly, &unit);
            let scale = phi[cell] * self.volumes[cell].sqrt();
            for (n, x) in expansion.into_iter().enumerate() {
                coeffs[self.offsets[cell] + n] = scale * x;
            }
        }
        Ok(OneParticleVector { coeffs })
    }

    /// `φ ⊗ mᵢ`, i.e. `φ(x) sⁱ`, expanded in the normalized modes.
    pub fn embed_kernel(&self, phi: &[f64], i: usize) -> Result<OneParticleVector> {
        let mut mono = vec![0.0; i + 1];
        mono[i] = 1.0;
        self.embed_polynomial(phi, &vec![mono; self.cells()])
    }

    /// `φ q⁽ᵏ⁾`: a single mode per cell with coefficient `φⱼ √(|Δⱼ| γₖ(j))`.
    pub fn embed_orthogonal(&self, phi: &[f64], k: usize) -> Result<OneParticleVector> {
        self.check_function(phi)?;
        let mut coeffs = vec![0.0; self.len()];
        for (cell, &p) in phi.iter().enumerate() {
            if p == 0.0 || self.tables[cell].is_degenerate(k) {
                continue;
            }
            let idx = self.index(Mode { cell, degree: k }).ok_or(Error::TruncationOverflow {
                cell,
                degree: k,
                cut: self.degree_cut,
            })?;
            coeffs[idx] = p * self.rho(cell, k).sqrt();
        }
        Ok(OneParticleVector { coeffs })
    }

    /// Multiplication by `φ(x) p_j(s)` on the one-particle space.
    pub fn multiplication_operator(&self, phi: &[f64], polys: &[Vec<f64>]) -> Result<OneParticleOperator> {
        self.check_function(phi)?;
        let mut blocks = Vec::with_capacity(self.cells());
        let mut exact_limit = Vec::with_capacity(self.cells());
        for cell in 0..self.cells() {
            let dim = self.dims[cell];
            let poly = trim(&polys[cell]);
            if phi[cell] == 0.0 || poly.is_empty() {
                blocks.push(DMatrix::zeros(dim, dim));
                exact_limit.push(Some(dim - 1));
                continue;
            }
            let mut block = DMatrix::zeros(dim, dim);
            for col in 0..dim {
                let mut unit = vec![0.0; dim];
                unit[col] = 1.0;
                for (row, x) in self.poly_times_vector(cell, poly, &unit).into_iter().enumerate() {
                    block[(row, col)] = phi[cell] * x;
                }
            }
            blocks.push(block);
            exact_limit.push(self.exact_limit(cell, poly.len() - 1));
        }
        Ok(OneParticleOperator { offsets: self.offsets.clone(), blocks, exact_limit })
    }

    /// Multiplication by `φ(x) sⁱ`.
    pub fn kernel_operator(&self, phi: &[f64], i: usize) -> Result<OneParticleOperator> {
        let mut mono = vec![0.0; i + 1];
        mono[i] = 1.0;
        self.multiplication_operator(phi, &vec![mono; self.cells()])
    }

    /// `B = diag(φⱼ) ⊗ Iⱼ`.
    pub fn identity_operator(&self) -> OneParticleOperator {
        self.kernel_operator(&vec![1.0; self.cells()], 0)
            .expect("degree-0 multiplication always fits")
    }

    /// Block-diagonal operator from explicit per-cell matrices, exact on
    /// every mode. Blocks must be symmetric.
    pub fn operator_from_blocks(&self, blocks: Vec<DMatrix<f64>>) -> Result<OneParticleOperator> {
        if blocks.len() != self.cells() {
            return Err(Error::DimensionMismatch { expected: self.cells(), actual: blocks.len() });
        }
        let mut asym = 0.0f64;
        for (cell, b) in blocks.iter().enumerate() {
            if b.nrows() != self.dims[cell] || b.ncols() != self.dims[cell] {
                return Err(Error::DimensionMismatch { expected: self.dims[cell], actual: b.nrows() });
            }
            asym = asym.max((b - b.transpose()).amax());
        }
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        let exact_limit = self.dims.iter().map(|d| Some(d - 1)).collect();
        Ok(OneParticleOperator { offsets: self.offsets.clone(), blocks, exact_limit })
    }
}

fn trim(poly: &[f64]) -> &[f64] {
    let len = poly.iter().rposition(|&c| c != 0.0).map_or(0, |p| p + 1);
    &poly[..len]
}

/// Coefficients of a one-particle function over the normalized modes.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleVector {
    coeffs: Vec<f64>,
}

impl OneParticleVector {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `⟨f, g⟩_H`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }
}

/// A one-particle operator, block diagonal in the cell index.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleOperator {
    offsets: Vec<usize>,
    blocks: Vec<DMatrix<f64>>,
    /// Columns of degree above this limit are outside the exactness window.
    exact_limit: Vec<Option<usize>>,
}

impl OneParticleOperator {
    pub fn block(&self, cell: usize) -> &DMatrix<f64> {
        &self.blocks[cell]
    }

    pub(crate) fn cell_of(&self, index: usize) -> (usize, usize) {
        let cell = self.offsets.partition_point(|&o| o <= index) - 1;
        (cell, index - self.offsets[cell])
    }

    pub(crate) fn offset(&self, cell: usize) -> usize {
        self.offsets[cell]
    }

    /// True if column `degree` of `cell` is computed exactly.
    pub(crate) fn is_exact(&self, cell: usize, degree: usize) -> bool {
        self.blocks[cell].column(degree).iter().all(|&x| x == 0.0)
            || self.exact_limit[cell].is_some_and(|lim| degree <= lim)
    }

    pub(crate) fn check_exact(&self, cell: usize, degree: usize) -> Result<()> {
        if self.is_exact(cell, degree) {
            Ok(())
        } else {
            Err(Error::TruncationOverflow {
                cell,
                degree,
                cut: self.exact_limit[cell].map_or(0, |lim| lim + 1),
            })
        }
    }

    pub fn apply(&self, v: &OneParticleVector) -> Result<OneParticleVector> {
        let mut out = vec![0.0; v.coeffs.len()];
        for (idx, &x) in v.coeffs.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            let (cell, degree) = self.cell_of(idx);
            self.check_exact(cell, degree)?;
            let block = &self.blocks[cell];
            for row in 0..block.nrows() {
                out[self.offsets[cell] + row] += block[(row, degree)] * x;
            }
        }
        Ok(OneParticleVector { coeffs: out })
    }
}
