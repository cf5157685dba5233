#![allow(dead_code)]

use levy_chaos::{Lattice, MeasureField, SpectralMeasure};

pub fn gaussian() -> SpectralMeasure {
    SpectralMeasure::dirac(0.0)
}

/// `½δ₋₁ + ½δ₁`
pub fn symmetric_pair() -> SpectralMeasure {
    SpectralMeasure::discrete(0.0, vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap()
}

/// `¼δ₋₁ + ½δ₀ + ¼δ₁`
pub fn three_point() -> SpectralMeasure {
    SpectralMeasure::discrete(0.5, vec![(-1.0, 0.25), (1.0, 0.25)]).unwrap()
}

pub fn poisson() -> SpectralMeasure {
    SpectralMeasure::dirac(1.0)
}

/// Asymmetric measure with a Gaussian part and support size 4.
pub fn skewed() -> SpectralMeasure {
    SpectralMeasure::discrete(0.3, vec![(-1.5, 0.2), (0.5, 0.3), (1.2, 0.2)]).unwrap()
}

pub fn named() -> Vec<(&'static str, SpectralMeasure)> {
    vec![("delta0", gaussian()), ("pm1", symmetric_pair()), ("three_point", three_point())]
}

pub fn four_cells(measure: SpectralMeasure) -> MeasureField {
    MeasureField::homogeneous(Lattice::intervals(&[0.5, 1.0, 1.5, 0.75]).unwrap(), measure)
}

pub fn five_cells(measure: SpectralMeasure) -> MeasureField {
    MeasureField::homogeneous(Lattice::intervals(&[0.5, 1.0, 1.5, 0.75, 1.25]).unwrap(), measure)
}

pub const PHI: [f64; 4] = [1.0, -0.5, 0.8, 0.3];
pub const PSI: [f64; 4] = [0.0, 1.2, 0.0, -0.7];
