//! Chaos decomposition of square-integrable functionals of noise with
//! independent values, discretized on a finite lattice.
//!
//! The pieces fit together as follows:
//!
//! * [`measure`] describes the spectral measure `σ(x, ds)` of every lattice cell.
//! * [`orthopoly`] turns each measure into its monic orthogonal polynomials.
//! * [`fock`] is the truncated symmetric Fock space over the one-particle space
//!   spanned by `χ_Δ q⁽ⁿ⁾`, with creation, annihilation and neutral operators.
//! * [`sampler`] draws exact noise realizations and evaluates the
//!   characteristic functional in closed form.
//! * [`chaos`] maps chaos coefficients both to the Fock space and to
//!   pathwise multiple stochastic integrals.
//! * [`mc`] and [`verify`] hold the deterministic Monte Carlo engine and the
//!   check suites used by the CLI and the acceptance tests.

pub mod chaos;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod mc;
pub mod measure;
pub mod orthopoly;
pub mod sampler;
pub mod verify;

pub use chaos::{ChaosCoefficient, ChaosIndex, ChaosModel};
pub use error::{Error, Result};
pub use fock::{FieldOperator, FockVector, ModeBasis, OneParticleOperator, OneParticleVector};
pub use lattice::{CellBox, Lattice};
pub use mc::{Estimate, MonteCarlo};
pub use measure::{LevyDecomposition, MeasureField, SpectralMeasure};
pub use orthopoly::RecurrenceTable;
pub use sampler::{PathSample, PathSampler};
