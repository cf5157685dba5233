//! Truncated symmetric Fock space over the discretized one-particle space.
//!
//! Modes are `χ_Δⱼ q⁽ⁿ⁾(x_j, ·)` normalized to unit length, so the occupation
//! basis is orthonormal and the ladder operators carry the usual bosonic
//! factors. The `n!`-weighted tensor picture only enters through
//! [`symmetric_product_amplitude`].

mod basis;
mod ops;
mod state;
pub mod sym;

pub use basis::{Mode, ModeBasis, OneParticleOperator, OneParticleVector};
pub use ops::{
    annihilate, apply_a, apply_a_k, apply_r_k, create, neutral, vacuum_moment, vacuum_moment_of,
    FieldOperator, OperatorSpec,
};
pub use state::{symmetric_product_amplitude, FockVector, Occupation};
