//! Exact base rings and integer linear algebra.

mod cyclotomic;
mod local;
mod matrix;
mod snf;
mod subquotient;
mod zmod;

pub use cyclotomic::{format_mod3, CyclotomicElement, PiValuation};
pub use local::{kernel_mod_p, local_profile, rank_mod_p, LocalProfile, ModMatrix};
pub use matrix::IntMatrix;
pub use snf::{invariant_factors, kernel_basis, smith_normal_form, SnfResult};
pub use subquotient::{
    lattice_coordinates, subquotient_structure, subquotient_with_coordinates, valuation, CoordinateMap, Subquotient,
};
pub use zmod::Zmod;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("image generator in column {column} is not contained in the kernel lattice")]
    NotContained { column: usize },
    #[error("element is not divisible by pi (residue {residue} mod pi)")]
    NotDivisible { residue: i64 },
    #[error("element is not a unit")]
    NotAUnit,
    #[error("pi-adic precision exhausted")]
    PrecisionExhausted,
}
