//! Exact Gelfand-Tsetlin modules of sl(3).
//!
//! Generic and 1-singular blocks are built from a base vector of rational
//! entries. The crate provides the exact action of gl(3) and of the
//! Gelfand-Tsetlin subalgebra, a bracket-relation checker, the decomposition
//! of a block into simple subquotients described by difference-constraint
//! regions, Loewy layers, the spectral calculus of `E12 E21` and `E23 E32`,
//! and localization with respect to `E21` at the level of regions.

pub mod action;
pub mod catalog;
pub mod coeff;
pub mod error;
pub mod generic_action;
pub mod localize;
pub mod ratfunc;
pub mod region;
pub mod scalar;
mod ser;
pub mod singular_action;
pub mod spectral;
pub mod structure;
pub mod tableau;

pub use action::Generator;
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use tableau::{BlockKind, BlockSpec, GTCharacter, Kind, Shift, SparseVector, Tableau, Weight};
