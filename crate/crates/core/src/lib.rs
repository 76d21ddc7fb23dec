//! Heights, Galois orbits modulo torsion, place vectors and field projections
//! over a fixed Galois number field.

pub mod arith;
pub mod error;
pub mod numberfield;

pub use error::{Error, Result};
pub mod heights;
pub mod orbits;
pub mod json;
pub mod placespace;
pub mod projections;
pub mod cli;
