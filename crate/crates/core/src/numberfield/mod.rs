//! Exact arithmetic in a Galois working field.

pub mod factor;
pub mod field;
pub mod galois;
pub mod modular;
pub mod numeric;
pub mod poly;

pub use factor::{factor_over_q, is_irreducible, Factorization};
pub use field::{cyclotomic_poly, AutId, FieldElement, WorkingField};
pub use galois::{galois_condition, subfield, Subfield};
pub use numeric::IsolatedRoot;
pub use poly::Poly;
