//! Finite fields, polynomials over them, and the convergent-denominator
//! digit expansion.

mod degree;
mod field;
pub mod ostrowski;
mod poly;

pub use degree::Degree;
pub use field::{Fe, Field, FieldSpec, MAX_Q};
pub use ostrowski::{ostrowski_decompose, Ostrowski};
pub use poly::Poly;
pub(crate) use poly::split_top_level;
