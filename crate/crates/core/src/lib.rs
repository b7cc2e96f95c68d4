//! Continued fractions and Farey maps over F_q((1/t)).
//!
//! ```
//! use farey_laurent::algebra::Field;
//! use farey_laurent::cf::cf_expand;
//! use farey_laurent::farey_algebraic::{alg_step, HParam};
//! use farey_laurent::laurent::{Element, RationalFunction};
//!
//! # fn main() -> farey_laurent::Result<()> {
//! let f3 = Field::from_q(3, None)?;
//! let x = Element::Exact(RationalFunction::parse(&f3, "t/(t^2+1)")?);
//! let cf = cf_expand(&x, 20)?;
//! assert!(cf.terminated());
//! let h = HParam::parse(&f3, "1/t")?;
//! assert_eq!(alg_step(&x, &h)?.to_string(), "(t)/(t+1)");
//! # Ok(())
//! # }
//! ```

pub mod algebra;
pub mod cf;
pub mod cli;
pub mod error;
pub mod ergodic;
pub mod farey_algebraic;
pub mod farey_geometric;
pub mod laurent;
pub mod matrix;
pub mod tree;

pub use error::{Error, Result};
