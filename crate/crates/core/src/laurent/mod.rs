//! The field K of formal Laurent series in `t^-1`, with exact rational and
//! precision-tracked series representations.

mod cfspec;
mod element;
mod rational;
mod series;

pub use cfspec::{series_from_cf, CfSpecInput};
pub use element::Element;
pub use rational::RationalFunction;
pub use series::LaurentSeries;
