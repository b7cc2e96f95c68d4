//! Shared generators for the integration suites.
#![allow(dead_code)]

use farey_laurent::algebra::{Field, Poly};
use farey_laurent::laurent::RationalFunction;
use proptest::prelude::*;

pub fn field(q: u32) -> Field {
    Field::from_q(q, if q == 4 { Some(vec![1, 1, 1]) } else { None }).unwrap()
}

pub fn poly_from(field: &Field, digits: Vec<u32>) -> Poly {
    Poly::from_coeffs(field, digits.into_iter().map(|x| field.elem(x)).collect())
}

/// Nonzero rationals with `|f| < 1` and a monic denominator of degree `1..=max_den`.
pub fn rational_in_l(q: u32, max_den: usize) -> impl Strategy<Value = RationalFunction> {
    (1..=max_den).prop_flat_map(move |dd| {
        (
            prop::collection::vec(0..q, dd),
            prop::collection::vec(0..q, dd),
        )
            .prop_filter_map("zero numerator", move |(n, mut d)| {
                let f = field(q);
                d.push(1);
                let r = RationalFunction::new(poly_from(&f, n), poly_from(&f, d)).ok()?;
                (!r.is_zero()).then_some(r)
            })
    })
}
