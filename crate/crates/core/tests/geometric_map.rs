mod common;

use farey_laurent::cf::{artin_step, cf_expand};
use farey_laurent::farey_geometric::{geo_closed_form, geo_orbit_product, GeoState};
use farey_laurent::laurent::Element;
use proptest::prelude::*;

fn q_and_f() -> impl Strategy<Value = farey_laurent::laurent::RationalFunction> {
    prop::sample::select(vec![2u32, 3, 5]).prop_flat_map(|q| common::rational_in_l(q, 12))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn orbit_products_match_closed_forms(r in q_and_f()) {
        let f = Element::Exact(r);
        let cf = cf_expand(&f, usize::MAX).unwrap();
        let orbit = geo_orbit_product(&f, 60).unwrap();
        let mut product = farey_laurent::matrix::ScaledMatrix::identity(f.field());
        for ell in 0..=60 {
            if ell > 0 {
                product = product.mul(&orbit.matrices[ell - 1]);
            }
            let closed = geo_closed_form(&cf, ell).unwrap();
            prop_assert!(product.same_matrix(&closed), "ell={} product={} closed={}", ell, product, closed);
        }
    }

    #[test]
    fn acceleration_and_level_bookkeeping(r in q_and_f()) {
        let f = Element::Exact(r.clone());
        let m = -r.deg().finite().unwrap() as usize;
        let orbit = geo_orbit_product(&f, 2 * m).unwrap();
        prop_assert_eq!(&orbit.states[2 * m], &GeoState::new(artin_step(&f).unwrap(), 0));
        for s in &orbit.states[1..2 * m] {
            prop_assert!(s.n != 0);
        }
    }
}
