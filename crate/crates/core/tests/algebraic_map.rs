mod common;

use farey_laurent::algebra::Degree;
use farey_laurent::cf::{approximation_exponent, cf_expand};
use farey_laurent::error::Error;
use farey_laurent::farey_algebraic::{
    alg_closed_form, alg_orbit_product, alg_step, alg_step_by_definition, bernaknat_step,
    classify_good_approx, find_h_s, intermediate_convergents, thm31_error, Classification, HParam,
};
use farey_laurent::laurent::{Element, RationalFunction};
use farey_laurent::matrix::ScaledMatrix;
use proptest::prelude::*;

fn case() -> impl Strategy<Value = (RationalFunction, HParam)> {
    prop::sample::select(vec![2u32, 3, 5]).prop_flat_map(|q| {
        (
            common::rational_in_l(q, 10),
            (1..q, prop::collection::vec(0..q, 0..12)),
        )
            .prop_map(move |(r, (h1, rest))| {
                let f = common::field(q);
                let cs: Vec<_> = std::iter::once(h1).chain(rest).map(|x| f.elem(x)).collect();
                (r, HParam::from_coeffs(&f, &cs).unwrap())
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_matches_definition((r, h) in case()) {
        let mut x = Element::Exact(r);
        for _ in 0..40 {
            let y = alg_step(&x, &h).unwrap();
            prop_assert_eq!(&y, &alg_step_by_definition(&x, &h).unwrap());
            x = y;
        }
    }

    #[test]
    fn orbit_products_match_closed_forms((r, h) in case()) {
        let f = Element::Exact(r);
        let cf = cf_expand(&f, usize::MAX).unwrap();
        let orbit = alg_orbit_product(&f, &h, 40).unwrap();
        let mut product = ScaledMatrix::identity(f.field());
        for ell in 0..=40 {
            if ell > 0 {
                product = product.mul(&orbit.matrices[ell - 1]);
            }
            let closed = alg_closed_form(&cf, &h, ell).unwrap();
            prop_assert_eq!(&product, &closed, "ell={}", ell);
        }
    }

    #[test]
    fn intermediates_are_classified_back((r, h) in case()) {
        let f = Element::Exact(r);
        let cf = cf_expand(&f, usize::MAX).unwrap();
        for ic in intermediate_convergents(&f, &h, cf.len()).unwrap() {
            match classify_good_approx(&f, &ic.u, &ic.v).unwrap() {
                Classification::Intermediate { k, b, realization } => {
                    prop_assert_eq!((k, &b), (ic.k, &ic.b));
                    let (h2, i) = realization.expect("B = [h^i A] for some h");
                    prop_assert_eq!(i, ic.i);
                    prop_assert_eq!(h2.poly_part_power(i, cf.a(k + 1)).unwrap(), b);
                }
                other => prop_assert!(false, "unexpected {:?}", other),
            }
        }
    }

    #[test]
    fn error_law_for_small_b((r, _h) in case(), pick in any::<prop::sample::Index>(), c in 1u32..5) {
        let f = Element::Exact(r);
        let field = f.field().clone();
        let cf = cf_expand(&f, usize::MAX).unwrap();
        let k = pick.index(cf.len());
        let a = cf.a(k + 1);
        // B = c t^j for j < deg A_{k+1}.
        let j = pick.index(a.degree());
        let cc = field.elem(c % field.q());
        prop_assume!(!cc.is_zero());
        let b = farey_laurent::algebra::Poly::monomial(&field, cc, j);
        let (l, rr) = thm31_error(&f, &cf, k, &b).unwrap();
        prop_assert_eq!(l, rr);
    }

    #[test]
    fn bernaknat_certificates_are_exact((r, _h) in case()) {
        let f = Element::Exact(r);
        match find_h_s(&f) {
            Ok(cert) => {
                let mut x = f.clone();
                for _ in 0..cert.s {
                    x = alg_step(&x, &cert.h).unwrap();
                }
                prop_assert_eq!(&x, &bernaknat_step(&f).unwrap());
            }
            Err(Error::PreconditionFailed(_)) | Err(Error::NoRootCertificate(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn principal_convergents_classify_as_principal() {
    let f3 = common::field(3);
    let f = Element::Exact(RationalFunction::parse(&f3, "(t^3+2*t+1)/(t^7+t^4+2)").unwrap());
    let cf = cf_expand(&f, usize::MAX).unwrap();
    for k in 1..=cf.len() {
        let e = approximation_exponent(&f, cf.p(k as i64), cf.q(k as i64)).unwrap();
        if e == Degree::NegInf {
            continue;
        }
        assert_eq!(
            classify_good_approx(&f, cf.p(k as i64), cf.q(k as i64)).unwrap(),
            Classification::Principal { k: k - 1 }
        );
    }
}
