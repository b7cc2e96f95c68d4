mod common;

use farey_laurent::algebra::{Degree, Field, Poly};
use farey_laurent::cf::{approximation_exponent, cf_expand};
use farey_laurent::laurent::{Element, RationalFunction};
use farey_laurent::tree::{
    act, busemann, diophantine_trichotomy, ford_crossings, geodesic_ray, hamenstadt_distance,
    homography, tree_distance, vertex_from_matrix, BoundaryPoint, FordSphere, Incidence,
    PolyMatrix, TreeVertex,
};
use proptest::prelude::*;

fn exact(r: RationalFunction) -> Element {
    Element::Exact(r)
}

/// `x` with terms in degrees `lo..lo+len`, coefficients from `digits`.
fn laurent(field: &Field, lo: i64, digits: &[u32]) -> RationalFunction {
    let p = common::poly_from(field, digits.to_vec());
    RationalFunction::from_poly(p).mul(&RationalFunction::t_pow(field, lo))
}

fn vertex_strategy(q: u32) -> impl Strategy<Value = TreeVertex> {
    (-6i64..6, prop::collection::vec(0..q, 0..6)).prop_map(move |(level, digits)| {
        let f = common::field(q);
        TreeVertex::new(level, &exact(laurent(&f, level + 1, &digits))).unwrap()
    })
}

/// Elements of O, i.e. `P(1/t)` for short `P`.
fn in_o(field: &Field, digits: &[u32]) -> RationalFunction {
    let digits: Vec<u32> = digits.iter().rev().copied().collect();
    laurent(field, -(digits.len() as i64) + 1, &digits)
}

fn q_strategy() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 4, 5])
}

fn sl2(field: &Field, xs: &[Vec<u32>]) -> PolyMatrix {
    let mut m = [
        [Poly::one(field), Poly::zero(field)],
        [Poly::zero(field), Poly::one(field)],
    ];
    for (i, x) in xs.iter().enumerate() {
        let x = common::poly_from(field, x.clone());
        let [[a, b], [c, d]] = m.clone();
        m = if i % 2 == 0 {
            [[a.clone(), &(&a * &x) + &b], [c.clone(), &(&c * &x) + &d]]
        } else {
            [[&a + &(&b * &x), b], [&c + &(&d * &x), d]]
        };
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn canonical_form_is_basis_invariant(
        (q, v, ops, scale) in q_strategy().prop_flat_map(|q| (
            Just(q),
            vertex_strategy(q),
            prop::collection::vec((0..3usize, prop::collection::vec(0..q, 1..4)), 1..6),
            (-4i64..4, prop::collection::vec(0..q, 1..4)),
        ))
    ) {
        let f = common::field(q);
        let m = v.matrix().map(|r| r.map(exact));
        let [[mut a, mut b], [mut c, mut d]] = m;
        for (kind, digits) in ops {
            let x = exact(in_o(&f, &digits));
            match kind {
                0 => { b = b.add(&a.mul(&x)); d = d.add(&c.mul(&x)); }
                1 => { a = a.add(&b.mul(&x)); c = c.add(&d.mul(&x)); }
                _ => { std::mem::swap(&mut a, &mut b); std::mem::swap(&mut c, &mut d); }
            }
        }
        let (k, mut digits) = scale;
        digits.push(1);
        let s = exact(laurent(&f, k, &digits));
        let g = [[a.mul(&s), b.mul(&s)], [c.mul(&s), d.mul(&s)]];
        prop_assert_eq!(vertex_from_matrix(&g).unwrap(), v);
    }

    #[test]
    fn distance_is_a_tree_metric(
        (u, v, w) in q_strategy().prop_flat_map(|q| (vertex_strategy(q), vertex_strategy(q), vertex_strategy(q)))
    ) {
        let (duv, dvw, duw) = (tree_distance(&u, &v), tree_distance(&v, &w), tree_distance(&u, &w));
        prop_assert_eq!(duv, tree_distance(&v, &u));
        prop_assert!(duw <= duv + dvw);
        prop_assert_eq!(duv == 0, u == v);
        // Walking the ray from u toward v's line reaches v's class in d steps.
        let path = geodesic_ray(&BoundaryPoint::Infinity, &u, 3).unwrap();
        for pair in path.windows(2) {
            prop_assert_eq!(tree_distance(&pair[0], &pair[1]), 1);
        }
    }

    #[test]
    fn rays_have_unit_steps(
        (q, r, v) in q_strategy().prop_flat_map(|q| (Just(q), common::rational_in_l(q, 6), vertex_strategy(q)))
    ) {
        let _ = q;
        let ray = geodesic_ray(&BoundaryPoint::Finite(exact(r.clone())), &v, 20).unwrap();
        prop_assert_eq!(ray.len(), 21);
        for pair in ray.windows(2) {
            prop_assert_eq!(tree_distance(&pair[0], &pair[1]), 1);
        }
        // The far end lies on ]inf, f[.
        let end = ray.last().unwrap();
        prop_assert_eq!(end, &TreeVertex::on_line(&exact(r), end.level()).unwrap());
    }

    #[test]
    fn boundary_action_matches_homography(
        (q, r, xs) in q_strategy().prop_flat_map(|q| (
            Just(q),
            common::rational_in_l(q, 5),
            prop::collection::vec(prop::collection::vec(0..q, 1..3), 1..4),
        ))
    ) {
        let field = common::field(q);
        let gamma = sl2(&field, &xs);
        let f = exact(r);
        let image = match homography(&gamma, &BoundaryPoint::Finite(f.clone())).unwrap() {
            BoundaryPoint::Finite(x) => x,
            BoundaryPoint::Infinity => return Ok(()),
        };
        let pushed: Vec<TreeVertex> = (40..46).map(|n| act(&gamma, &TreeVertex::on_line(&f, -n).unwrap())).collect();
        for pair in pushed.windows(2) {
            prop_assert_eq!(pair[1].level(), pair[0].level() - 1);
        }
        for v in &pushed {
            prop_assert_eq!(v, &TreeVertex::on_line(&image, v.level()).unwrap());
        }
    }

    #[test]
    fn busemann_cocycle(
        (q, x, y, z, r, at_inf) in q_strategy().prop_flat_map(|q| (
            Just(q), vertex_strategy(q), vertex_strategy(q), vertex_strategy(q),
            common::rational_in_l(q, 4), any::<bool>(),
        ))
    ) {
        let _ = q;
        let omega = if at_inf { BoundaryPoint::Infinity } else { BoundaryPoint::Finite(exact(r)) };
        let b = |u: &TreeVertex, v: &TreeVertex| busemann(u, v, &omega).unwrap();
        prop_assert_eq!(b(&x, &y) + b(&y, &z), b(&x, &z));
        prop_assert_eq!(b(&x, &x), 0);
    }

    #[test]
    fn hamenstadt_at_infinity_is_the_absolute_value(
        (u, v) in q_strategy().prop_flat_map(|q| (common::rational_in_l(q, 6), common::rational_in_l(q, 6)))
    ) {
        let d = hamenstadt_distance(&u.clone().into(), &v.clone().into(), &FordSphere::Infinity).unwrap();
        prop_assert_eq!(d, u.sub(&v).deg());
    }

    #[test]
    fn hamenstadt_ultrametric(
        (q, u, v, w, b) in q_strategy().prop_flat_map(|q| (
            Just(q), common::rational_in_l(q, 5), common::rational_in_l(q, 5),
            common::rational_in_l(q, 5), common::rational_in_l(q, 3),
        ))
    ) {
        let _ = q;
        let base = FordSphere::At(b.clone());
        prop_assume!(u != b && v != b && w != b);
        let d = |x: &RationalFunction, y: &RationalFunction| {
            hamenstadt_distance(&x.clone().into(), &y.clone().into(), &base).unwrap()
        };
        prop_assert!(d(&u, &w) <= d(&u, &v).max(d(&v, &w)));
        prop_assert_eq!(d(&u, &v), d(&v, &u));
    }

    #[test]
    fn hamenstadt_convergent_relation(
        (q, r, pick) in q_strategy().prop_flat_map(|q| (Just(q), common::rational_in_l(q, 8), any::<prop::sample::Index>()))
    ) {
        let _ = q;
        let f = exact(r.clone());
        let cf = cf_expand(&f, usize::MAX).unwrap();
        let k = pick.index(cf.len()) as i64;
        let (p, qq) = (cf.p(k), cf.q(k));
        let base = FordSphere::new(p, qq).unwrap();
        let d = hamenstadt_distance(&BoundaryPoint::Infinity, &r.into(), &base).unwrap();
        let err = approximation_exponent(&f, p, qq).unwrap().finite().unwrap();
        prop_assert_eq!(err + d.finite().unwrap() + 2 * qq.degree() as i64, 0);
    }

    #[test]
    fn trichotomy_matches_the_inequality(
        (q, r, pdig, qdig) in q_strategy().prop_flat_map(|q| (
            Just(q), common::rational_in_l(q, 6),
            prop::collection::vec(0..q, 0..4), prop::collection::vec(0..q, 0..4),
        ))
    ) {
        let field = common::field(q);
        let f = exact(r);
        let mut qdig = qdig;
        qdig.push(1);
        let qq = common::poly_from(&field, qdig);
        let p = common::poly_from(&field, pdig);
        prop_assume!(p.gcd(&qq).is_one());
        check_trichotomy(&f, &p, &qq)?;
        let cf = cf_expand(&f, usize::MAX).unwrap();
        for k in 0..=cf.len() as i64 {
            check_trichotomy(&f, cf.p(k), cf.q(k))?;
        }
    }

    #[test]
    fn crossings_are_the_convergents(
        (q, r) in prop::sample::select(vec![2u32, 3]).prop_flat_map(|q| (Just(q), common::rational_in_l(q, 12)))
    ) {
        let _ = q;
        let f = exact(r);
        let cf = cf_expand(&f, 15).unwrap();
        let c = ford_crossings(&f, 15).unwrap();
        prop_assert!(c.uncovered.is_empty());
        let want: Vec<FordSphere> = (0..c.balls.len()).map(|k| FordSphere::new(cf.p(k as i64), cf.q(k as i64)).unwrap()).collect();
        let got: Vec<FordSphere> = c.balls.iter().map(|b| b.sphere.clone()).collect();
        prop_assert_eq!(got, want);
        for (k, b) in c.balls.iter().enumerate() {
            prop_assert_eq!(b.entry_index, 2 * cf.q(k as i64).degree());
            if let Some(exit) = b.exit_index {
                prop_assert_eq!(exit - b.entry_index, 2 * cf.a(k + 1).degree());
            }
        }
    }
}

fn check_trichotomy(f: &Element, p: &Poly, q: &Poly) -> Result<(), TestCaseError> {
    let got = diophantine_trichotomy(f, p, q).unwrap();
    let e = approximation_exponent(f, p, q).unwrap().finite();
    let bound = -2 * q.degree() as i64;
    let want = match e {
        None => Incidence::Intersects,
        Some(e) if e < bound => Incidence::Intersects,
        Some(e) if e == bound => Incidence::Tangent,
        _ => Incidence::Disjoint,
    };
    prop_assert_eq!(got, want, "f={} P={} Q={}", f, p, q);
    Ok(())
}

/// Every reduced `P/Q` with `Q` monic of degree `<= max_deg` and
/// `deg P <= deg Q`.
fn all_spheres(field: &Field, max_deg: usize) -> Vec<FordSphere> {
    let q = field.q();
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let count = (q as usize).pow(d as u32);
        for i in 0..count {
            let mut digits: Vec<u32> = (0..d).map(|j| (i / (q as usize).pow(j as u32)) as u32 % q).collect();
            digits.push(1);
            let qq = common::poly_from(field, digits);
            for k in 0..count * q as usize {
                let pd: Vec<u32> = (0..=d).map(|j| (k / (q as usize).pow(j as u32)) as u32 % q).collect();
                let p = common::poly_from(field, pd);
                if p.gcd(&qq).is_one() {
                    out.push(FordSphere::new(&p, &qq).unwrap());
                }
            }
        }
    }
    out
}

/// Brute force: every horoball of bounded base height with a geodesic vertex
/// in its interior. Tangent horoballs touch only a junction vertex.
#[test]
fn crossings_against_exhaustive_horoballs() {
    for (q, max_deg, inputs) in [
        (2u32, 4usize, vec!["t/(t^4+t+1)", "(t^2+1)/(t^5+t^3+1)", "1/(t^2+t)", "(t^3+t)/(t^4+t^2+1)"]),
        (3, 3, vec!["t/(2*t^4+t^3+2*t+1)", "(t+2)/(t^3+t+1)", "1/(t^3+2)"]),
    ] {
        let field = common::field(q);
        let spheres = all_spheres(&field, max_deg);
        for s in inputs {
            let f = exact(RationalFunction::parse(&field, s).unwrap());
            let cf = cf_expand(&f, usize::MAX).unwrap();
            let n = (0..=cf.len()).take_while(|&k| cf.q(k as i64).degree() <= max_deg).count() - 1;
            let lo = -2 * cf.q(n as i64).degree() as i64;
            let crossings = ford_crossings(&f, n).unwrap();
            let mut brute: Vec<(usize, String)> = Vec::new();
            for sph in &spheres {
                let hits: Vec<usize> = (lo + 1..0)
                    .rev()
                    .filter(|&l| sph.height(&TreeVertex::on_line(&f, l).unwrap()) > 0)
                    .map(|l| (-l) as usize)
                    .collect();
                if let Some(&first) = hits.first() {
                    brute.push((first, sph.to_string()));
                }
            }
            brute.sort();
            let got: Vec<String> = crossings
                .balls
                .iter()
                .filter(|b| (b.entry_index as i64) < -lo)
                .map(|b| b.sphere.to_string())
                .collect();
            let brute: Vec<String> = brute.into_iter().map(|(_, s)| s).collect();
            assert_eq!(got, brute, "f = {s}");
        }
    }
}

#[test]
fn tangent_and_disjoint_examples() {
    let f3 = common::field(3);
    let f = exact(RationalFunction::parse(&f3, "t/(2*t^4+t^3+2*t+1)").unwrap());
    // |f - 0/1| = q^-3 < 1: the first ball is crossed.
    assert_eq!(diophantine_trichotomy(&f, &Poly::zero(&f3), &Poly::one(&f3)).unwrap(), Incidence::Intersects);
    // |f - 1/1| = 1 = 1/|Q|^2: tangent at x_*.
    assert_eq!(diophantine_trichotomy(&f, &Poly::one(&f3), &Poly::one(&f3)).unwrap(), Incidence::Tangent);
    // |f - t| = q, far above.
    assert_eq!(diophantine_trichotomy(&f, &Poly::t(&f3), &Poly::one(&f3)).unwrap(), Incidence::Disjoint);
    let d = hamenstadt_distance(&BoundaryPoint::Infinity, &f.clone().into(), &FordSphere::Infinity);
    assert!(d.is_err());
    assert_eq!(
        hamenstadt_distance(&f.clone().into(), &f.into(), &FordSphere::new(&Poly::one(&f3), &Poly::t(&f3)).unwrap()).unwrap(),
        Degree::NegInf
    );
}
