//! The Artin map, continued-fraction expansions and principal convergents.
//!
//! Seeds follow `P_-1 = 1, Q_-1 = 0, P_0 = 0, Q_0 = 1`, so that the product
//! of zero step matrices is the identity.
//!
//! In series mode the expansion runs Euclid on the exact truncation of the
//! input and keeps `A_{k+1}` only when the whole precision ball lies in the
//! cylinder of `A_1..A_{k+1}`. That cylinder is the ball of radius
//! `q^(-1 - 2 deg Q_{k+1})` around `P_{k+1}/Q_{k+1}`, so the test is
//! `2 deg Q_{k+1} + 1 <= -floor`.

use serde::Serialize;

use crate::algebra::{ostrowski_decompose, Degree, Field, Ostrowski, Poly};
use crate::error::{Error, Result};
use crate::laurent::{Element, RationalFunction};

/// `Psi(f) = {1/f}` for `f` with `|f| < 1`.
pub fn artin_step(f: &Element) -> Result<Element> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let d = f.deg()?;
    if d >= 0 {
        return Err(Error::Domain(format!("Artin map needs |f| < 1, got deg f = {d}")));
    }
    f.inv()?.frac_part()
}

/// Why an expansion stopped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Stop {
    /// Reached the requested number of partial quotients.
    MaxDepth,
    /// The input is rational and the expansion is complete.
    Terminated,
    /// The next partial quotient is not determined by the input's window.
    Precision { required_floor: i64 },
}

/// Partial quotients `A_1..A_n` with their convergents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    field: Field,
    a: Vec<Poly>,
    // p[k + 1] = P_k for k >= -1, likewise q.
    p: Vec<Poly>,
    q: Vec<Poly>,
    stop: Stop,
}

impl CfExpansion {
    fn empty(field: &Field) -> CfExpansion {
        CfExpansion {
            field: field.clone(),
            a: Vec::new(),
            p: vec![Poly::one(field), Poly::zero(field)],
            q: vec![Poly::zero(field), Poly::one(field)],
            stop: Stop::MaxDepth,
        }
    }

    /// Builds the convergents of the given partial quotients.
    pub fn from_partial_quotients(field: &Field, parts: &[Poly], stop: Stop) -> CfExpansion {
        let mut cf = CfExpansion::empty(field);
        for a in parts {
            cf.push(a.clone());
        }
        cf.stop = stop;
        cf
    }

    fn push(&mut self, a: Poly) {
        let n = self.p.len();
        let p = &(&a * &self.p[n - 1]) + &self.p[n - 2];
        let q = &(&a * &self.q[n - 1]) + &self.q[n - 2];
        self.p.push(p);
        self.q.push(q);
        self.a.push(a);
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of certified partial quotients.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn stop(&self) -> &Stop {
        &self.stop
    }

    pub fn terminated(&self) -> bool {
        self.stop == Stop::Terminated
    }

    /// `A_1..A_n`.
    pub fn partial_quotients(&self) -> &[Poly] {
        &self.a
    }

    /// `A_k`, `1 <= k <= len`.
    pub fn a(&self, k: usize) -> &Poly {
        &self.a[k - 1]
    }

    /// `P_k`, `-1 <= k <= len`.
    pub fn p(&self, k: i64) -> &Poly {
        &self.p[(k + 1) as usize]
    }

    /// `Q_k`, `-1 <= k <= len`.
    pub fn q(&self, k: i64) -> &Poly {
        &self.q[(k + 1) as usize]
    }

    /// `Q_0, Q_1, ..., Q_len`.
    pub fn denominators(&self) -> &[Poly] {
        &self.q[1..]
    }

    /// `P_0, P_1, ..., P_len`.
    pub fn numerators(&self) -> &[Poly] {
        &self.p[1..]
    }

    pub fn convergent(&self, k: usize) -> RationalFunction {
        RationalFunction::new(self.p(k as i64).clone(), self.q(k as i64).clone())
            .expect("Q_k is nonzero")
    }

    /// `P_k Q_{k-1} - P_{k-1} Q_k`, a nonzero constant.
    pub fn determinant(&self, k: usize) -> Poly {
        let k = k as i64;
        &(self.p(k) * self.q(k - 1)) - &(self.p(k - 1) * self.q(k))
    }

    /// Digits of `v` against `Q_0..Q_len`.
    pub fn ostrowski(&self, v: &Poly) -> Result<Ostrowski> {
        ostrowski_decompose(v, self.denominators())
    }
}

/// Expands `f` (with `|f| < 1`) to at most `max_k` partial quotients.
///
/// Series inputs stop early with [`Stop::Precision`] rather than emit an
/// uncertified quotient.
pub fn cf_expand(f: &Element, max_k: usize) -> Result<CfExpansion> {
    let field = f.field().clone();
    if f.is_zero() {
        let mut cf = CfExpansion::empty(&field);
        cf.stop = Stop::Terminated;
        return Ok(cf);
    }
    match f {
        Element::Exact(r) => {
            if r.deg() >= 0 {
                return Err(Error::Domain(format!(
                    "expansion needs |f| < 1, got deg f = {}",
                    r.deg()
                )));
            }
            Ok(euclid(&field, r.num().clone(), r.den().clone(), max_k, None))
        }
        Element::Series(s) => {
            if s.ub() >= 0 {
                return Err(Error::Domain(format!(
                    "expansion needs |f| < 1, stored window starts at degree {}",
                    s.top()
                )));
            }
            let (n, k) = s.truncation();
            let den = Poly::monomial(&field, crate::algebra::Fe::ONE, k);
            Ok(euclid(&field, n, den, max_k, Some(s.floor())))
        }
    }
}

/// Like [`cf_expand`], but fails unless exactly `k` quotients are available.
pub fn cf_expand_to(f: &Element, k: usize) -> Result<CfExpansion> {
    let cf = cf_expand(f, k)?;
    match cf.stop() {
        Stop::Precision { required_floor } if cf.len() < k => Err(Error::InsufficientPrecision {
            context: format!("only {} of {k} partial quotients are certified", cf.len()),
            required_floor: Some(*required_floor),
        }),
        Stop::Terminated if cf.len() < k => Err(Error::DepthExceeded {
            requested: k,
            available: cf.len(),
        }),
        _ => Ok(cf),
    }
}

fn euclid(field: &Field, mut num: Poly, mut den: Poly, max_k: usize, floor: Option<i64>) -> CfExpansion {
    let mut cf = CfExpansion::empty(field);
    let mut deg_q = 0i64;
    loop {
        if num.is_zero() {
            cf.stop = match floor {
                None => Stop::Terminated,
                // The window ran out exactly; the next quotient is unknown.
                Some(_) => Stop::Precision {
                    required_floor: -(2 * (deg_q + 1) + 1),
                },
            };
            return cf;
        }
        if cf.len() == max_k {
            cf.stop = Stop::MaxDepth;
            return cf;
        }
        let (a, r) = den.divmod(&num).expect("nonzero");
        let next_deg = deg_q + a.degree() as i64;
        if let Some(m) = floor {
            if 2 * next_deg + 1 > -m {
                cf.stop = Stop::Precision {
                    required_floor: -(2 * next_deg + 1),
                };
                return cf;
            }
        }
        cf.push(a);
        deg_q = next_deg;
        den = num;
        num = r;
    }
}

/// Exponent of `|f - P/Q|`; fails if the window cannot certify it.
pub fn approximation_exponent(f: &Element, p: &Poly, q: &Poly) -> Result<Degree> {
    let err = f.mul_poly(q).sub(&Element::Exact(RationalFunction::from_poly(p.clone())));
    Ok(err.deg()? - q.degree() as i64)
}

/// Both sides of `|{Q_k f}| = 1/|Q_{k+1}|`, as exponents of q.
pub fn check_qf_identity(f: &Element, cf: &CfExpansion, k: usize) -> Result<(Degree, Degree)> {
    if k + 1 > cf.len() {
        return Err(Error::DepthExceeded {
            requested: k + 1,
            available: cf.len(),
        });
    }
    let lhs = f.mul_poly(cf.q(k as i64)).frac_part()?.deg()?;
    let rhs = Degree::Finite(-(cf.q(k as i64 + 1).degree() as i64));
    Ok((lhs, rhs))
}

/// `n` convergents `P/Q` each certified to satisfy `|f - P/Q| < 1/|Q|^2`.
pub fn hurwitz_witnesses(f: &Element, n: usize) -> Result<Vec<RationalFunction>> {
    let cf = cf_expand_to(f, n)?;
    (1..=n)
        .map(|k| {
            let (p, q) = (cf.p(k as i64), cf.q(k as i64));
            let e = approximation_exponent(f, p, q)?;
            if e < -2 * q.degree() as i64 {
                Ok(cf.convergent(k))
            } else {
                Err(Error::PreconditionFailed(format!(
                    "convergent {k} fails the strict inequality: |f - P/Q| = {}",
                    e.qpow()
                )))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{series_from_cf, CfSpecInput, LaurentSeries};
    use proptest::prelude::*;

    fn exact(field: &Field, s: &str) -> Element {
        Element::Exact(RationalFunction::parse(field, s).unwrap())
    }

    fn poly(field: &Field, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    /// Quotient sequence by repeated leading-term subtraction.
    fn subtractive_euclid(mut p: Poly, mut q: Poly) -> Vec<Poly> {
        let field = p.field().clone();
        let mut out = Vec::new();
        while !p.is_zero() {
            let mut a = Poly::zero(&field);
            while q.deg() >= p.deg() {
                let c = field.div(q.lc(), p.lc()).unwrap();
                let m = Poly::monomial(&field, c, q.degree() - p.degree());
                q = &q - &(&m * &p);
                a = &a + &m;
            }
            out.push(a);
            std::mem::swap(&mut p, &mut q);
        }
        out
    }

    #[test]
    fn artin_examples() {
        let f2 = Field::prime(2).unwrap();
        assert!(artin_step(&exact(&f2, "1/t")).unwrap().is_zero());
        assert_eq!(artin_step(&exact(&f2, "t/(t^2+1)")).unwrap(), exact(&f2, "1/t"));
        let f3 = Field::prime(3).unwrap();
        assert!(artin_step(&exact(&f3, "1/(2*t^3+t^2+2)")).unwrap().is_zero());
        assert_eq!(artin_step(&exact(&f3, "0")), Err(Error::ZeroInput));
        assert!(matches!(artin_step(&exact(&f3, "t")), Err(Error::Domain(_))));
    }

    #[test]
    fn expands_rational() {
        let f2 = Field::prime(2).unwrap();
        let cf = cf_expand(&exact(&f2, "t/(t^2+1)"), 10).unwrap();
        assert_eq!(cf.partial_quotients(), &[Poly::t(&f2), Poly::t(&f2)]);
        assert!(cf.terminated());
        assert_eq!(cf.convergent(1), RationalFunction::parse(&f2, "1/t").unwrap());
        assert_eq!(cf.convergent(2), RationalFunction::parse(&f2, "t/(t^2+1)").unwrap());
        let f3 = Field::prime(3).unwrap();
        let a1 = poly(&f3, "2*t^2+t");
        let cf = cf_expand(&Element::Exact(RationalFunction::recip_poly(&a1).unwrap()), 5).unwrap();
        assert_eq!(cf.partial_quotients(), &[a1]);
        assert!(cf.terminated());
    }

    #[test]
    fn expands_periodic_series() {
        let f2 = Field::prime(2).unwrap();
        let spec = CfSpecInput::parse(&f2, "", Some("t")).unwrap();
        let f = Element::Series(series_from_cf(&f2, &spec, -60));
        let cf = cf_expand(&f, 12).unwrap();
        assert_eq!(cf.len(), 12);
        assert!(cf.partial_quotients().iter().all(|a| *a == Poly::t(&f2)));
        assert_eq!(cf.stop(), &Stop::MaxDepth);
        let all = cf_expand(&f, 1000).unwrap();
        // 2 deg Q_k + 1 <= 60 allows k = 29.
        assert_eq!(all.len(), 29);
        assert!(matches!(all.stop(), Stop::Precision { .. }));
        assert!(cf_expand_to(&f, 1000).is_err());
    }

    #[test]
    fn qf_identity_examples() {
        let f2 = Field::prime(2).unwrap();
        let spec = CfSpecInput::parse(&f2, "", Some("t")).unwrap();
        let f = Element::Series(series_from_cf(&f2, &spec, -40));
        let cf = cf_expand(&f, 5).unwrap();
        assert_eq!(check_qf_identity(&f, &cf, 1).unwrap(), (Degree::Finite(-2), Degree::Finite(-2)));
        assert_eq!(check_qf_identity(&f, &cf, 0).unwrap(), (Degree::Finite(-1), Degree::Finite(-1)));
        assert!(check_qf_identity(&f, &cf, 5).is_err());
    }

    #[test]
    fn hurwitz_for_periodic() {
        let f2 = Field::prime(2).unwrap();
        let spec = CfSpecInput::parse(&f2, "", Some("t")).unwrap();
        let f = Element::Series(series_from_cf(&f2, &spec, -40));
        let w = hurwitz_witnesses(&f, 3).unwrap();
        let expect: Vec<_> = ["1/t", "t/(t^2+1)", "(t^2+1)/(t^3)"]
            .iter()
            .map(|s| RationalFunction::parse(&f2, s).unwrap())
            .collect();
        assert_eq!(w, expect);
    }

    fn arb_rational_in_l() -> impl Strategy<Value = RationalFunction> {
        (prop::sample::select(vec![2u32, 3, 5]), 1usize..11).prop_flat_map(|(q, dd)| {
            (
                prop::collection::vec(0..q, dd),
                prop::collection::vec(0..q, dd),
            )
                .prop_filter_map("zero", move |(n, mut d)| {
                    let field = Field::prime(q).unwrap();
                    d.push(1);
                    let n = Poly::from_coeffs(&field, n.into_iter().map(|x| field.elem(x)).collect());
                    let d = Poly::from_coeffs(&field, d.into_iter().map(|x| field.elem(x)).collect());
                    let r = RationalFunction::new(n, d).ok()?;
                    (!r.is_zero()).then_some(r)
                })
        })
    }

    proptest! {
        #[test]
        fn matches_subtractive_euclid(r in arb_rational_in_l()) {
            let cf = cf_expand(&Element::Exact(r.clone()), usize::MAX).unwrap();
            prop_assert!(cf.terminated());
            let oracle = subtractive_euclid(r.num().clone(), r.den().clone());
            prop_assert_eq!(cf.partial_quotients(), oracle.as_slice());
            prop_assert_eq!(cf.convergent(cf.len()), r);
        }

        #[test]
        fn convergent_identities(r in arb_rational_in_l()) {
            let f = Element::Exact(r);
            let cf = cf_expand(&f, usize::MAX).unwrap();
            for k in 1..=cf.len() {
                let det = cf.determinant(k);
                prop_assert!(det.deg() == 0);
                prop_assert_eq!(cf.q(k as i64).degree() - cf.q(k as i64 - 1).degree(), cf.a(k).degree());
                if k < cf.len() {
                    let (l, rr) = check_qf_identity(&f, &cf, k).unwrap();
                    prop_assert_eq!(l, rr);
                    let e = approximation_exponent(&f, cf.p(k as i64), cf.q(k as i64)).unwrap();
                    let want = -((cf.q(k as i64).degree() + cf.q(k as i64 + 1).degree()) as i64);
                    prop_assert_eq!(e, Degree::Finite(want));
                }
            }
        }

        #[test]
        fn series_mode_agrees_with_artin_iteration(r in arb_rational_in_l(), floor in -50i64..-10) {
            let s = Element::Series(LaurentSeries::from_rational(&r, floor));
            let cf = cf_expand(&s, usize::MAX).unwrap();
            let exact = cf_expand(&Element::Exact(r), usize::MAX).unwrap();
            prop_assert!(cf.len() <= exact.len());
            prop_assert_eq!(cf.partial_quotients(), &exact.partial_quotients()[..cf.len()]);
            // Independent route: iterate the Artin map on the series itself.
            let mut x = s.clone();
            for k in 1..=cf.len() {
                let inv = x.inv().unwrap();
                prop_assert_eq!(&inv.poly_part().unwrap(), cf.a(k));
                x = inv.frac_part().unwrap();
            }
        }
    }
}
