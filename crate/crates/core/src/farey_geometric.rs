//! The geometric Farey map on `L x Z`, the time-one map of the geodesic flow.
//!
//! `F(f, n) = (tf - [tf], n + 1)` when `deg f < -1` or `n < 0`, and
//! `F(f, n) = ({1/(tf)}, -(n + 1))` when `deg f = -1` and `n >= 0`.
//! Zero climbs the cusp: `F(0, n) = (0, n + 1)`.

use num_rational::Ratio;
use serde::Serialize;

use crate::algebra::{Degree, Fe, Poly};
use crate::cf::{approximation_exponent, cf_expand, CfExpansion};
use crate::error::{Error, Result};
use crate::laurent::{Element, RationalFunction};
use crate::matrix::ScaledMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeoState {
    pub f: Element,
    pub n: i64,
}

impl GeoState {
    pub fn new(f: Element, n: i64) -> GeoState {
        GeoState { f, n }
    }
}

/// Coefficient of `t^-1` of an element of `|f| < 1`.
pub(crate) fn coeff_minus_one(f: &Element) -> Result<Fe> {
    match f {
        Element::Exact(r) => {
            let d = r.deg();
            if d >= 0 {
                return Err(Error::Domain(format!("expected |f| < 1, got deg f = {d}")));
            }
            Ok(if d == -1 { r.lc() } else { Fe::ZERO })
        }
        Element::Series(s) => {
            if s.ub() >= 0 {
                return Err(Error::Domain(format!(
                    "expected |f| < 1, window starts at degree {}",
                    s.top()
                )));
            }
            s.coeff(-1)
        }
    }
}

/// True when the second (inverting) branch applies.
fn inverting(s: &GeoState) -> Result<bool> {
    if s.n < 0 || s.f.is_zero() {
        return Ok(false);
    }
    Ok(!coeff_minus_one(&s.f)?.is_zero())
}

pub fn geo_step(s: &GeoState) -> Result<GeoState> {
    if s.f.is_zero() {
        return Ok(GeoState::new(s.f.clone(), s.n + 1));
    }
    let t = Poly::t(s.f.field());
    let tf = s.f.mul_poly(&t);
    if inverting(s)? {
        Ok(GeoState::new(tf.inv()?.frac_part()?, -(s.n + 1)))
    } else {
        Ok(GeoState::new(tf.frac_part()?, s.n + 1))
    }
}

/// The step matrix `M(f, n)`.
pub fn geo_matrix(s: &GeoState) -> Result<ScaledMatrix> {
    let field = s.f.field();
    let (zero, one, t) = (Poly::zero(field), Poly::one(field), Poly::t(field));
    if s.n < 0 {
        // t^-1 [[1, [tf]], [0, t]]
        let c = if s.f.is_zero() {
            Fe::ZERO
        } else {
            coeff_minus_one(&s.f)?
        };
        return Ok(ScaledMatrix::new(-1, [[one, Poly::constant(field, c)], [zero, t]]));
    }
    if inverting(s)? {
        let c = field.inv(coeff_minus_one(&s.f)?)?;
        Ok(ScaledMatrix::from_polys(zero, one, t.clone(), t.scale(c)))
    } else {
        Ok(ScaledMatrix::from_polys(one, zero.clone(), zero, t))
    }
}

/// An orbit `(f,0), F(f,0), ...` with its step matrices and their product.
#[derive(Debug, Clone, Serialize)]
pub struct GeoOrbit {
    pub states: Vec<GeoState>,
    pub matrices: Vec<ScaledMatrix>,
    pub product: ScaledMatrix,
}

/// `ell` steps from `(f, 0)`, with `M(f,0) ... M(F^{ell-1}(f,0))`.
pub fn geo_orbit_product(f: &Element, ell: usize) -> Result<GeoOrbit> {
    let mut state = GeoState::new(f.clone(), 0);
    let mut product = ScaledMatrix::identity(f.field());
    let mut states = vec![state.clone()];
    let mut matrices = Vec::with_capacity(ell);
    for _ in 0..ell {
        let m = geo_matrix(&state)?;
        product = product.mul(&m);
        state = geo_step(&state)?;
        matrices.push(m);
        states.push(state.clone());
    }
    Ok(GeoOrbit {
        states,
        matrices,
        product,
    })
}

/// Position of step `ell` relative to the partial quotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GeoRegime {
    /// `ell = 2 sum_{n<=k} deg A_n + i`, `0 <= i < deg A_{k+1}`.
    Climb { k: usize, i: usize },
    /// `ell = 2 sum_{n<=k} deg A_n + deg A_{k+1} + i`, `0 <= i <= deg A_{k+1}`.
    Descend { k: usize, i: usize },
}

/// Locates `ell`; a terminated expansion behaves as `deg A_{n+1} = infinity`.
pub fn geo_regime(cf: &CfExpansion, ell: usize) -> Result<GeoRegime> {
    let mut s = 0usize;
    for k in 0.. {
        if k == cf.len() {
            if cf.terminated() {
                return Ok(GeoRegime::Climb { k, i: ell - s });
            }
            return Err(Error::DepthExceeded {
                requested: k + 1,
                available: cf.len(),
            });
        }
        let m = cf.a(k + 1).degree();
        if ell < s + m {
            return Ok(GeoRegime::Climb { k, i: ell - s });
        }
        if ell <= s + 2 * m {
            return Ok(GeoRegime::Descend { k, i: ell - s - m });
        }
        s += 2 * m;
    }
    unreachable!()
}

/// The top `i + 1` terms `a_m t^m + ... + a_{m-i} t^{m-i}` of `a`.
pub(crate) fn leading_terms(a: &Poly, i: usize) -> Poly {
    let m = a.degree();
    let mut c = a.coeffs().to_vec();
    for x in c.iter_mut().take(m - i) {
        *x = Fe::ZERO;
    }
    Poly::from_coeffs(a.field(), c)
}

/// The closed form of the orbit product at step `ell`.
pub fn geo_closed_form(cf: &CfExpansion, ell: usize) -> Result<ScaledMatrix> {
    let field = cf.field();
    Ok(match geo_regime(cf, ell)? {
        GeoRegime::Climb { k, i } => {
            let ti = Poly::monomial(field, Fe::ONE, i);
            let k = k as i64;
            ScaledMatrix::from_polys(
                cf.p(k - 1).clone(),
                &ti * cf.p(k),
                cf.q(k - 1).clone(),
                &ti * cf.q(k),
            )
        }
        GeoRegime::Descend { k, i } => {
            let a = cf.a(k + 1);
            let m = a.degree();
            let c = leading_terms(a, i);
            let tmi = Poly::monomial(field, Fe::ONE, m - i);
            let k = k as i64;
            ScaledMatrix::from_polys(
                &tmi * cf.p(k),
                &(&c * cf.p(k)) + cf.p(k - 1),
                &tmi * cf.q(k),
                &(&c * cf.q(k)) + cf.q(k - 1),
            )
        }
    })
}

/// The limit point of the product geodesic at step `ell` and its error.
#[derive(Debug, Clone, Serialize)]
pub struct IntermediateBound {
    pub k: usize,
    pub i: usize,
    pub approximant: RationalFunction,
    /// Exponent of `|f - approximant|`.
    pub error: Degree,
    /// Exponent of `q^-i / (|Q_k| |Q_{k+1}|)`.
    pub bound: i64,
}

/// Error of the second-column approximant for `ell` in the descending regime.
pub fn geo_intermediate_bound(f: &Element, ell: usize) -> Result<IntermediateBound> {
    let cf = cf_expand(f, ell + 1)?;
    let (k, i) = match geo_regime(&cf, ell)? {
        GeoRegime::Descend { k, i } => (k, i),
        GeoRegime::Climb { k, i } => {
            return Err(Error::PreconditionFailed(format!(
                "step {ell} is in the climbing part of quotient {} (offset {i})",
                k + 1
            )))
        }
    };
    let c = leading_terms(cf.a(k + 1), i);
    let kk = k as i64;
    let u = &(&c * cf.p(kk)) + cf.p(kk - 1);
    let v = &(&c * cf.q(kk)) + cf.q(kk - 1);
    let error = approximation_exponent(f, &u, &v)?;
    let bound = -(i as i64) - (cf.q(kk).degree() + cf.q(kk + 1).degree()) as i64;
    let approximant = RationalFunction::new(u, v)?;
    if error > bound {
        return Err(Error::PreconditionFailed(format!(
            "approximation error {} exceeds bound {}",
            error.qpow(),
            Degree::Finite(bound).qpow()
        )));
    }
    Ok(IntermediateBound {
        k,
        i,
        approximant,
        error,
        bound,
    })
}

/// Weight of level `n` in the invariant measure, `mu_G(E x {n}) = w(n) mu(E)`.
pub fn geo_weight(q: u32, n: i64) -> Ratio<i128> {
    let q = q as i128;
    let e = if n >= 0 { n } else { -n - 1 };
    Ratio::new(q - 1, 2 * q.pow(e as u32))
}

/// `mu_G(E x {n})` from the Haar measure of `E`.
pub fn mu_g(q: u32, haar: Ratio<i128>, n: i64) -> Ratio<i128> {
    geo_weight(q, n) * haar
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::cf::artin_step;

    fn exact(field: &Field, s: &str) -> Element {
        Element::Exact(RationalFunction::parse(field, s).unwrap())
    }

    #[test]
    fn worked_orbit_with_zero_tail() {
        let f3 = Field::prime(3).unwrap();
        let orbit = geo_orbit_product(&exact(&f3, "1/(2*t^3+t^2+2)"), 6).unwrap();
        let want = [
            ("t/(2*t^3+t^2+2)", 1),
            ("t^2/(2*t^3+t^2+2)", 2),
            ("(t^2+2)/t^3", -3),
            ("2/t^2", -2),
            ("2/t", -1),
            ("0", 0),
        ];
        for (s, (f, n)) in orbit.states[1..].iter().zip(want) {
            assert_eq!(s, &GeoState::new(exact(&f3, f), n));
        }
    }

    #[test]
    fn product_matches_convergent_matrix() {
        let f3 = Field::prime(3).unwrap();
        let orbit = geo_orbit_product(&exact(&f3, "t/(2*t^4+t^3+2*t+1)"), 6).unwrap();
        let want = ScaledMatrix::from_polys(
            Poly::zero(&f3),
            Poly::one(&f3),
            Poly::one(&f3),
            Poly::parse(&f3, "2*t^3+t^2+2").unwrap(),
        );
        assert!(orbit.product.same_matrix(&want));
        assert_eq!(orbit.product.normalized(), want);
    }

    #[test]
    fn step_examples() {
        let f3 = Field::prime(3).unwrap();
        let s = geo_step(&GeoState::new(exact(&f3, "2/t"), 0)).unwrap();
        assert_eq!(s, GeoState::new(exact(&f3, "0"), -1));
        let m = geo_matrix(&GeoState::new(exact(&f3, "2/t"), 0)).unwrap();
        assert_eq!(m, ScaledMatrix::from_polys(
            Poly::zero(&f3), Poly::one(&f3), Poly::t(&f3), Poly::parse(&f3, "2*t").unwrap()));
        let z = geo_step(&GeoState::new(exact(&f3, "0"), 5)).unwrap();
        assert_eq!(z.n, 6);
        let m = geo_matrix(&GeoState::new(exact(&f3, "1/t^2"), 0)).unwrap();
        assert_eq!(m, ScaledMatrix::from_polys(
            Poly::one(&f3), Poly::zero(&f3), Poly::zero(&f3), Poly::t(&f3)));
        let m = geo_matrix(&GeoState::new(exact(&f3, "1/t^2"), -2)).unwrap();
        assert_eq!(m.tpow, -1);
        assert!(m.same_matrix(&ScaledMatrix::new(-1, [
            [Poly::one(&f3), Poly::zero(&f3)], [Poly::zero(&f3), Poly::t(&f3)]])));
    }

    #[test]
    fn acceleration_reaches_artin_map() {
        let f2 = Field::prime(2).unwrap();
        let f = exact(&f2, "(t^2+1)/(t^5+t+1)");
        let orbit = geo_orbit_product(&f, 6).unwrap();
        assert_eq!(orbit.states[6], GeoState::new(artin_step(&f).unwrap(), 0));
    }

    #[test]
    fn intermediate_bound_on_worked_example() {
        let f3 = Field::prime(3).unwrap();
        let f = exact(&f3, "t/(2*t^4+t^3+2*t+1)");
        for ell in 3..=8 {
            let b = geo_intermediate_bound(&f, ell).unwrap();
            assert!(b.error < b.bound);
        }
        assert_eq!(geo_intermediate_bound(&f, 7).unwrap().error, Degree::NegInf);
        assert!(geo_intermediate_bound(&f, 9).is_err());
        // At i = deg A_{k+1} the approximant is the next principal convergent.
        let b = geo_intermediate_bound(&f, 6).unwrap();
        assert_eq!(b.approximant, RationalFunction::parse(&f3, "1/(2*t^3+t^2+2)").unwrap());
        assert_eq!(b.error, Degree::Finite(-7));
        assert_eq!(b.bound, -6);
        // At i = 0 the approximant uses the leading term only.
        let b = geo_intermediate_bound(&f, 3).unwrap();
        assert_eq!(b.approximant, RationalFunction::parse(&f3, "1/(2*t^3)").unwrap());
        assert_eq!(b.error, Degree::Finite(-4));
        assert_eq!(b.bound, -3);
    }

    #[test]
    fn level_weights_sum_to_one() {
        for q in [2u32, 3, 5] {
            let l = Ratio::new(1, q as i128);
            assert_eq!(mu_g(q, l, 0), Ratio::new(q as i128 - 1, 2 * q as i128));
            let upper: Ratio<i128> = (0..30).map(|n| mu_g(q, l, n)).sum();
            let lower: Ratio<i128> = (-30..0).map(|n| mu_g(q, l, n)).sum();
            let tail = Ratio::new(1, 2 * (q as i128).pow(30));
            assert_eq!(upper + tail, Ratio::new(1, 2));
            assert_eq!(lower + tail, Ratio::new(1, 2));
        }
        assert_eq!(mu_g(2, Ratio::new(1, 2), 0), Ratio::new(1, 4));
    }
}
