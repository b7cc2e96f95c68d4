//! Balls and coefficient cylinders in the unit ball `O`, with the Haar
//! measure `mu(O) = 1`.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::algebra::{Degree, Fe, Field, Poly};
use crate::error::{Error, Result};
use crate::laurent::RationalFunction;

/// `L = {|x| < 1}` or `J_0 = {|x| = 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Component {
    #[serde(rename = "L")]
    L,
    #[serde(rename = "J0")]
    J0,
}

impl Component {
    /// Haar measure of the component.
    pub fn haar(self, q: u32) -> Ratio<i128> {
        let q = q as i128;
        match self {
            Component::L => Ratio::new(1, q),
            Component::J0 => Ratio::new(q - 1, q),
        }
    }
}

/// `q^e` as an exact rational.
pub fn qpow(q: u32, e: i64) -> Ratio<i128> {
    let q = q as i128;
    if e >= 0 {
        Ratio::from_integer(q.pow(e as u32))
    } else {
        Ratio::new(1, q.pow((-e) as u32))
    }
}

fn t_pow(field: &Field, k: i64) -> RationalFunction {
    RationalFunction::t_pow(field, k)
}

/// The terms of `c` of degree `> r`.
fn terms_above(c: &RationalFunction, r: i64) -> RationalFunction {
    let field = c.field();
    let p = c.mul(&t_pow(field, -r - 1)).poly_part();
    RationalFunction::from_poly(p).mul(&t_pow(field, r + 1))
}

/// The ball `{x : |x - c| <= q^r}`, with `c` reduced to its terms above `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ball {
    center: RationalFunction,
    radius: i64,
}

impl Ball {
    pub fn new(center: &RationalFunction, radius: i64) -> Ball {
        Ball {
            center: terms_above(center, radius),
            radius,
        }
    }

    pub fn center(&self) -> &RationalFunction {
        &self.center
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn field(&self) -> &Field {
        self.center.field()
    }

    pub fn haar(&self) -> Ratio<i128> {
        qpow(self.field().q(), self.radius)
    }

    pub fn contains_zero(&self) -> bool {
        self.center.is_zero()
    }

    pub fn contains_point(&self, x: &RationalFunction) -> bool {
        x.sub(&self.center).deg() <= self.radius
    }

    /// `self` is inside `other`.
    pub fn is_within(&self, other: &Ball) -> bool {
        self.radius <= other.radius && other.contains_point(&self.center)
    }

    pub fn is_disjoint(&self, other: &Ball) -> bool {
        !self.is_within(other) && !other.is_within(self)
    }

    /// The smaller ball if nested, `None` if disjoint.
    pub fn intersect(&self, other: &Ball) -> Option<Ball> {
        if self.is_within(other) {
            Some(self.clone())
        } else if other.is_within(self) {
            Some(other.clone())
        } else {
            None
        }
    }

    /// `x + a`.
    pub fn translate(&self, a: &RationalFunction) -> Ball {
        Ball::new(&self.center.add(a), self.radius)
    }

    /// `s x` for a nonzero scalar `s`.
    pub fn scale(&self, s: &RationalFunction) -> Result<Ball> {
        match s.deg() {
            Degree::Finite(d) => Ok(Ball::new(&self.center.mul(s), self.radius + d)),
            Degree::NegInf => Err(Error::DivisionByZero),
        }
    }

    /// `1/x`; needs `0` outside the ball, where `|x| = |c|` throughout.
    pub fn invert(&self) -> Result<Ball> {
        let e = self
            .center
            .deg()
            .finite()
            .ok_or_else(|| Error::Domain("ball contains 0, inversion is not a ball".into()))?;
        Ok(Ball::new(&self.center.inv()?, self.radius - 2 * e))
    }

    /// Image under `x -> (a x + b)/(c x + d)` with no pole in the ball.
    pub fn mobius(&self, m: &[[RationalFunction; 2]; 2]) -> Result<Ball> {
        let [[a, b], [c, d]] = m;
        if c.is_zero() {
            return Ok(self.scale(&a.div(d)?)?.translate(&b.div(d)?));
        }
        // a/c + (b c - a d) / (c (c x + d))
        let det = b.mul(c).sub(&a.mul(d));
        let inner = self.scale(c)?.translate(d).invert()?;
        Ok(inner.scale(&det.div(c)?)?.translate(&a.div(c)?))
    }

    /// Splits by polynomial part: pairs `(A, D)` with `x = A + g`, `g` in the
    /// ball `D` inside `L`, covering the whole ball.
    pub fn poly_parts(&self) -> Vec<(Poly, Ball)> {
        let field = self.field().clone();
        let base = self.center.poly_part();
        if self.radius < 0 {
            let frac = Ball::new(&self.center.frac_part(), self.radius);
            return vec![(base, frac)];
        }
        let free = (self.radius + 1) as usize;
        let q = field.q() as usize;
        let whole_l = Ball::new(&RationalFunction::zero(&field), -1);
        (0..q.pow(free as u32))
            .map(|mut i| {
                let digits: Vec<Fe> = (0..free)
                    .map(|_| {
                        let c = field.elem((i % q) as u32);
                        i /= q;
                        c
                    })
                    .collect();
                // The reduced centre has no terms of degree <= radius.
                (&base + &Poly::from_coeffs(&field, digits), whole_l.clone())
            })
            .collect()
    }

    /// The component of `O` containing the ball, if it lies in `O`.
    pub fn component(&self) -> Option<Component> {
        if self.radius >= 0 {
            return None;
        }
        match self.center.deg() {
            Degree::NegInf => Some(Component::L),
            Degree::Finite(d) if d < 0 => Some(Component::L),
            Degree::Finite(0) => Some(Component::J0),
            _ => None,
        }
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}, q^{})", self.center, self.radius)
    }
}

/// A coefficient cylinder in `L` or `J_0`: the leading coefficient (degree
/// 0, nonzero, `J_0` only) and the coefficients of degrees `-1, ..., -d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CylinderSet {
    pub component: Component,
    /// Orbit level for the geometric map's phase space `L x Z`.
    pub level: Option<i64>,
    pub lead: Option<u32>,
    pub pattern: Vec<u32>,
}

impl CylinderSet {
    pub fn depth(&self) -> usize {
        self.pattern.len()
    }

    pub fn ball(&self, field: &Field) -> Ball {
        let mut coeffs: Vec<Fe> = self.pattern.iter().rev().map(|&c| field.elem(c)).collect();
        coeffs.push(field.elem(self.lead.unwrap_or(0)));
        let d = self.pattern.len() as i64;
        let c = RationalFunction::from_poly(Poly::from_coeffs(field, coeffs)).mul(&t_pow(field, -d));
        Ball::new(&c, -d - 1)
    }

    /// Haar measure `q^-#fixed * mu(component)`, i.e. `q^(-d-1)`.
    pub fn haar(&self, q: u32) -> Ratio<i128> {
        qpow(q, -(self.pattern.len() as i64) - 1)
    }

    /// All cylinders of depth `d` in the component.
    pub fn enumerate(q: u32, component: Component, depth: usize, level: Option<i64>) -> Vec<CylinderSet> {
        let leads: Vec<Option<u32>> = match component {
            Component::L => vec![None],
            Component::J0 => (1..q).map(Some).collect(),
        };
        let count = (q as usize).pow(depth as u32);
        let mut out = Vec::with_capacity(leads.len() * count);
        for lead in leads {
            for i in 0..count {
                let pattern = (0..depth)
                    .map(|j| ((i / (q as usize).pow((depth - 1 - j) as u32)) % q as usize) as u32)
                    .collect();
                out.push(CylinderSet {
                    component,
                    level,
                    lead,
                    pattern,
                });
            }
        }
        out
    }

    /// The cylinder of depth `d` containing a value with the given
    /// coefficients of degrees `0, -1, ..., -d`.
    pub fn of_coeffs(level: Option<i64>, coeffs: &[Fe]) -> CylinderSet {
        let lead = coeffs[0];
        CylinderSet {
            component: if lead.is_zero() { Component::L } else { Component::J0 },
            level,
            lead: (!lead.is_zero()).then_some(lead.0 as u32),
            pattern: coeffs[1..].iter().map(|c| c.0 as u32).collect(),
        }
    }
}

impl fmt::Display for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.component {
            Component::L => write!(f, "L")?,
            Component::J0 => write!(f, "J0[{}]", self.lead.unwrap_or(0))?,
        }
        let digits: Vec<String> = self.pattern.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", digits.join(","))?;
        if let Some(n) = self.level {
            write!(f, "@{n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(field: &Field, s: &str) -> RationalFunction {
        RationalFunction::parse(field, s).unwrap()
    }

    #[test]
    fn inversion_and_mobius() {
        let f3 = Field::prime(3).unwrap();
        // 1/(t + L) = B(1/t, -3).
        let b = Ball::new(&r(&f3, "t"), -1);
        let inv = b.invert().unwrap();
        assert_eq!(inv, Ball::new(&r(&f3, "1/t"), -3));
        assert_eq!(inv.invert().unwrap(), b);
        let m = [
            [r(&f3, "0"), r(&f3, "1")],
            [r(&f3, "1"), r(&f3, "t")],
        ];
        assert_eq!(Ball::new(&r(&f3, "0"), -1).mobius(&m).unwrap(), inv);
        assert!(Ball::new(&r(&f3, "1/t"), -1).invert().is_err());
    }

    #[test]
    fn cylinders_partition_components() {
        for q in [2u32, 3] {
            let f = Field::prime(q).unwrap();
            for comp in [Component::L, Component::J0] {
                let cs = CylinderSet::enumerate(q, comp, 2, None);
                let total: Ratio<i128> = cs.iter().map(|c| c.haar(q)).sum();
                assert_eq!(total, comp.haar(q));
                for (i, a) in cs.iter().enumerate() {
                    assert_eq!(a.ball(&f).component(), Some(comp));
                    for b in &cs[i + 1..] {
                        assert!(a.ball(&f).is_disjoint(&b.ball(&f)));
                    }
                }
            }
        }
    }

    #[test]
    fn poly_parts_cover() {
        let f2 = Field::prime(2).unwrap();
        let b = Ball::new(&r(&f2, "t^3+t^2"), 1);
        let parts = b.poly_parts();
        assert_eq!(parts.len(), 4);
        let total: Ratio<i128> = parts.iter().map(|(_, d)| d.haar()).sum();
        assert_eq!(total, b.haar());
        let b = Ball::new(&r(&f2, "t^2+1/t"), -3);
        assert_eq!(b.poly_parts(), vec![(Poly::parse(&f2, "t").unwrap(), Ball::new(&r(&f2, "1/t"), -3))]);
    }
}
