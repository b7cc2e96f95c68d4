use std::fmt;

use super::{LaurentSeries, RationalFunction};
use crate::algebra::{Degree, Fe, Field, Poly};
use crate::error::Result;

/// An element of K, either exact or a precision-tracked series.
#[derive(Clone, PartialEq, Eq)]
pub enum Element {
    Exact(RationalFunction),
    Series(LaurentSeries),
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Exact(r) => write!(f, "Exact({r})"),
            Element::Series(s) => write!(f, "Series({s})"),
        }
    }
}

impl From<RationalFunction> for Element {
    fn from(r: RationalFunction) -> Self {
        Element::Exact(r)
    }
}

impl From<LaurentSeries> for Element {
    fn from(s: LaurentSeries) -> Self {
        Element::Series(s)
    }
}

impl Element {
    pub fn field(&self) -> &Field {
        match self {
            Element::Exact(r) => r.field(),
            Element::Series(s) => s.field(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Element::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&RationalFunction> {
        match self {
            Element::Exact(r) => Some(r),
            Element::Series(_) => None,
        }
    }

    /// Precision floor; `None` for exact values.
    pub fn floor(&self) -> Option<i64> {
        match self {
            Element::Exact(_) => None,
            Element::Series(s) => Some(s.floor()),
        }
    }

    /// True only for an exact zero.
    pub fn is_zero(&self) -> bool {
        matches!(self, Element::Exact(r) if r.is_zero())
    }

    pub fn deg(&self) -> Result<Degree> {
        match self {
            Element::Exact(r) => Ok(r.deg()),
            Element::Series(s) => s.deg().map(Degree::Finite),
        }
    }

    pub fn lc(&self) -> Result<Fe> {
        match self {
            Element::Exact(r) => Ok(r.lc()),
            Element::Series(s) => s.lc(),
        }
    }

    /// The value as a series known down to `floor` (coarser if already so).
    pub fn to_series(&self, floor: i64) -> LaurentSeries {
        match self {
            Element::Exact(r) => LaurentSeries::from_rational(r, floor),
            Element::Series(s) => s.coarsen(floor),
        }
    }

    pub fn neg(&self) -> Element {
        match self {
            Element::Exact(r) => r.neg().into(),
            Element::Series(s) => s.neg().into(),
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Exact(a), Element::Exact(b)) => a.add(b).into(),
            (Element::Series(a), Element::Series(b)) => a.add(b).into(),
            (Element::Exact(a), Element::Series(b)) | (Element::Series(b), Element::Exact(a)) => {
                LaurentSeries::from_rational(a, b.floor()).add(b).into()
            }
        }
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Exact(a), Element::Exact(b)) => a.mul(b).into(),
            (Element::Series(a), Element::Series(b)) => a.mul(b).into(),
            (Element::Exact(a), Element::Series(b)) | (Element::Series(b), Element::Exact(a)) => {
                match a.deg().finite() {
                    None => RationalFunction::zero(a.field()).into(),
                    Some(da) => {
                        let m = b.floor() + da - b.ub();
                        LaurentSeries::from_rational(a, m).mul(b).into()
                    }
                }
            }
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> Element {
        match self {
            Element::Exact(r) => r.mul_poly(p).into(),
            Element::Series(s) if p.is_zero() => RationalFunction::zero(s.field()).into(),
            Element::Series(s) => s.mul_poly(p).into(),
        }
    }

    pub fn inv(&self) -> Result<Element> {
        match self {
            Element::Exact(r) => r.inv().map(Element::from),
            Element::Series(s) => s.inv().map(Element::from),
        }
    }

    pub fn div(&self, other: &Element) -> Result<Element> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn poly_part(&self) -> Result<Poly> {
        match self {
            Element::Exact(r) => Ok(r.poly_part()),
            Element::Series(s) => s.poly_part(),
        }
    }

    pub fn frac_part(&self) -> Result<Element> {
        match self {
            Element::Exact(r) => Ok(r.frac_part().into()),
            Element::Series(s) => s.frac_part().map(Element::from),
        }
    }

    /// True when `r` is consistent with this value.
    pub fn matches(&self, r: &RationalFunction) -> bool {
        match self {
            Element::Exact(a) => a == r,
            Element::Series(s) => s.contains(r),
        }
    }

    /// True when the two values agree to their common precision.
    pub fn agrees_with(&self, other: &Element) -> bool {
        match (self, other) {
            (Element::Exact(a), Element::Exact(b)) => a == b,
            (Element::Exact(a), Element::Series(s)) | (Element::Series(s), Element::Exact(a)) => {
                s.contains(a)
            }
            (Element::Series(a), Element::Series(b)) => a.agrees_with(b),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Exact(r) => write!(f, "{r}"),
            Element::Series(s) => write!(f, "{s}"),
        }
    }
}

impl serde::Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Element::Exact(r) => r.serialize(s),
            Element::Series(x) => x.serialize(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_arithmetic_stays_consistent() {
        let f3 = Field::prime(3).unwrap();
        let a = RationalFunction::parse(&f3, "(t+2)/(t^3+t+1)").unwrap();
        let b = RationalFunction::parse(&f3, "1/(2*t^2+1)").unwrap();
        let sa = Element::Series(LaurentSeries::from_rational(&a, -30));
        let eb = Element::Exact(b.clone());
        assert!(sa.add(&eb).matches(&a.add(&b)));
        assert!(sa.mul(&eb).matches(&a.mul(&b)));
        assert!(eb.mul(&sa).matches(&a.mul(&b)));
        assert!(sa.div(&eb).unwrap().matches(&a.div(&b).unwrap()));
        assert!(eb.div(&sa).unwrap().matches(&b.div(&a).unwrap()));
        assert!(sa.mul(&Element::Exact(RationalFunction::zero(&f3))).is_zero());
    }
}
