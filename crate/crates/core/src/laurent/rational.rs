use std::fmt;

use crate::algebra::{split_top_level, Degree, Field, Poly};
use crate::error::{Error, Result};

/// An exact element `num / den` of F_q(t), kept reduced with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rational({self})")
    }
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field().clone();
        if num.is_zero() {
            return Ok(RationalFunction::zero(&field));
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let inv = field.inv(den.lc())?;
        Ok(RationalFunction {
            num: num.scale(inv),
            den: den.scale(inv),
        })
    }

    pub fn zero(field: &Field) -> RationalFunction {
        RationalFunction {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn one(field: &Field) -> RationalFunction {
        RationalFunction::from_poly(Poly::one(field))
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        let den = Poly::one(p.field());
        RationalFunction { num: p, den }
    }

    /// `1 / p`.
    pub fn recip_poly(p: &Poly) -> Result<RationalFunction> {
        RationalFunction::new(Poly::one(p.field()), p.clone())
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(field: &Field, k: i64) -> RationalFunction {
        let m = Poly::monomial(field, crate::algebra::Fe::ONE, k.unsigned_abs() as usize);
        if k >= 0 {
            RationalFunction::from_poly(m)
        } else {
            RationalFunction {
                num: Poly::one(field),
                den: m,
            }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// `deg num - deg den`, so that `|f| = q^deg f`.
    pub fn deg(&self) -> Degree {
        match self.num.deg() {
            Degree::NegInf => Degree::NegInf,
            Degree::Finite(d) => Degree::Finite(d - self.den.degree() as i64),
        }
    }

    /// The coefficient of `t^{deg f}`; zero for zero.
    pub fn lc(&self) -> crate::algebra::Fe {
        self.num.lc()
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RationalFunction::new(num, &self.den * &other.den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &other.num, &self.den * &other.den)
            .expect("nonzero denominator")
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalFunction {
        RationalFunction::new(&self.num * p, self.den.clone()).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<RationalFunction> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        Ok(self.mul(&other.inv()?))
    }

    /// The polynomial part `[f]`.
    pub fn poly_part(&self) -> Poly {
        self.num.divmod(&self.den).expect("nonzero denominator").0
    }

    /// The fractional part `f - [f]`, an element of `|x| < 1`.
    pub fn frac_part(&self) -> RationalFunction {
        let r = self.num.rem(&self.den).expect("nonzero denominator");
        RationalFunction::new(r, self.den.clone()).expect("nonzero denominator")
    }

    /// Parses `P/Q` or `P` using the polynomial grammar.
    pub fn parse(field: &Field, s: &str) -> Result<RationalFunction> {
        let parts = split_top_level(s, '/');
        match parts.as_slice() {
            [p] => Ok(RationalFunction::from_poly(Poly::parse(field, p)?)),
            [p, q] => RationalFunction::new(Poly::parse(field, p)?, Poly::parse(field, q)?)
                .map_err(|_| Error::Parse(format!("zero denominator in '{s}'"))),
            _ => Err(Error::Parse(format!("expected P/Q, got '{s}'"))),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl serde::Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(field: &Field, s: &str) -> RationalFunction {
        RationalFunction::parse(field, s).unwrap()
    }

    #[test]
    fn reduces_and_normalizes() {
        let f3 = Field::prime(3).unwrap();
        let x = r(&f3, "(2*t^2+2)/(2*t+2)");
        assert!(x.den().is_monic());
        assert_eq!(x, r(&f3, "(t^2+1)/(t+1)"));
        let f2 = Field::prime(2).unwrap();
        assert_eq!(r(&f2, "(t^2+1)/(t+1)"), r(&f2, "t+1"));
    }

    #[test]
    fn parts() {
        let f2 = Field::prime(2).unwrap();
        let f = r(&f2, "t/(t^2+1)");
        assert_eq!(f.deg(), Degree::Finite(-1));
        assert!(f.poly_part().is_zero());
        let tf = f.mul_poly(&Poly::t(&f2));
        assert_eq!(tf.frac_part(), r(&f2, "1/(t^2+1)"));
        assert_eq!(f.inv().unwrap().frac_part(), r(&f2, "1/t"));
    }

    #[test]
    fn parse_errors() {
        let f2 = Field::prime(2).unwrap();
        assert!(RationalFunction::parse(&f2, "1/0").is_err());
        assert!(RationalFunction::parse(&f2, "1/t/t").is_err());
        assert!(RationalFunction::parse(&f2, "2*t").is_err());
    }
}
