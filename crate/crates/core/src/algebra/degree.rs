use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

/// A degree in Z extended by `-inf`, the degree of zero.
///
/// Also used as the exponent of an absolute value: `|f| = q^deg(f)`,
/// with `|0| = q^-inf = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degree {
    NegInf,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, Degree::NegInf)
    }

    /// Absolute value rendered symbolically, e.g. `q^-4`, or `0`.
    pub fn qpow(self) -> String {
        match self {
            Degree::NegInf => "0".to_string(),
            Degree::Finite(d) => format!("q^{d}"),
        }
    }
}

impl From<i64> for Degree {
    fn from(d: i64) -> Self {
        Degree::Finite(d)
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Degree::NegInf, Degree::NegInf) => Ordering::Equal,
            (Degree::NegInf, _) => Ordering::Less,
            (_, Degree::NegInf) => Ordering::Greater,
            (Degree::Finite(a), Degree::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq<i64> for Degree {
    fn eq(&self, other: &i64) -> bool {
        *self == Degree::Finite(*other)
    }
}

impl PartialOrd<i64> for Degree {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Degree::Finite(*other)))
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl Add<i64> for Degree {
    type Output = Degree;
    fn add(self, rhs: i64) -> Degree {
        self + Degree::Finite(rhs)
    }
}

impl Sub<i64> for Degree {
    type Output = Degree;
    fn sub(self, rhs: i64) -> Degree {
        self + Degree::Finite(-rhs)
    }
}

/// `-deg`; only meaningful on finite values (`-(-inf)` stays `-inf`, callers
/// never negate the degree of zero).
impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        match self {
            Degree::Finite(d) => Degree::Finite(-d),
            Degree::NegInf => Degree::NegInf,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::NegInf => s.serialize_str("-inf"),
            Degree::Finite(d) => s.serialize_i64(*d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neg_inf_is_below_everything() {
        assert!(Degree::NegInf < Degree::Finite(i64::MIN));
        assert!(Degree::NegInf < -1000);
        assert_eq!(Degree::NegInf + 5, Degree::NegInf);
        assert_eq!(Degree::Finite(3) + Degree::Finite(-5), Degree::Finite(-2));
        assert_eq!(Degree::Finite(-4).qpow(), "q^-4");
        assert_eq!(Degree::NegInf.qpow(), "0");
    }
}
