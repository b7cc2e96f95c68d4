use super::{Element, LaurentSeries, RationalFunction};
use crate::algebra::{Field, Poly};
use crate::error::{Error, Result};

/// An element of `|x| < 1` given by its partial quotients: a finite
/// preperiod followed by an optional repeating period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfSpecInput {
    pub preperiod: Vec<Poly>,
    pub period: Vec<Poly>,
}

impl CfSpecInput {
    pub fn new(preperiod: Vec<Poly>, period: Vec<Poly>) -> Result<CfSpecInput> {
        if let Some(a) = preperiod.iter().chain(&period).find(|a| a.deg() < 1) {
            return Err(Error::Domain(format!(
                "partial quotient {a} has degree below 1"
            )));
        }
        Ok(CfSpecInput { preperiod, period })
    }

    /// Parses `"A1;A2;..."` and an optional period in the same form.
    pub fn parse(field: &Field, cf: &str, period: Option<&str>) -> Result<CfSpecInput> {
        let list = |s: &str| -> Result<Vec<Poly>> {
            s.split(';')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| Poly::parse(field, p))
                .collect()
        };
        CfSpecInput::new(list(cf)?, period.map(list).transpose()?.unwrap_or_default())
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// `A_i` for `i >= 1`; `None` past the end of a finite expansion.
    pub fn partial_quotient(&self, i: usize) -> Option<&Poly> {
        assert!(i >= 1, "partial quotients are indexed from 1");
        let j = i - 1;
        if j < self.preperiod.len() {
            Some(&self.preperiod[j])
        } else if self.period.is_empty() {
            None
        } else {
            Some(&self.period[(j - self.preperiod.len()) % self.period.len()])
        }
    }

    /// Exact value for a finite expansion, otherwise a series to `floor`.
    pub fn value(&self, field: &Field, floor: i64) -> Element {
        if self.is_finite() {
            let (p, q) = convergent(field, self.preperiod.iter());
            Element::Exact(RationalFunction::new(p, q).expect("Q_k is nonzero"))
        } else {
            Element::Series(series_from_cf(field, self, floor))
        }
    }
}

/// `(P_n, Q_n)` after feeding the given partial quotients.
fn convergent<'a>(field: &Field, parts: impl Iterator<Item = &'a Poly>) -> (Poly, Poly) {
    let (mut p0, mut p1) = (Poly::one(field), Poly::zero(field));
    let (mut q0, mut q1) = (Poly::zero(field), Poly::one(field));
    for a in parts {
        let p2 = &(a * &p1) + &p0;
        let q2 = &(a * &q1) + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    (p1, q1)
}

/// The value of the expansion to precision `floor`.
///
/// Uses the convergent `P_n/Q_n` with `deg Q_n + deg Q_{n+1} >= -floor`,
/// whose distance to the limit is `q^-(deg Q_n + deg Q_{n+1})`.
pub fn series_from_cf(field: &Field, spec: &CfSpecInput, floor: i64) -> LaurentSeries {
    if spec.is_finite() {
        let (p, q) = convergent(field, spec.preperiod.iter());
        return LaurentSeries::from_rational(&RationalFunction::new(p, q).expect("Q_k"), floor);
    }
    let mut n = 0usize;
    let mut deg_q = 0i64;
    loop {
        let next = deg_q + spec.partial_quotient(n + 1).unwrap().degree() as i64;
        if deg_q + next >= -floor {
            break;
        }
        deg_q = next;
        n += 1;
    }
    let (p, q) = convergent(field, (1..=n).map(|i| spec.partial_quotient(i).unwrap()));
    LaurentSeries::from_rational(&RationalFunction::new(p, q).expect("Q_k"), floor)
}
