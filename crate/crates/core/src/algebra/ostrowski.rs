//! Greedy expansion of a polynomial in the basis of convergent denominators.
//!
//! Given `Q_0 = 1, Q_1, Q_2, ...` with strictly increasing degrees and
//! `deg V = deg Q_{k+1}`, writes
//! `V = a Q_{k+1} + sum_{i=s..k} B_{i+1} Q_i` with
//! `deg B_{i+1} < deg Q_{i+1} - deg Q_i = deg A_{i+1}`.

use super::{Fe, Poly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ostrowski {
    /// Leading digit, nonzero.
    pub a: Fe,
    /// `deg V = deg Q_{k+1}`.
    pub k: usize,
    /// Lowest index `i` with `B_{i+1} != 0`; `k + 1` when every digit is zero.
    pub s: usize,
    /// `b[j] = B_{s+j+1}` for `j = 0..=k-s`.
    pub b: Vec<Poly>,
}

impl Ostrowski {
    /// `B_{i+1}`, zero outside the stored range.
    pub fn digit(&self, i: usize) -> Option<&Poly> {
        if i < self.s || i > self.k {
            None
        } else {
            Some(&self.b[i - self.s])
        }
    }

    /// Rebuilds `V` from the digits.
    pub fn reconstruct(&self, qs: &[Poly]) -> Poly {
        let mut v = qs[self.k + 1].scale(self.a);
        for (j, bj) in self.b.iter().enumerate() {
            v = &v + &(bj * &qs[self.s + j]);
        }
        v
    }
}

/// Decomposes `v` against the denominators `qs[i] = Q_i` (with `qs[0] = 1`).
pub fn ostrowski_decompose(v: &Poly, qs: &[Poly]) -> Result<Ostrowski> {
    let dv = v
        .deg()
        .finite()
        .ok_or_else(|| Error::Domain("cannot decompose the zero polynomial".into()))?;
    let max_deg = qs.last().map(|q| q.degree() as i64).unwrap_or(0);
    if dv > max_deg {
        return Err(Error::DepthExceeded {
            requested: dv as usize,
            available: max_deg as usize,
        });
    }
    let k1 = qs
        .iter()
        .position(|q| q.degree() as i64 == dv)
        .filter(|&i| i >= 1)
        .ok_or_else(|| {
            Error::PreconditionFailed(format!(
                "deg V = {dv} is not the degree of any Q_k with k >= 1"
            ))
        })?;
    let field = v.field();
    let a = field.div(v.lc(), qs[k1].lc())?;
    let mut rest = v - &qs[k1].scale(a);
    let k = k1 - 1;
    let mut digits = vec![Poly::zero(field); k + 1];
    for i in (0..=k).rev() {
        let (bi, r) = rest.divmod(&qs[i])?;
        digits[i] = bi;
        rest = r;
    }
    debug_assert!(rest.is_zero());
    let s = digits.iter().position(|d| !d.is_zero()).unwrap_or(k + 1);
    Ok(Ostrowski {
        a,
        k,
        s,
        b: digits.split_off(s),
    })
}
