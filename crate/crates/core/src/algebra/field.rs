//! The finite field F_q, q = p^e.
//!
//! Elements are stored as indices `0..q`: the base-p digits of an index are
//! the coefficients of the element in the power basis of F_p[x]/(modulus).
//! All operations go through precomputed tables, which keeps the hot
//! polynomial loops branch-free.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size. Tables are `q * q` entries.
pub const MAX_Q: u32 = 1024;

/// An element of F_q, as an index into the field's tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub(crate) u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The table index of this element.
    pub fn index(self) -> u32 {
        self.0 as u32
    }
}

/// Characteristic, extension degree and (for e > 1) the defining modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Ascending coefficients over F_p of a monic irreducible of degree e.
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }
}

struct Tables {
    spec: FieldSpec,
    q: u32,
    add: Vec<Fe>,
    mul: Vec<Fe>,
    neg: Vec<Fe>,
    inv: Vec<Fe>,
}

/// Shared handle to the arithmetic tables of one field.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(q={})", self.q())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// Dense F_p polynomial helpers, used only while building tables.
fn fp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lc_inv = fp_pow(m[dm], p - 2, p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lc_inv % p;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_pow(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u32;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Exhaustive irreducibility test: no monic factor of degree <= e/2.
fn fp_irreducible(m: &[u32], p: u32) -> bool {
    let e = m.len() - 1;
    for d in 1..=e / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                cand.push(x % p);
                x /= p;
            }
            cand.push(1);
            if fp_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Field::build(FieldSpec {
            p,
            e: 1,
            modulus: None,
        })
    }

    /// F_p[x]/(modulus); `modulus` lists ascending coefficients and must be
    /// monic and irreducible of degree >= 2.
    pub fn extension(p: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let mut m = modulus;
        fp_trim(&mut m);
        if m.len() < 3 {
            return Err(Error::InvalidField("modulus must have degree >= 2".into()));
        }
        if m.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient >= p".into()));
        }
        if *m.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !fp_irreducible(&m, p) {
            return Err(Error::InvalidField("modulus is reducible over F_p".into()));
        }
        let e = (m.len() - 1) as u32;
        Field::build(FieldSpec {
            p,
            e,
            modulus: Some(m),
        })
    }

    /// Builds F_q from its size when q is prime; prime powers need a modulus.
    pub fn from_q(q: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        match modulus {
            None => Field::prime(q),
            Some(m) => {
                let e = m.len().saturating_sub(1) as u32;
                if e < 2 {
                    return Field::prime(q);
                }
                let p = (2..=q)
                    .find(|d| q % d == 0)
                    .ok_or_else(|| Error::InvalidField(format!("bad field size {q}")))?;
                if p.checked_pow(e) != Some(q) {
                    return Err(Error::InvalidField(format!(
                        "modulus of degree {e} does not give a field of size {q}"
                    )));
                }
                Field::extension(p, m)
            }
        }
    }

    fn build(spec: FieldSpec) -> Result<Field> {
        let q64 = (spec.p as u64).pow(spec.e);
        if q64 > MAX_Q as u64 {
            return Err(Error::InvalidField(format!(
                "q = {q64} exceeds the supported maximum {MAX_Q}"
            )));
        }
        let q = q64 as u32;
        let p = spec.p;
        let e = spec.e as usize;
        let digits = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(e);
            let mut x = x;
            for _ in 0..e {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let undigits = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let qs = q as usize;
        let mut add = vec![Fe(0); qs * qs];
        let mut mul = vec![Fe(0); qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = Fe(undigits(&s) as u16);
                let mut prod = vec![0u32; 2 * e];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = match &spec.modulus {
                    Some(m) => fp_rem(&prod, m, p),
                    None => {
                        fp_trim(&mut prod);
                        prod
                    }
                };
                r.resize(e, 0);
                mul[(a * q + b) as usize] = Fe(undigits(&r) as u16);
            }
        }
        let mut neg = vec![Fe(0); qs];
        let mut inv = vec![Fe(0); qs];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize].0 == 0 {
                    neg[a as usize] = Fe(b as u16);
                }
                if mul[(a * q + b) as usize].0 == 1 {
                    inv[a as usize] = Fe(b as u16);
                }
            }
        }
        Ok(Field(Arc::new(Tables {
            spec,
            q,
            add,
            mul,
            neg,
            inv,
        })))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn e(&self) -> u32 {
        self.0.spec.e
    }

    /// Element from its table index; panics if out of range.
    pub fn elem(&self, index: u32) -> Fe {
        assert!(index < self.q(), "field index {index} out of range");
        Fe(index as u16)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        let p = self.p() as i64;
        Fe(n.rem_euclid(p) as u16)
    }

    /// Element from its coefficient vector in the power basis.
    pub fn from_rep(&self, rep: &[u32]) -> Result<Fe> {
        if rep.len() > self.e() as usize {
            return Err(Error::Parse(format!(
                "element has {} coordinates, field degree is {}",
                rep.len(),
                self.e()
            )));
        }
        if let Some(&bad) = rep.iter().find(|&&c| c >= self.p()) {
            return Err(Error::Parse(format!(
                "coefficient {bad} is not below p = {}",
                self.p()
            )));
        }
        let p = self.p();
        Ok(Fe(rep.iter().rev().fold(0u32, |acc, &d| acc * p + d) as u16))
    }

    /// Coefficient vector (length e) in the power basis.
    pub fn rep(&self, x: Fe) -> Vec<u32> {
        let p = self.p();
        let mut v = Vec::with_capacity(self.e() as usize);
        let mut n = x.0 as u32;
        for _ in 0..self.e() {
            v.push(n % p);
            n /= p;
        }
        v
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.0.add[a.0 as usize * self.0.q as usize + b.0 as usize]
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.0.neg[a.0 as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.0.mul[a.0 as usize * self.0.q as usize + b.0 as usize]
    }

    /// Row of the multiplication table for a fixed left factor.
    #[inline]
    pub(crate) fn mul_row(&self, a: Fe) -> &[Fe] {
        let q = self.0.q as usize;
        &self.0.mul[a.0 as usize * q..(a.0 as usize + 1) * q]
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.0.inv[a.0 as usize])
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n`; negative exponents invert first.
    pub fn pow(&self, a: Fe, n: i64) -> Result<Fe> {
        let mut base = if n < 0 { self.inv(a)? } else { a };
        let mut e = n.unsigned_abs();
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q()).map(|i| Fe(i as u16))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> {
        (1..self.q()).map(|i| Fe(i as u16))
    }

    /// All `r` with `r^n = a`, by exhaustive search.
    pub fn nth_roots(&self, a: Fe, n: u64) -> Vec<Fe> {
        self.elements()
            .filter(|&r| self.pow(r, n as i64).map(|v| v == a).unwrap_or(false))
            .collect()
    }

    pub fn fmt_elem(&self, x: Fe) -> String {
        if self.e() == 1 {
            x.0.to_string()
        } else {
            let parts: Vec<String> = self.rep(x).iter().map(|d| d.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Field {
        Field::extension(2, vec![1, 1, 1]).unwrap()
    }

    #[test]
    fn prime_field_examples() {
        let f = Field::prime(3).unwrap();
        let two = f.elem(2);
        assert_eq!(f.mul(two, two), Fe::ONE);
        assert_eq!(f.inv(two).unwrap(), two);
        assert_eq!(f.inv(Fe::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn gf4_x_squared_reduces() {
        let f = gf4();
        let x = f.from_rep(&[0, 1]).unwrap();
        let x_plus_1 = f.from_rep(&[1, 1]).unwrap();
        assert_eq!(f.mul(x, x), x_plus_1);
    }

    #[test]
    fn field_axioms_and_fermat() {
        for field in [
            Field::prime(2).unwrap(),
            Field::prime(5).unwrap(),
            gf4(),
            Field::extension(3, vec![1, 0, 1]).unwrap(),
        ] {
            let q = field.q() as i64;
            for a in field.elements() {
                assert_eq!(field.add(a, field.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(field.pow(a, q - 1).unwrap(), Fe::ONE);
                    assert_eq!(field.mul(a, field.inv(a).unwrap()), Fe::ONE);
                }
                for b in field.elements() {
                    assert_eq!(field.mul(a, b), field.mul(b, a));
                    for c in field.elements() {
                        let lhs = field.mul(a, field.add(b, c));
                        let rhs = field.add(field.mul(a, b), field.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(Field::prime(4).is_err());
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(Field::extension(2, vec![1, 0, 1]).is_err());
        assert!(Field::from_q(4, None).is_err());
        assert!(Field::from_q(4, Some(vec![1, 1, 1])).is_ok());
        assert!(Field::from_q(8, Some(vec![1, 1, 1])).is_err());
    }

    #[test]
    fn roots() {
        let f = Field::prime(5).unwrap();
        // squares mod 5: 1, 4
        assert_eq!(f.nth_roots(f.elem(4), 2), vec![f.elem(2), f.elem(3)]);
        assert!(f.nth_roots(f.elem(2), 2).is_empty());
    }
}
