//! Dense polynomials over F_q in ascending-degree order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Degree, Fe, Field};
use crate::error::{Error, Result};

/// A polynomial in F_q[t]; trailing (top) zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Field, c: Fe) -> Poly {
        Poly::from_coeffs(field, vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(field: &Field, c: Fe, k: usize) -> Poly {
        let mut coeffs = vec![Fe::ZERO; k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(field, coeffs)
    }

    /// The indeterminate `t`.
    pub fn t(field: &Field) -> Poly {
        Poly::monomial(field, Fe::ONE, 1)
    }

    pub fn from_coeffs(field: &Field, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Ascending integer coefficients reduced into the prime subfield.
    pub fn from_ints(field: &Field, ints: &[i64]) -> Poly {
        Poly::from_coeffs(field, ints.iter().map(|&n| field.from_int(n)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Fe> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }

    pub fn deg(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            n => Degree::Finite(n as i64 - 1),
        }
    }

    /// Degree of a polynomial known to be nonzero; panics on zero.
    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of the zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    /// Leading term `lc * t^deg`.
    pub fn leading_term(&self) -> Poly {
        match self.coeffs.len() {
            0 => self.clone(),
            n => Poly::monomial(&self.field, self.lc(), n - 1),
        }
    }

    pub fn scale(&self, c: Fe) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        let row = self.field.mul_row(c);
        Poly::from_coeffs(
            &self.field,
            self.coeffs.iter().map(|x| row[x.0 as usize]).collect(),
        )
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Fe::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly {
            field: self.field.clone(),
            coeffs,
        }
    }

    /// Polynomial part of `self / t^k`: drops the `k` lowest coefficients.
    pub fn shift_down(&self, k: usize) -> Poly {
        if k >= self.coeffs.len() {
            return Poly::zero(&self.field);
        }
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// The polynomial made of the terms of degree `< k`.
    pub fn truncate(&self, k: usize) -> Poly {
        let n = k.min(self.coeffs.len());
        Poly::from_coeffs(&self.field, self.coeffs[..n].to_vec())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lc()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == Fe::ONE
    }

    fn add_scaled_shifted(&mut self, other: &Poly, c: Fe, k: usize) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let need = other.coeffs.len() + k;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, Fe::ZERO);
        }
        let f = &self.field;
        let row = f.mul_row(c);
        for (i, x) in other.coeffs.iter().enumerate() {
            let y = &mut self.coeffs[i + k];
            *y = f.add(*y, row[x.0 as usize]);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Division with remainder: `self = q * b + r`, `deg r < deg b`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let db = b.degree();
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lc_inv = f.inv(b.lc())?;
        let mut quot = vec![Fe::ZERO; r.len() - db];
        let neg_b: Vec<Fe> = b.coeffs.iter().map(|&x| f.neg(x)).collect();
        for top in (db..r.len()).rev() {
            let c = f.mul(r[top], lc_inv);
            if c.is_zero() {
                continue;
            }
            quot[top - db] = c;
            let row = f.mul_row(c);
            let base = top - db;
            for (i, x) in neg_b.iter().enumerate() {
                r[base + i] = f.add(r[base + i], row[x.0 as usize]);
            }
        }
        r.truncate(db);
        Ok((Poly::from_coeffs(f, quot), Poly::from_coeffs(f, r)))
    }

    pub fn div_exact(&self, b: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(b)?;
        if !r.is_zero() {
            return Err(Error::Domain(format!("{b} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(b)?.1)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: `(g, s, u)` with `s * self + u * other = g`, g monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut u0, mut u1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let u = &u0 - &(&q * &u1);
            u0 = std::mem::replace(&mut u1, u);
        }
        if r0.is_zero() {
            return (r0, s0, u0);
        }
        let inv = f.inv(r0.lc()).expect("nonzero");
        (r0.scale(inv), s0.scale(inv), u0.scale(inv))
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Parses the text grammar `c*t^k + c*t + c` (see the README).
    pub fn parse(field: &Field, s: &str) -> Result<Poly> {
        let mut s = s.trim();
        while s.starts_with('(') && s.ends_with(')') && balanced(&s[1..s.len() - 1]) {
            s = s[1..s.len() - 1].trim();
        }
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut acc = Poly::zero(field);
        for term in split_top_level(s, '+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in '{s}'")));
            }
            let (coef, power) = parse_term(field, term)?;
            acc = &acc + &Poly::monomial(field, coef, power);
        }
        Ok(acc)
    }
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

/// Splits on `sep` outside of brackets and parentheses.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_coeff(field: &Field, s: &str) -> Result<Fe> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let rep = inner
            .split(',')
            .map(|d| {
                d.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad coefficient digit '{d}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        return field.from_rep(&rep);
    }
    let n: u32 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad coefficient '{s}'")))?;
    if n >= field.p() {
        return Err(Error::Parse(format!(
            "coefficient {n} is not below p = {}",
            field.p()
        )));
    }
    Ok(field.from_int(n as i64))
}

fn parse_power(s: &str) -> Result<usize> {
    let s = s.trim();
    if s == "t" {
        return Ok(1);
    }
    let exp = s
        .strip_prefix("t^")
        .ok_or_else(|| Error::Parse(format!("expected 't' or 't^k', got '{s}'")))?;
    exp.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad exponent '{exp}'")))
}

fn parse_term(field: &Field, term: &str) -> Result<(Fe, usize)> {
    if let Some((c, pw)) = term.split_once('*') {
        Ok((parse_coeff(field, c)?, parse_power(pw)?))
    } else if term.trim_start().starts_with('t') {
        Ok((Fe::ONE, parse_power(term)?))
    } else {
        Ok((parse_coeff(field, term)?, 0))
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let cs = self.field.fmt_elem(c);
            match (k, c == Fe::ONE) {
                (0, _) => write!(f, "{cs}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{cs}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{cs}*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled_shifted(rhs, Fe::ONE, 0);
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        let minus_one = self.field.neg(Fe::ONE);
        out.add_scaled_shifted(rhs, minus_one, 0);
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.field.neg(Fe::ONE))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let row = f.mul_row(a);
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], row[b.0 as usize]);
            }
        }
        Poly::from_coeffs(f, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u32) -> Field {
        match q {
            4 => Field::extension(2, vec![1, 1, 1]).unwrap(),
            _ => Field::prime(q).unwrap(),
        }
    }

    fn p(field: &Field, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    #[test]
    fn divmod_examples() {
        let f3 = f(3);
        let (q, r) = p(&f3, "t^2+1").divmod(&p(&f3, "t+1")).unwrap();
        assert_eq!(q, p(&f3, "t+2"));
        assert_eq!(r, p(&f3, "2"));

        let f2 = f(2);
        let (q, r) = p(&f2, "t^3").divmod(&p(&f2, "t^2+1")).unwrap();
        assert_eq!(q, p(&f2, "t"));
        assert_eq!(r, p(&f2, "t"));

        let a = p(&f3, "2*t^3+t^2+2");
        let (q, r) = a.divmod(&a).unwrap();
        assert!(q.is_one() && r.is_zero());
        assert_eq!(a.divmod(&Poly::zero(&f3)), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let f2 = f(2);
        assert_eq!(p(&f2, "t^2+1").gcd(&p(&f2, "t+1")), p(&f2, "t+1"));
        let f3 = f(3);
        assert!(p(&f3, "t^2+1").gcd(&p(&f3, "t^2+2")).is_one());
        let a = p(&f3, "2*t^2+1");
        assert_eq!(a.gcd(&Poly::zero(&f3)), a.monic());
    }

    #[test]
    fn parse_and_display() {
        let f3 = f(3);
        let a = p(&f3, "2*t^3+t^2+2");
        assert_eq!(a.to_string(), "2*t^3+t^2+2");
        assert_eq!(p(&f3, "(t + 1)").to_string(), "t+1");
        assert!(Poly::parse(&f3, "3*t").is_err());
        assert!(Poly::parse(&f3, "t^").is_err());
        let f4 = f(4);
        let b = p(&f4, "[0,1]*t^2+[1,1]");
        assert_eq!(b.to_string(), "[0,1]*t^2+[1,1]");
        assert!(Poly::parse(&f4, "[0,2]*t").is_err());
    }

    #[test]
    fn degree_sentinel() {
        let f2 = f(2);
        assert_eq!(Poly::zero(&f2).deg(), Degree::NegInf);
        assert_eq!(p(&f2, "t^4+t").deg(), Degree::Finite(4));
    }

    fn arb_poly(q: u32, max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..q, 0..=max_deg + 1).prop_map(move |v| {
            let field = f(q);
            let coeffs = v.into_iter().map(|x| field.elem(x)).collect();
            Poly::from_coeffs(&field, coeffs)
        })
    }

    fn arb_q() -> impl Strategy<Value = u32> {
        prop::sample::select(vec![2u32, 3, 4, 5])
    }

    proptest! {
        #[test]
        fn divmod_reconstructs((a, b) in arb_q().prop_flat_map(|q| (arb_poly(q, 10), arb_poly(q, 6)))) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert!(r.deg() < b.deg());
            prop_assert_eq!(&(&q * &b) + &r, a);
        }

        #[test]
        fn gcd_bezout((a, b) in arb_q().prop_flat_map(|q| (arb_poly(q, 8), arb_poly(q, 8)))) {
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let (g, s, u) = a.ext_gcd(&b);
            prop_assert_eq!(&g, &a.gcd(&b));
            prop_assert!(g.is_monic());
            prop_assert!(a.rem(&g).unwrap().is_zero());
            prop_assert!(b.rem(&g).unwrap().is_zero());
            prop_assert_eq!(&(&s * &a) + &(&u * &b), g);
        }

        #[test]
        fn degree_is_additive((a, b) in arb_q().prop_flat_map(|q| (arb_poly(q, 8), arb_poly(q, 8)))) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!((&a * &b).deg(), a.deg() + b.deg());
        }

        #[test]
        fn display_parses_back(a in arb_q().prop_flat_map(|q| arb_poly(q, 8))) {
            let back = Poly::parse(a.field(), &a.to_string()).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
