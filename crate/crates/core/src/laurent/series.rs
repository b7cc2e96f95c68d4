use std::fmt;

use serde::ser::SerializeStruct;

use super::RationalFunction;
use crate::algebra::{split_top_level, Fe, Field, Poly};
use crate::error::{Error, Result};

/// A Laurent series in `t^-1` known modulo `t^floor O`.
///
/// Coefficients of degree `> floor` are exact; the true value lies in the
/// ball `|x - c| <= q^floor` around the stored window `c`. Leading zeros are
/// stripped, so a nonempty window starts at the degree of the series. An
/// all-zero window has `top == floor` and an undetermined degree.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    top: i64,
    coeffs: Vec<Fe>,
    floor: i64,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({self})")
    }
}

impl LaurentSeries {
    /// `coeffs` lists degrees `top, top-1, ..., floor+1`.
    pub fn new(field: &Field, top: i64, coeffs: Vec<Fe>, floor: i64) -> Result<LaurentSeries> {
        if top - floor != coeffs.len() as i64 {
            return Err(Error::Domain(format!(
                "window top={top}, floor={floor} needs {} coefficients, got {}",
                top - floor,
                coeffs.len()
            )));
        }
        Ok(LaurentSeries::normalized(field, top, coeffs, floor))
    }

    fn normalized(field: &Field, mut top: i64, coeffs: Vec<Fe>, floor: i64) -> LaurentSeries {
        let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len());
        top -= lead as i64;
        let coeffs = if lead == 0 {
            coeffs
        } else {
            coeffs[lead..].to_vec()
        };
        LaurentSeries {
            field: field.clone(),
            top,
            coeffs,
            floor,
        }
    }

    /// The ball `|x| <= q^floor`.
    pub fn zero(field: &Field, floor: i64) -> LaurentSeries {
        LaurentSeries {
            field: field.clone(),
            top: floor,
            coeffs: Vec::new(),
            floor,
        }
    }

    pub fn from_poly(p: &Poly, floor: i64) -> LaurentSeries {
        LaurentSeries::from_rational(&RationalFunction::from_poly(p.clone()), floor)
    }

    /// Long division of `num` by `den`, keeping every degree above `floor`.
    pub fn from_rational(r: &RationalFunction, floor: i64) -> LaurentSeries {
        let field = r.field();
        let d = match r.deg().finite() {
            Some(d) if d > floor => d,
            _ => return LaurentSeries::zero(field, floor),
        };
        let s = (-(floor + 1)).max(0) as usize;
        let x = r.num().shift(s).divmod(r.den()).expect("nonzero denominator").0;
        let coeffs = ((floor + 1)..=d)
            .rev()
            .map(|e| x.coeff((e + s as i64) as usize))
            .collect();
        LaurentSeries::normalized(field, d, coeffs, floor)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Highest stored degree; equals `floor` for an all-zero window.
    pub fn top(&self) -> i64 {
        self.top
    }

    /// Window coefficients from `top` down to `floor + 1`.
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_window_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The coefficient of `t^d`; unknown at or below the floor.
    pub fn coeff(&self, d: i64) -> Result<Fe> {
        if d <= self.floor {
            return Err(Error::InsufficientPrecision {
                context: format!("coefficient of t^{d} lies below floor {}", self.floor),
                required_floor: Some(d - 1),
            });
        }
        Ok(self.coeff_in_window(d))
    }

    fn coeff_in_window(&self, d: i64) -> Fe {
        if d > self.top || d <= self.floor {
            Fe::ZERO
        } else {
            self.coeffs[(self.top - d) as usize]
        }
    }

    /// `deg f`; fails when the window cannot certify it.
    pub fn deg(&self) -> Result<i64> {
        if self.is_window_zero() {
            Err(Error::InsufficientPrecision {
                context: format!("degree undetermined: window above floor {} is zero", self.floor),
                required_floor: None,
            })
        } else {
            Ok(self.top)
        }
    }

    pub fn lc(&self) -> Result<Fe> {
        self.deg().map(|_| self.coeffs[0])
    }

    /// An upper bound `e` with `|f| <= q^e`.
    pub fn ub(&self) -> i64 {
        self.top
    }

    /// Forgets every coefficient at or below `m` (no-op if `m <= floor`).
    pub fn coarsen(&self, m: i64) -> LaurentSeries {
        if m <= self.floor {
            return self.clone();
        }
        let keep = (self.top - m).max(0) as usize;
        let coeffs = self.coeffs[..keep.min(self.coeffs.len())].to_vec();
        let top = if coeffs.is_empty() { m } else { self.top };
        LaurentSeries::normalized(&self.field, top, coeffs, m)
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let floor = self.floor.max(other.floor);
        let top = self.top.max(other.top).max(floor);
        let f = &self.field;
        let coeffs = ((floor + 1)..=top)
            .rev()
            .map(|d| f.add(self.coeff_in_window(d), other.coeff_in_window(d)))
            .collect();
        LaurentSeries::normalized(f, top, coeffs, floor)
    }

    pub fn neg(&self) -> LaurentSeries {
        let f = &self.field;
        LaurentSeries {
            field: f.clone(),
            top: self.top,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            floor: self.floor,
        }
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> LaurentSeries {
        if c.is_zero() {
            return LaurentSeries::zero(&self.field, self.floor);
        }
        let row = self.field.mul_row(c);
        LaurentSeries {
            field: self.field.clone(),
            top: self.top,
            coeffs: self.coeffs.iter().map(|x| row[x.index() as usize]).collect(),
            floor: self.floor,
        }
    }

    /// Multiplication by `t^k`; exact, so the floor moves with it.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        LaurentSeries {
            field: self.field.clone(),
            top: self.top + k,
            coeffs: self.coeffs.clone(),
            floor: self.floor + k,
        }
    }

    /// Product with the error term propagated:
    /// floor = max(m_f + ub(g), m_g + ub(f)).
    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        let floor = (self.floor + other.ub()).max(other.floor + self.ub());
        if self.is_window_zero() || other.is_window_zero() {
            return LaurentSeries::zero(&self.field, floor);
        }
        let top = self.top + other.top;
        let len = (top - floor).max(0) as usize;
        let f = &self.field;
        let mut out = vec![Fe::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            let row = f.mul_row(a);
            let jmax = (len - i).min(other.coeffs.len());
            for (j, b) in other.coeffs[..jmax].iter().enumerate() {
                out[i + j] = f.add(out[i + j], row[b.index() as usize]);
            }
        }
        LaurentSeries::normalized(f, top, out, floor)
    }

    /// Exact polynomial multiplier: floor moves by `deg p`.
    pub fn mul_poly(&self, p: &Poly) -> LaurentSeries {
        let Some(dp) = p.deg().finite() else {
            return LaurentSeries::zero(&self.field, i64::MIN / 4);
        };
        let floor = self.floor + dp;
        if self.is_window_zero() {
            return LaurentSeries::zero(&self.field, floor);
        }
        let top = self.top + dp;
        let len = (top - floor) as usize;
        let f = &self.field;
        let mut out = vec![Fe::ZERO; len];
        for (k, &a) in p.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // t^k shifts the window start down by dp - k positions.
            let off = dp as usize - k;
            let row = f.mul_row(a);
            for (j, b) in self.coeffs.iter().enumerate() {
                if off + j >= len {
                    break;
                }
                out[off + j] = f.add(out[off + j], row[b.index() as usize]);
            }
        }
        LaurentSeries::normalized(f, top, out, floor)
    }

    /// Reciprocal, floor = m - 2 deg f.
    pub fn inv(&self) -> Result<LaurentSeries> {
        let d = self.deg().map_err(|_| Error::InsufficientPrecision {
            context: format!(
                "cannot invert: value may be zero (window above floor {} is zero)",
                self.floor
            ),
            required_floor: None,
        })?;
        let floor = self.floor - 2 * d;
        let n = (d - self.floor) as usize;
        let f = &self.field;
        let c0inv = f.inv(self.coeffs[0])?;
        let neg_c0inv = f.neg(c0inv);
        let mut r = Vec::with_capacity(n);
        r.push(c0inv);
        for k in 1..n {
            let mut acc = Fe::ZERO;
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc = f.add(acc, f.mul(self.coeffs[j], r[k - j]));
            }
            r.push(f.mul(neg_c0inv, acc));
        }
        Ok(LaurentSeries::normalized(f, -d, r, floor))
    }

    pub fn div(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        Ok(self.mul(&other.inv()?))
    }

    fn require_polynomial_part(&self, what: &str) -> Result<()> {
        if self.floor >= 0 {
            return Err(Error::InsufficientPrecision {
                context: format!("{what} needs floor <= -1, have {}", self.floor),
                required_floor: Some(-1),
            });
        }
        Ok(())
    }

    /// The polynomial part `[f]`.
    pub fn poly_part(&self) -> Result<Poly> {
        self.require_polynomial_part("polynomial part")?;
        if self.top < 0 {
            return Ok(Poly::zero(&self.field));
        }
        let coeffs = (0..=self.top).map(|d| self.coeff_in_window(d)).collect();
        Ok(Poly::from_coeffs(&self.field, coeffs))
    }

    /// The fractional part `f - [f]`.
    pub fn frac_part(&self) -> Result<LaurentSeries> {
        self.require_polynomial_part("fractional part")?;
        if self.top < 0 {
            return Ok(self.clone());
        }
        let skip = (self.top + 1) as usize;
        let coeffs = self.coeffs[skip.min(self.coeffs.len())..].to_vec();
        Ok(LaurentSeries::normalized(&self.field, -1, coeffs, self.floor))
    }

    /// `{Q f} = Q f - [Q f]`.
    pub fn fractional_part(q: &Poly, f: &LaurentSeries) -> Result<LaurentSeries> {
        f.mul_poly(q).frac_part()
    }

    /// The window as an exact fraction `N / t^K`.
    pub fn truncation(&self) -> (Poly, usize) {
        let k = (-(self.floor + 1)).max(0) as usize;
        if self.is_window_zero() {
            return (Poly::zero(&self.field), k);
        }
        let lo = self.floor + 1 + k as i64;
        let hi = self.top + k as i64;
        let mut c = vec![Fe::ZERO; (hi + 1) as usize];
        for e in lo.max(0)..=hi {
            c[e as usize] = self.coeff_in_window(e - k as i64);
        }
        (Poly::from_coeffs(&self.field, c), k)
    }

    pub fn truncation_rational(&self) -> RationalFunction {
        let (n, k) = self.truncation();
        RationalFunction::from_poly(n).mul(&RationalFunction::t_pow(&self.field, -(k as i64)))
    }

    /// True when `r` lies in this ball.
    pub fn contains(&self, r: &RationalFunction) -> bool {
        LaurentSeries::from_rational(r, self.floor) == *self
    }

    /// True when the two balls share every coefficient above both floors.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        let m = self.floor.max(other.floor);
        self.coarsen(m).coeffs == other.coarsen(m).coeffs
            && self.coarsen(m).top == other.coarsen(m).top
    }

    /// Parses `{q: 3, top: -3, coeffs: [2,0,0,1], floor: -8}`.
    ///
    /// Quoted keys are accepted. A coefficient list shorter than the window
    /// is padded with zeros below the last listed term.
    pub fn parse(field: &Field, s: &str) -> Result<LaurentSeries> {
        let body = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("series must be wrapped in braces: '{s}'")))?;
        let (mut q, mut top, mut floor, mut coeffs) = (None, None, None, None);
        for item in split_top_level(body, ',') {
            let (k, v) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected key: value, got '{item}'")))?;
            let k = k.trim().trim_matches('"');
            let v = v.trim();
            let int = |v: &str| {
                v.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad integer '{v}' for '{k}'")))
            };
            match k {
                "q" => q = Some(int(v)?),
                "top" => top = Some(int(v)?),
                "floor" => floor = Some(int(v)?),
                "coeffs" => coeffs = Some(parse_coeff_list(field, v)?),
                _ => return Err(Error::Parse(format!("unknown series key '{k}'"))),
            }
        }
        let missing = |n: &str| Error::Parse(format!("series is missing '{n}'"));
        let top = top.ok_or_else(|| missing("top"))?;
        let floor = floor.ok_or_else(|| missing("floor"))?;
        let mut coeffs = coeffs.ok_or_else(|| missing("coeffs"))?;
        if let Some(q) = q {
            if q != field.q() as i64 {
                return Err(Error::Parse(format!(
                    "series declares q = {q}, field has q = {}",
                    field.q()
                )));
            }
        }
        if top < floor {
            return Err(Error::Parse(format!("top {top} is below floor {floor}")));
        }
        let width = (top - floor) as usize;
        if coeffs.len() > width {
            return Err(Error::Parse(format!(
                "{} coefficients do not fit between top {top} and floor {floor}",
                coeffs.len()
            )));
        }
        coeffs.resize(width, Fe::ZERO);
        Ok(LaurentSeries::normalized(field, top, coeffs, floor))
    }

    fn coeff_json(&self, c: Fe) -> serde_json::Value {
        if self.field.e() == 1 {
            serde_json::json!(c.index())
        } else {
            serde_json::json!(self.field.rep(c))
        }
    }
}

fn parse_coeff_list(field: &Field, v: &str) -> Result<Vec<Fe>> {
    let inner = v
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("coeffs must be a list: '{v}'")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(inner, ',')
        .into_iter()
        .map(|c| Poly::parse(field, c.trim()).and_then(|p| {
            if p.deg() > 0 {
                Err(Error::Parse(format!("coefficient '{c}' is not a constant")))
            } else {
                Ok(p.coeff(0))
            }
        }))
        .collect()
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|&c| self.field.fmt_elem(c)).collect();
        write!(
            f,
            "{{q: {}, top: {}, coeffs: [{}], floor: {}}}",
            self.field.q(),
            self.top,
            cs.join(","),
            self.floor
        )
    }
}

impl serde::Serialize for LaurentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LaurentSeries", 4)?;
        st.serialize_field("q", &self.field.q())?;
        st.serialize_field("top", &self.top)?;
        let cs: Vec<_> = self.coeffs.iter().map(|&c| self.coeff_json(c)).collect();
        st.serialize_field("coeffs", &cs)?;
        st.serialize_field("floor", &self.floor)?;
        st.end()
    }
}
