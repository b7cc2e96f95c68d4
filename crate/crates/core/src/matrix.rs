//! 2x2 matrices over F_q[t] with an extra scalar factor `t^tpow`.

use std::fmt;

use serde::ser::SerializeStruct;

use crate::algebra::{Degree, Field, Poly};

/// The matrix `t^tpow * m`, with `m` over F_q[t].
///
/// Step matrices of the level-decreasing branch carry a `t^-1` scalar; keeping
/// it apart leaves every stored entry a polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct ScaledMatrix {
    pub tpow: i64,
    pub m: [[Poly; 2]; 2],
}

impl fmt::Debug for ScaledMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl ScaledMatrix {
    pub fn new(tpow: i64, m: [[Poly; 2]; 2]) -> ScaledMatrix {
        ScaledMatrix { tpow, m }
    }

    pub fn from_polys(a: Poly, b: Poly, c: Poly, d: Poly) -> ScaledMatrix {
        ScaledMatrix::new(0, [[a, b], [c, d]])
    }

    pub fn identity(field: &Field) -> ScaledMatrix {
        ScaledMatrix::from_polys(
            Poly::one(field),
            Poly::zero(field),
            Poly::zero(field),
            Poly::one(field),
        )
    }

    pub fn field(&self) -> &Field {
        self.m[0][0].field()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.m[i][j]
    }

    pub fn mul(&self, other: &ScaledMatrix) -> ScaledMatrix {
        let (a, b) = (&self.m, &other.m);
        let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        ScaledMatrix::new(self.tpow + other.tpow, [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// The polynomial determinant of `m` and the exponent of `t` it picks up
    /// from the scalar, i.e. `det = t^(2 tpow) * det m`.
    pub fn det(&self) -> (i64, Poly) {
        let m = &self.m;
        (
            2 * self.tpow,
            &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        )
    }

    /// Moves any common power of `t` in the entries into the scalar.
    pub fn normalized(&self) -> ScaledMatrix {
        let low = self
            .m
            .iter()
            .flatten()
            .filter(|p| !p.is_zero())
            .map(|p| p.coeffs().iter().position(|c| !c.is_zero()).unwrap())
            .min()
            .unwrap_or(0);
        if low == 0 {
            return self.clone();
        }
        let s = |p: &Poly| p.shift_down(low);
        ScaledMatrix::new(
            self.tpow + low as i64,
            [
                [s(&self.m[0][0]), s(&self.m[0][1])],
                [s(&self.m[1][0]), s(&self.m[1][1])],
            ],
        )
    }

    /// Equality as elements of GL_2(K) (both sides normalized first).
    pub fn same_matrix(&self, other: &ScaledMatrix) -> bool {
        self.normalized() == other.normalized()
    }

    /// Largest entry degree of `m`.
    pub fn max_deg(&self) -> Degree {
        self.m.iter().flatten().map(Poly::deg).max().unwrap()
    }
}

impl fmt::Display for ScaledMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tpow != 0 {
            write!(f, "t^{}*", self.tpow)?;
        }
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl serde::Serialize for ScaledMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .m
            .iter()
            .map(|r| r.iter().map(|p| p.to_string()).collect())
            .collect();
        let mut st = s.serialize_struct("ScaledMatrix", 2)?;
        st.serialize_field("tpow", &self.tpow)?;
        st.serialize_field("m", &rows)?;
        st.end()
    }
}
