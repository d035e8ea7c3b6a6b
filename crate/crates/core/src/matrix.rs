//! 2×2 integer matrices of positive determinant, taken modulo ±I.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of `M_n`: an integer matrix `(a b; c d)` with `ad - bc > 0`,
/// identified with its negative.
///
/// The stored quadruple is always the canonical representative, whose first
/// nonzero entry in the order `a, b, c, d` is positive. Equality, hashing and
/// ordering all act on that quadruple.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatN {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
    det: BigInt,
}

impl MatN {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_positive() {
            return Err(Error::NonPositiveDeterminant(format!(
                "[{a},{b},{c},{d}] has determinant {det}"
            )));
        }
        Ok(Self::canonical(a, b, c, d, det))
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// Shorthand for tests and constant tables; panics on a nonpositive determinant.
    pub fn of(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::from_i64(a, b, c, d).expect("matrix must have positive determinant")
    }

    fn canonical(a: BigInt, b: BigInt, c: BigInt, d: BigInt, det: BigInt) -> Self {
        let lead_negative = [&a, &b, &c, &d]
            .into_iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative());
        if lead_negative {
            MatN { a: -a, b: -b, c: -c, d: -d, det }
        } else {
            MatN { a, b, c, d, det }
        }
    }

    pub fn identity() -> Self {
        Self::of(1, 0, 0, 1)
    }

    /// `S = (0 -1; 1 0)`.
    pub fn s() -> Self {
        Self::of(0, -1, 1, 0)
    }

    /// `T = (1 1; 0 1)`.
    pub fn t() -> Self {
        Self::of(1, 1, 0, 1)
    }

    pub fn t_inv() -> Self {
        Self::of(1, -1, 0, 1)
    }

    /// `T^k` for any integer `k`.
    pub fn t_pow(k: &BigInt) -> Self {
        MatN::canonical(BigInt::one(), k.clone(), BigInt::zero(), BigInt::one(), BigInt::one())
    }

    /// `U = TS = (1 -1; 1 0)`, of order 3.
    pub fn u() -> Self {
        Self::of(1, -1, 1, 0)
    }

    /// `U^2 = S T^{-1} = (0 -1; 1 -1)`.
    pub fn u2() -> Self {
        Self::of(0, -1, 1, -1)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a.is_one() && self.d.is_one()
    }

    /// `g^∨ = det(g) g^{-1} = (d -b; -c a)`. Reverses products.
    pub fn adjoint(&self) -> Self {
        Self::canonical(
            self.d.clone(),
            -&self.b,
            -&self.c,
            self.a.clone(),
            self.det.clone(),
        )
    }

    /// `g' = ε g ε` with `ε = diag(-1, 1)`, i.e. `(a -b; -c d)`. Preserves products.
    pub fn prime(&self) -> Self {
        Self::canonical(
            self.a.clone(),
            -&self.b,
            -&self.c,
            self.d.clone(),
            self.det.clone(),
        )
    }

    /// Sign of `c·d` for the bottom row, which does not depend on the ±I representative.
    pub fn bottom_sign(&self) -> i32 {
        let s = |x: &BigInt| {
            if x.is_positive() {
                1
            } else if x.is_negative() {
                -1
            } else {
                0
            }
        };
        s(&self.c) * s(&self.d)
    }

    /// Sum of absolute values of the entries; used as a size measure when ordering unknowns.
    pub fn weight(&self) -> BigInt {
        self.entries().iter().map(|x| x.abs()).sum()
    }
}

impl Ord for MatN {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.a, &self.b, &self.c, &self.d).cmp(&(&other.a, &other.b, &other.c, &other.d))
    }
}

impl PartialOrd for MatN {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for &MatN {
    type Output = MatN;

    fn mul(self, h: &MatN) -> MatN {
        let g = self;
        MatN::canonical(
            &g.a * &h.a + &g.b * &h.c,
            &g.a * &h.b + &g.b * &h.d,
            &g.c * &h.a + &g.d * &h.c,
            &g.c * &h.b + &g.d * &h.d,
            &g.det * &h.det,
        )
    }
}

impl Mul for MatN {
    type Output = MatN;

    fn mul(self, h: MatN) -> MatN {
        &self * &h
    }
}

impl fmt::Display for MatN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for MatN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MatN {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("matrix must look like [a,b,c,d]: {s:?}")))?;
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad matrix entry {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let [a, b, c, d]: [BigInt; 4] = parts
            .try_into()
            .map_err(|_| Error::Parse(format!("matrix needs four entries: {s:?}")))?;
        MatN::new(a, b, c, d)
    }
}

/// Integers go out as JSON numbers when they fit in an `i64`, otherwise as decimal strings.
pub(crate) fn bigint_to_json(x: &BigInt) -> serde_json::Value {
    match i64::try_from(x) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::String(x.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("expected an integer, got {n}"))),
        serde_json::Value::String(s) => s
            .parse()
            .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}"))),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

impl MatN {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.entries().iter().map(|x| bigint_to_json(x)).collect())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| Error::Parse(format!("matrix must be a 4-element array, got {v}")))?;
        MatN::new(
            bigint_from_json(&arr[0])?,
            bigint_from_json(&arr[1])?,
            bigint_from_json(&arr[2])?,
            bigint_from_json(&arr[3])?,
        )
    }
}

impl Serialize for MatN {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatN {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        MatN::from_json(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sign() {
        let m = MatN::of(-1, 0, 0, -1);
        assert!(m.is_identity());
        let n = MatN::of(0, 1, -1, 0);
        assert_eq!(n, MatN::s());
        assert_eq!(n.to_string(), "[0,1,-1,0]");
    }

    #[test]
    fn rejects_nonpositive_det() {
        assert!(MatN::from_i64(1, 0, 0, -1).is_err());
        assert!(MatN::from_i64(1, 2, 2, 4).is_err());
    }

    #[test]
    fn products_of_generators() {
        assert_eq!(&MatN::t() * &MatN::s(), MatN::u());
        assert!((&MatN::s() * &MatN::s()).is_identity());
        assert_eq!(&MatN::s() * &MatN::t_inv(), MatN::u2());
        assert_eq!(&MatN::u() * &MatN::u(), MatN::u2());
        assert!((&MatN::u2() * &MatN::u()).is_identity());
        assert!((&MatN::t() * &MatN::t_inv()).is_identity());
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(MatN::t().adjoint(), MatN::t_inv());
        assert_eq!(MatN::s().adjoint(), MatN::s());
        assert_eq!(MatN::of(1, 1, 0, 2).adjoint(), MatN::of(2, -1, 0, 1));
    }

    #[test]
    fn prime_examples() {
        assert_eq!(MatN::t().prime(), MatN::t_inv());
        assert!(MatN::identity().prime().is_identity());
        let g = MatN::of(2, 1, 1, 1);
        assert_eq!(g.prime().prime(), g);
    }

    #[test]
    fn t_pow_matches_repeated_product() {
        let mut acc = MatN::identity();
        for _ in 0..5 {
            acc = &acc * &MatN::t();
        }
        assert_eq!(acc, MatN::t_pow(&BigInt::from(5)));
        assert_eq!(MatN::t_pow(&BigInt::from(-1)), MatN::t_inv());
    }

    #[test]
    fn text_round_trip() {
        let m = MatN::of(3, -7, 2, 1);
        let back: MatN = m.to_string().parse().unwrap();
        assert_eq!(back, m);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[3,-7,2,1]");
        assert!("[1,2,3]".parse::<MatN>().is_err());
    }
}
