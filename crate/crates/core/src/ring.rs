//! Sparse elements of the rational group ring `R_n = Q[M_n]`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{bigint_from_json, bigint_to_json, MatN};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rat_frac(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// A finite rational combination of matrices that all share one determinant.
///
/// Zero coefficients are never stored, so structural equality of the term
/// maps is equality in the ring.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElt {
    det: BigInt,
    terms: BTreeMap<MatN, Rational>,
}

impl RingElt {
    pub fn zero(det: impl Into<BigInt>) -> Self {
        RingElt {
            det: det.into(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::basis(MatN::identity())
    }

    /// The basis element `δ_m`.
    pub fn basis(m: MatN) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn term(m: MatN, coeff: Rational) -> Self {
        let mut out = Self::zero(m.det().clone());
        out.add_term(m, coeff);
        out
    }

    /// Formal sum with unit coefficients; repeated matrices accumulate.
    pub fn sum_of<I: IntoIterator<Item = MatN>>(det: impl Into<BigInt>, mats: I) -> Result<Self> {
        let mut out = Self::zero(det);
        for m in mats {
            out.try_add_term(m, Rational::one())?;
        }
        Ok(out)
    }

    /// `1 - g` for a matrix `g` of determinant 1.
    pub fn one_minus(g: MatN) -> Self {
        let mut out = Self::one();
        out.add_term(g, -Rational::one());
        out
    }

    /// `1 + g`.
    pub fn one_plus(g: MatN) -> Self {
        let mut out = Self::one();
        out.add_term(g, Rational::one());
        out
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &MatN) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MatN, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &MatN> {
        self.terms.keys()
    }

    /// Adds `coeff·δ_m`. Panics if `m` has a different determinant.
    pub fn add_term(&mut self, m: MatN, coeff: Rational) {
        self.try_add_term(m, coeff).expect("determinant mismatch in add_term")
    }

    pub fn try_add_term(&mut self, m: MatN, coeff: Rational) -> Result<()> {
        if m.det() != &self.det {
            return Err(Error::DeterminantMismatch {
                left: self.det.to_string(),
                right: format!("{} (matrix {m})", m.det()),
            });
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
        Ok(())
    }

    fn check_same_det(&self, other: &RingElt) -> Result<()> {
        if self.det != other.det {
            return Err(Error::DeterminantMismatch {
                left: self.det.to_string(),
                right: other.det.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &RingElt) -> Result<RingElt> {
        self.check_same_det(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &RingElt) -> Result<RingElt> {
        self.check_same_det(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> RingElt {
        if q.is_zero() {
            return RingElt::zero(self.det.clone());
        }
        RingElt {
            det: self.det.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    /// Term-wise image under a determinant-preserving map on matrices.
    pub fn map_terms(&self, f: impl Fn(&MatN) -> MatN) -> RingElt {
        let mut out = RingElt::zero(self.det.clone());
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }

    /// Extends the matrix adjoint linearly; `adjoint(xy) = adjoint(y) adjoint(x)`.
    pub fn adjoint(&self) -> RingElt {
        self.map_terms(MatN::adjoint)
    }

    /// Extends `m ↦ m'` linearly; a ring homomorphism.
    pub fn prime(&self) -> RingElt {
        self.map_terms(MatN::prime)
    }

    /// Left multiplication by a single matrix.
    pub fn left_mul_mat(&self, g: &MatN) -> RingElt {
        let mut out = RingElt::zero(&self.det * g.det());
        for (m, c) in &self.terms {
            out.add_term(g * m, c.clone());
        }
        out
    }

    /// Right multiplication by a single matrix.
    pub fn right_mul_mat(&self, g: &MatN) -> RingElt {
        let mut out = RingElt::zero(&self.det * g.det());
        for (m, c) in &self.terms {
            out.add_term(m * g, c.clone());
        }
        out
    }

    /// `x ↦ (m - m')(1-S) + (1-S)(m^∨ - m'^∨)`, extended linearly.
    pub fn star(&self) -> RingElt {
        let s = MatN::s();
        let mut out = RingElt::zero(self.det.clone());
        for (m, c) in &self.terms {
            let mp = m.prime();
            let ma = m.adjoint();
            let mpa = mp.adjoint();
            let neg = -c;
            out.add_term(m.clone(), c.clone());
            out.add_term(mp.clone(), neg.clone());
            out.add_term(m * &s, neg.clone());
            out.add_term(&mp * &s, c.clone());
            out.add_term(ma.clone(), c.clone());
            out.add_term(mpa.clone(), neg.clone());
            out.add_term(&s * &ma, neg);
            out.add_term(&s * &mpa, c.clone());
        }
        out
    }

    /// `N(x) = Σ c_m · sgn(c·d)` over the bottom rows of the support.
    pub fn signed_count(&self) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            match m.bottom_sign() {
                1 => total += c,
                -1 => total -= c,
                _ => {}
            }
        }
        total
    }

    /// Sum of all coefficients. Multiplicative, and zero on `1 - g`.
    pub fn aug(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| serde_json::json!([m.to_json(), c.to_string()]))
            .collect::<Vec<_>>();
        serde_json::json!({ "det": bigint_to_json(&self.det), "terms": terms })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<RingElt> {
        let det = bigint_from_json(
            v.get("det")
                .ok_or_else(|| Error::Parse("ring element needs \"det\"".into()))?,
        )?;
        if !det.is_positive() {
            return Err(Error::Parse(format!("ring element det must be positive, got {det}")));
        }
        let terms = v
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| Error::Parse("ring element needs a \"terms\" array".into()))?;
        let mut out = RingElt::zero(det);
        for t in terms {
            let pair = t
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse(format!("term must be [matrix, coeff]: {t}")))?;
            let m = MatN::from_json(&pair[0])?;
            let c = parse_rational(&pair[1])?;
            out.try_add_term(m, c)?;
        }
        Ok(out)
    }
}

pub fn parse_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => {
            let s = s.trim();
            let (p, q) = match s.split_once('/') {
                Some((p, q)) => (p, q),
                None => (s, "1"),
            };
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad numerator in {s:?}: {e}")))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad denominator in {s:?}: {e}")))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        serde_json::Value::Number(_) => Ok(Rational::from_integer(bigint_from_json(v)?)),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

impl Serialize for RingElt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RingElt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        RingElt::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for RingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (det {})", self.det);
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{m}")?;
        }
        Ok(())
    }
}

// Operators panic on a determinant mismatch; use `try_add`/`try_sub` where
// the determinants are not known to agree.

impl Add for &RingElt {
    type Output = RingElt;
    fn add(self, rhs: &RingElt) -> RingElt {
        self.try_add(rhs).expect("determinant mismatch in +")
    }
}

impl Add for RingElt {
    type Output = RingElt;
    fn add(self, rhs: RingElt) -> RingElt {
        &self + &rhs
    }
}

impl Sub for &RingElt {
    type Output = RingElt;
    fn sub(self, rhs: &RingElt) -> RingElt {
        self.try_sub(rhs).expect("determinant mismatch in -")
    }
}

impl Sub for RingElt {
    type Output = RingElt;
    fn sub(self, rhs: RingElt) -> RingElt {
        &self - &rhs
    }
}

impl Neg for &RingElt {
    type Output = RingElt;
    fn neg(self) -> RingElt {
        RingElt {
            det: self.det.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for RingElt {
    type Output = RingElt;
    fn neg(self) -> RingElt {
        -&self
    }
}

/// Convolution; determinants multiply, so `R_a × R_b → R_ab`.
impl Mul for &RingElt {
    type Output = RingElt;
    fn mul(self, rhs: &RingElt) -> RingElt {
        let mut out = RingElt::zero(&self.det * &rhs.det);
        for (g, x) in &self.terms {
            for (h, y) in &rhs.terms {
                out.add_term(g * h, x * y);
            }
        }
        out
    }
}

impl Mul for RingElt {
    type Output = RingElt;
    fn mul(self, rhs: RingElt) -> RingElt {
        &self * &rhs
    }
}

impl Mul<&RingElt> for RingElt {
    type Output = RingElt;
    fn mul(self, rhs: &RingElt) -> RingElt {
        &self * rhs
    }
}

impl Mul<RingElt> for &RingElt {
    type Output = RingElt;
    fn mul(self, rhs: RingElt) -> RingElt {
        self * &rhs
    }
}

/// Common elements of `R_1`.
pub mod consts {
    use super::*;

    pub fn one_minus_s() -> RingElt {
        RingElt::one_minus(MatN::s())
    }
    pub fn one_plus_s() -> RingElt {
        RingElt::one_plus(MatN::s())
    }
    pub fn one_minus_t() -> RingElt {
        RingElt::one_minus(MatN::t())
    }
    pub fn one_minus_t_inv() -> RingElt {
        RingElt::one_minus(MatN::t_inv())
    }
    /// `T - T^{-1}`.
    pub fn t_minus_t_inv() -> RingElt {
        &RingElt::basis(MatN::t()) - &RingElt::basis(MatN::t_inv())
    }
    /// `1 + U + U^2`.
    pub fn one_plus_u_u2() -> RingElt {
        let mut out = RingElt::one();
        out.add_term(MatN::u(), Rational::one());
        out.add_term(MatN::u2(), Rational::one());
        out
    }
}
