//! The matrix families `S_n ⊂ T_n ⊂ U_n ⊂ X_n ⊃ V_n` (and their parity-restricted
//! versions), their `★`-sums, the left `⟨T⟩`-class involution on `X_n^<`, and the
//! congruences modulo `J + J^∨` that reduce the Hecke statement to `T_n^∞`.
//!
//! Sets are written in the display convention `(a -b; c d)`: a [`Quad`] holds the
//! displayed `a, b, c, d` and the actual matrix has `-b` in the top right corner.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::{divisors, tn_inf, un_element};
use crate::matrix::MatN;
use crate::membership::{left_t_orbit_rep, search_membership, MembershipVerdict, ModuleSpec, SearchConfig};
use crate::ring::{rat, Rational, RingElt};

/// Displayed entries of `(a -b; c d)`, determinant `ad + bc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quad {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Quad {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Quad { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d + self.b * self.c
    }

    pub fn to_mat(&self) -> MatN {
        MatN::from_i64(self.a, -self.b, self.c, self.d).expect("positive determinant")
    }

    /// Displayed entries of `T^j m`.
    pub fn t_shift(&self, j: i64) -> Quad {
        Quad::new(self.a + j * self.c, self.b - j * self.d, self.c, self.d)
    }

    /// Displayed entries of `m' = ε m ε`.
    pub fn primed(&self) -> Quad {
        Quad::new(self.a, -self.b, -self.c, self.d)
    }

    pub fn in_x(&self) -> bool {
        self.c + self.d > (self.a - self.b).abs() && self.a + self.b > (self.c - self.d).abs()
    }

    pub fn in_t(&self) -> bool {
        self.b + self.c > (self.a - self.d).abs() && self.a.max(self.d) > self.b.max(self.c)
    }

    pub fn in_s(&self) -> bool {
        self.c >= self.b
            && self.d >= self.a
            && self.a + self.b > self.d - self.c
            && self.d - self.c > 0
    }

    pub fn in_v(&self) -> bool {
        self.in_x() && self.a.max(self.d) == self.b.max(self.c)
    }

    /// `(b -a; d c)`, the swap that symmetrizes `T_n` into `U_n`.
    pub fn swapped(&self) -> Quad {
        Quad::new(self.b, self.a, self.d, self.c)
    }

    pub fn in_u(&self) -> bool {
        self.in_t() || self.swapped().in_t()
    }

    pub fn parity_ok(&self) -> bool {
        (self.a - self.d) % 2 == 0 && (self.b - self.c) % 2 == 0
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} -{}; {} {})", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SetLabel {
    Sn,
    Tn,
    Un,
    Xn,
    Vn,
    SnP,
    TnP,
    UnP,
    XnP,
    VnP,
    XnLess,
    XnEq,
    XnGreater,
}

impl SetLabel {
    pub const ALL: [SetLabel; 13] = [
        SetLabel::Sn,
        SetLabel::Tn,
        SetLabel::Un,
        SetLabel::Xn,
        SetLabel::Vn,
        SetLabel::SnP,
        SetLabel::TnP,
        SetLabel::UnP,
        SetLabel::XnP,
        SetLabel::VnP,
        SetLabel::XnLess,
        SetLabel::XnEq,
        SetLabel::XnGreater,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SetLabel::Sn => "Sn",
            SetLabel::Tn => "Tn",
            SetLabel::Un => "Un",
            SetLabel::Xn => "Xn",
            SetLabel::Vn => "Vn",
            SetLabel::SnP => "SnP",
            SetLabel::TnP => "TnP",
            SetLabel::UnP => "UnP",
            SetLabel::XnP => "XnP",
            SetLabel::VnP => "VnP",
            SetLabel::XnLess => "XnLess",
            SetLabel::XnEq => "XnEq",
            SetLabel::XnGreater => "XnGreater",
        }
    }

    pub fn is_primed(&self) -> bool {
        matches!(
            self,
            SetLabel::SnP | SetLabel::TnP | SetLabel::UnP | SetLabel::XnP | SetLabel::VnP
        )
    }

    /// The defining predicate, determinant aside.
    pub fn contains(&self, q: &Quad) -> bool {
        let base = match self {
            SetLabel::Sn | SetLabel::SnP => q.in_s(),
            SetLabel::Tn | SetLabel::TnP => q.in_t(),
            SetLabel::Un | SetLabel::UnP => q.in_u(),
            SetLabel::Xn | SetLabel::XnP => q.in_x(),
            SetLabel::Vn | SetLabel::VnP => q.in_v(),
            SetLabel::XnLess => q.in_x() && q.d > q.c.abs(),
            SetLabel::XnEq => q.in_x() && q.c == q.d,
            SetLabel::XnGreater => q.in_x() && q.c > q.d.abs(),
        };
        base && (!self.is_primed() || q.parity_ok())
    }
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SetLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SetLabel::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown set label {s:?}")))
    }
}

/// A finite family of determinant-`n` matrices, sorted by displayed entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatSet {
    pub n: u64,
    pub label: SetLabel,
    pub elems: Vec<Quad>,
}

impl MatSet {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn matrices(&self) -> impl Iterator<Item = MatN> + '_ {
        self.elems.iter().map(Quad::to_mat)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut mats: Vec<MatN> = self.matrices().collect();
        mats.sort();
        serde_json::json!({
            "n": self.n,
            "label": self.label.name(),
            "size": self.elems.len(),
            "display": self.elems.iter().map(|q| [q.a, q.b, q.c, q.d]).collect::<Vec<_>>(),
            "matrices": mats.iter().map(MatN::to_json).collect::<Vec<_>>(),
        })
    }
}

fn check_n(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    i64::try_from(n)
        .ok()
        .filter(|&v| v < 1 << 20)
        .ok_or_else(|| Error::InvalidArgument(format!("n = {n} is too large to enumerate")))
}

/// All displayed quadruples of determinant `n` in `X_n`.
///
/// Writing `s = a+b`, `u = c+d`, `p = a-b`, `q = d-c`, membership in `X_n` reads
/// `|p| < u`, `|q| < s` and `2n = su + pq`, which forces `s + u ≤ 2n + 1`; so
/// every entry lies in `[-2n, 2n]`.
pub fn enumerate_x(n: u64) -> Result<Vec<Quad>> {
    let n = check_n(n)?;
    let two_n = 2 * n;
    let mut out = Vec::new();
    for s in 1..=two_n {
        for u in 1..=(two_n + 1 - s) {
            for p in (-(u - 1))..=(u - 1) {
                if (s - p) % 2 != 0 {
                    continue;
                }
                let mut emit = |q: i64| {
                    if (u - q) % 2 == 0 && q.abs() < s {
                        let a = (s + p) / 2;
                        let b = (s - p) / 2;
                        let d = (u + q) / 2;
                        let c = (u - q) / 2;
                        out.push(Quad::new(a, b, c, d));
                    }
                };
                let rest = two_n - s * u;
                if p == 0 {
                    if rest == 0 {
                        for q in (-(s - 1))..=(s - 1) {
                            emit(q);
                        }
                    }
                } else if rest % p == 0 {
                    emit(rest / p);
                }
            }
        }
    }
    out.retain(|q| q.det() == n && q.in_x());
    out.sort();
    Ok(out)
}

/// Exhaustive enumeration of `label` at determinant `n`.
pub fn build_set(n: u64, label: SetLabel) -> Result<MatSet> {
    // Every family is a subset of X_n.
    let mut elems: Vec<Quad> = enumerate_x(n)?
        .into_iter()
        .filter(|q| label.contains(q))
        .collect();
    elems.sort();
    for q in &elems {
        debug_assert!(label.contains(q) && q.det() == n as i64);
    }
    Ok(MatSet { n, label, elems })
}

/// `A_γ` for `γ = (a -b; c d)`: `(a -b; c d), (d -b; c a), (a -c; b d), (d -c; b a)`,
/// repeats kept.
pub fn a_gamma(g: &Quad) -> [Quad; 4] {
    let Quad { a, b, c, d } = *g;
    [
        Quad::new(a, b, c, d),
        Quad::new(d, b, c, a),
        Quad::new(a, c, b, d),
        Quad::new(d, c, b, a),
    ]
}

/// `Σ_{γ ∈ quads} γ^★` with multiplicity.
pub fn star_sum_quads<'a>(n: u64, quads: impl IntoIterator<Item = &'a Quad>) -> RingElt {
    let mut formal = RingElt::zero(n);
    for q in quads {
        formal.add_term(q.to_mat(), Rational::from_integer(1.into()));
    }
    formal.star()
}

pub fn star_sum(set: &MatSet) -> RingElt {
    star_sum_quads(set.n, &set.elems)
}

/// `V_n` rebuilt as `⋃ A_γ` over `γ = (a -b; c c)` with `c | n` and `c ≥ a ≥ n/c - c`.
pub fn v_n_parametrized(n: u64) -> Result<BTreeSet<Quad>> {
    let ni = check_n(n)?;
    let mut out = BTreeSet::new();
    for c in divisors(n).into_iter().map(|c| c as i64) {
        let lo = ni / c - c;
        for a in lo..=c {
            let b = ni / c - a;
            out.extend(a_gamma(&Quad::new(a, b, c, c)));
        }
    }
    Ok(out)
}

/// `N(X_n)` (or `N(X'_n)`): signed count of `sgn(cd)`.
pub fn signed_count_set(n: u64, primed: bool) -> Result<i64> {
    let label = if primed { SetLabel::XnP } else { SetLabel::Xn };
    Ok(build_set(n, label)?
        .elems
        .iter()
        .map(|q| (q.c * q.d).signum())
        .sum())
}

/// Members of `X_n` (or `X'_n`) with all displayed entries `≥ 0`, each counted
/// with weight `1/2` when `abcd = 0`.
pub fn weighted_boundary_count(n: u64, primed: bool) -> Result<Rational> {
    let label = if primed { SetLabel::XnP } else { SetLabel::Xn };
    let doubled: i64 = build_set(n, label)?
        .elems
        .iter()
        .filter(|q| q.a >= 0 && q.b >= 0 && q.c >= 0 && q.d >= 0)
        .map(|q| if q.a * q.b * q.c * q.d == 0 { 1 } else { 2 })
        .sum();
    Ok(Ratio::new(doubled.into(), 2.into()))
}

// ---------------------------------------------------------------------------
// Left ⟨T⟩-classes in X_n^< and the involution {m} ↦ {m'}

/// Case of the four-way split by `d - c | a + b` and `a = b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitCase {
    /// `d-c ∤ a+b`, `a ≠ b`
    One,
    /// `d-c | a+b`, `a = b`
    Two,
    /// `d-c ∤ a+b`, `a = b`
    Three,
    /// `d-c | a+b`, `a ≠ b`
    Four,
}

impl OrbitCase {
    pub fn of(q: &Quad) -> OrbitCase {
        let divides = (q.a + q.b) % (q.d - q.c) == 0;
        match (divides, q.a == q.b) {
            (false, false) => OrbitCase::One,
            (true, true) => OrbitCase::Two,
            (false, true) => OrbitCase::Three,
            (true, false) => OrbitCase::Four,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitClasses {
    pub n: u64,
    /// Classes of `X_n^<` under left multiplication by powers of `T`.
    pub classes: Vec<Vec<Quad>>,
    /// `involution[i]` is the index of the class `{m'}` for `m` in class `i`.
    pub involution: Vec<usize>,
}

/// Partition of `X_n^<` into `⟨T⟩`-classes and the induced map `{m} ↦ {m'}`.
pub fn orbit_classes(n: u64) -> Result<OrbitClasses> {
    let less = build_set(n, SetLabel::XnLess)?;
    let mut by_rep: BTreeMap<MatN, Vec<Quad>> = BTreeMap::new();
    for q in &less.elems {
        by_rep.entry(left_t_orbit_rep(&q.to_mat()).0).or_default().push(*q);
    }
    let index: BTreeMap<MatN, usize> = by_rep.keys().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let classes: Vec<Vec<Quad>> = by_rep.into_values().collect();
    let mut involution = Vec::with_capacity(classes.len());
    for class in &classes {
        let rep = left_t_orbit_rep(&class[0].primed().to_mat()).0;
        let target = index.get(&rep).copied().ok_or_else(|| {
            Error::Internal(format!("class of {}' does not meet X_{n}^<", class[0]))
        })?;
        involution.push(target);
    }
    Ok(OrbitClasses {
        n,
        classes,
        involution,
    })
}

impl OrbitClasses {
    fn class_of(&self, q: &Quad) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(q))
    }

    /// The class sizes `|{m}|` and `|{m'}|` predicted for `m` by the case table,
    /// with `None` where the table leaves a size open.
    pub fn predicted_sizes(q: &Quad) -> (Option<usize>, Option<usize>) {
        let (a, b, c, d) = (q.a, q.b, q.c, q.d);
        let r = d - c;
        let primed_size = if (a + b) % r == 0 || (b >= a && a + b < 2 * r) { 1 } else { 2 };
        match OrbitCase::of(q) {
            OrbitCase::One => (Some(primed_size), Some(primed_size)),
            OrbitCase::Two => (Some(1), Some(1)),
            OrbitCase::Three => (Some(1), Some(if a + b < 2 * r { 1 } else { 2 })),
            OrbitCase::Four => {
                // Representative of {m'} with A = B, reached at k = (a+b)/(d-c).
                let k = (a + b) / r;
                let big_a = a + k * c;
                let (big_c, big_d) = (-c, d);
                let own = if 2 * big_a < 2 * (big_d - big_c) { 1 } else { 2 };
                (Some(own), Some(1))
            }
        }
    }

    /// Checks the involution and the case table; returns a description of the
    /// first violation.
    pub fn check(&self) -> std::result::Result<(), String> {
        for (i, &j) in self.involution.iter().enumerate() {
            if self.involution[j] != i {
                return Err(format!("f∘f ≠ id on class {i}"));
            }
        }
        let image: BTreeSet<usize> = self.involution.iter().copied().collect();
        if image.len() != self.classes.len() {
            return Err("f is not a bijection".into());
        }
        for (i, class) in self.classes.iter().enumerate() {
            if !(1..=2).contains(&class.len()) {
                return Err(format!("class {i} has {} elements", class.len()));
            }
            let partner = &self.classes[self.involution[i]];
            for q in class {
                // Each representative's m' lands in the image class.
                let shifted = (-(2 * self.n as i64)..=(2 * self.n as i64))
                    .map(|k| q.primed().t_shift(-k))
                    .filter(|p| SetLabel::XnLess.contains(p))
                    .collect::<BTreeSet<_>>();
                if shifted != partner.iter().copied().collect() {
                    return Err(format!("{{{q}'}} ∩ X^< differs from the image class"));
                }
                if let Some(ci) = self.class_of(q) {
                    debug_assert_eq!(ci, i);
                }
                let (own, other) = Self::predicted_sizes(q);
                if own.is_some_and(|s| s != class.len()) || other.is_some_and(|s| s != partner.len()) {
                    return Err(format!(
                        "case {:?} table mismatch at {q}: sizes {} / {}",
                        OrbitCase::of(q),
                        class.len(),
                        partner.len()
                    ));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Congruences modulo J + J^∨

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Congruence {
    /// `[Σ (a+k, -k; -d, d) - δ(a/2)(d, -d; a/2, a/2)]^★ ≡ 4U_n`
    FourUn,
    /// `[2Σ (d, -d; -k, a+k) + δ(a/2)(d, -d; a/2, a/2)]^★ ≡ 2U_n`
    TwoUn,
    /// `Σ_{X_n} γ^★ ≡ [Σ (a+k, k; d, d) + 2Σ (d, d; k, a+k)]^★`
    XnSum,
    /// Odd `n`: `Σ_{X'_n} γ^★ ≡ [2Σ (d, d; k, a+k)]^★`
    XnPrimedOdd,
    /// Even `n`: the parity-restricted analogue.
    XnPrimedEven,
    /// Left side of `FourUn` against `2(T_n^∞ U^2)^★`.
    TwoTnU2,
    /// Left side of `TwoUn` against `(U T_n^∞ U^2)^★`.
    UTnU2,
}

impl Congruence {
    pub fn name(&self) -> &'static str {
        match self {
            Congruence::FourUn => "four-un",
            Congruence::TwoUn => "two-un",
            Congruence::XnSum => "xn-sum",
            Congruence::XnPrimedOdd => "xn-primed-odd",
            Congruence::XnPrimedEven => "xn-primed-even",
            Congruence::TwoTnU2 => "two-tn-u2",
            Congruence::UTnU2 => "u-tn-u2",
        }
    }
}

fn actual(a: i64, b: i64, c: i64, d: i64) -> MatN {
    MatN::from_i64(a, b, c, d).expect("positive determinant")
}

/// Ordered factorizations `n = a·d`.
fn factor_pairs(n: u64) -> Vec<(i64, i64)> {
    divisors(n)
        .into_iter()
        .map(|a| (a as i64, (n / a) as i64))
        .collect()
}

/// Integers `k` with `lo2 < 2k < hi2`.
fn half_open_range(lo2: i64, hi2: i64) -> impl Iterator<Item = i64> {
    let first = lo2.div_euclid(2) + 1;
    (first..).take_while(move |k| 2 * k < hi2)
}

/// `Σ_{-d-a/2 < k < d-a/2} (a+k, k; d, d)` for one factorization, optionally
/// restricted to `k ≡ d (mod 2)`.
fn eq_row_terms(out: &mut RingElt, a: i64, d: i64, coeff: i64, parity_d: bool) {
    for k in half_open_range(-2 * d - a, 2 * d - a) {
        if parity_d && (k - d).rem_euclid(2) != 0 {
            continue;
        }
        out.add_term(actual(a + k, k, d, d), rat(coeff));
    }
}

/// `Σ_{-a/2 < k < (d-a)/2} (d, d; k, a+k)`.
fn column_terms(out: &mut RingElt, a: i64, d: i64, coeff: i64) {
    for k in half_open_range(-a, d - a) {
        out.add_term(actual(d, d, k, a + k), rat(coeff));
    }
}

/// The formal matrix sums (before `★`) on the side of each congruence that
/// is built from explicit ranges.
pub fn rhs_elements(n: u64, which: Congruence) -> Result<RingElt> {
    check_n(n)?;
    let mut out = RingElt::zero(n);
    match which {
        Congruence::FourUn | Congruence::TwoTnU2 => {
            for (a, d) in factor_pairs(n) {
                for k in half_open_range(-2 * d - a, 2 * d - a) {
                    out.add_term(actual(a + k, -k, -d, d), rat(1));
                }
                if a % 2 == 0 {
                    out.add_term(actual(d, -d, a / 2, a / 2), rat(-1));
                }
            }
        }
        Congruence::TwoUn | Congruence::UTnU2 => {
            for (a, d) in factor_pairs(n) {
                for k in half_open_range(-a, d - a) {
                    out.add_term(actual(d, -d, -k, a + k), rat(2));
                }
                if a % 2 == 0 {
                    out.add_term(actual(d, -d, a / 2, a / 2), rat(1));
                }
            }
        }
        Congruence::XnSum => {
            for (a, d) in factor_pairs(n) {
                eq_row_terms(&mut out, a, d, 1, false);
                column_terms(&mut out, a, d, 2);
            }
        }
        Congruence::XnPrimedOdd => {
            if n.is_multiple_of(2) {
                return Err(Error::InvalidArgument(format!("the odd-n congruence needs odd n, got {n}")));
            }
            for (a, d) in factor_pairs(n) {
                column_terms(&mut out, a, d, 2);
            }
        }
        Congruence::XnPrimedEven => {
            if !n.is_multiple_of(2) {
                return Err(Error::InvalidArgument(format!("the even-n congruence needs even n, got {n}")));
            }
            for (a, d) in factor_pairs(n) {
                if a % 2 == 0 {
                    eq_row_terms(&mut out, a, d, 1, true);
                    if d % 2 == 0 {
                        column_terms(&mut out, a, d, 2);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The element that must lie in `J + J^∨` for the congruence to hold.
pub fn congruence_difference(n: u64, which: Congruence) -> Result<RingElt> {
    let rhs_star = rhs_elements(n, which)?.star();
    Ok(match which {
        Congruence::FourUn => &rhs_star - &un_element(n)?.scale(&rat(4)),
        Congruence::TwoUn => &rhs_star - &un_element(n)?.scale(&rat(2)),
        Congruence::XnSum => &star_sum(&build_set(n, SetLabel::Xn)?) - &rhs_star,
        Congruence::XnPrimedOdd | Congruence::XnPrimedEven => &star_sum(&build_set(n, SetLabel::XnP)?) - &rhs_star,
        Congruence::TwoTnU2 => {
            let tu2 = tn_inf(n)?.right_mul_mat(&MatN::u2());
            &rhs_star - &tu2.star().scale(&rat(2))
        }
        Congruence::UTnU2 => {
            let utu2 = tn_inf(n)?.right_mul_mat(&MatN::u2()).left_mul_mat(&MatN::u());
            &rhs_star - &utu2.star()
        }
    })
}

/// Witness search for the congruence at `n`.
pub fn verify_congruence(n: u64, which: Congruence, cfg: &SearchConfig) -> Result<MembershipVerdict> {
    let delta = congruence_difference(n, which)?;
    search_membership(&delta, &ModuleSpec::j_plus_j_adj(), cfg)
}

/// `N` applied to a formal sum: `Σ coeff · sgn(cd)`.
pub fn signed_count_elt(x: &RingElt) -> Rational {
    x.signed_count()
}

pub fn is_zero_elt(x: &RingElt) -> bool {
    x.is_zero() && x.aug().is_zero()
}
