//! Membership in the one- and two-sided modules built from `1 ± S`, `1 - T`,
//! `1 - T^{-1}` and `1 + U + U^2`.
//!
//! One-sided modules are decided exactly by orbit sums: the left actions of
//! `⟨T⟩`, `⟨S⟩`, `⟨U⟩` and the right actions of `⟨T⟩`, `⟨S⟩` on `M_n` are all
//! free, so `x ∈ (1-g)R_n` exactly when every orbit sum of `x` vanishes. The
//! sum `J + J^∨` has no decision procedure here; it gets a witness search over
//! a growing support window that can prove membership but never refute it,
//! apart from the augmentation certificate.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linsolve::{Solution, SparseSystem};
use crate::matrix::MatN;
use crate::ring::{consts, rat, Rational, RingElt};

pub const DEFAULT_DEPTH: usize = 4;
pub const DEFAULT_MAX_UNKNOWNS: usize = 1_500_000;

/// A sum of submodules `Σ L_i · R_n · R_i` with every `L_i`, `R_i` in `R_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pairs: Vec<(RingElt, RingElt)>,
}

impl ModuleSpec {
    pub fn new(pairs: Vec<(RingElt, RingElt)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidArgument("module spec needs at least one pair".into()));
        }
        for (l, r) in &pairs {
            if !l.det().is_one() || !r.det().is_one() {
                return Err(Error::InvalidArgument(format!(
                    "module spec factors must have determinant 1, got {} and {}",
                    l.det(),
                    r.det()
                )));
            }
        }
        Ok(ModuleSpec { pairs })
    }

    fn from_pairs(pairs: Vec<(RingElt, RingElt)>) -> Self {
        Self::new(pairs).expect("built-in module spec")
    }

    pub fn pairs(&self) -> &[(RingElt, RingElt)] {
        &self.pairs
    }

    /// `(1-T) R_n`.
    pub fn left_one_minus_t() -> Self {
        Self::from_pairs(vec![(consts::one_minus_t(), RingElt::one())])
    }

    /// `(1-S) R_n`.
    pub fn left_one_minus_s() -> Self {
        Self::from_pairs(vec![(consts::one_minus_s(), RingElt::one())])
    }

    /// `R_n (1-T^{-1})`.
    pub fn right_one_minus_t_inv() -> Self {
        Self::from_pairs(vec![(RingElt::one(), consts::one_minus_t_inv())])
    }

    /// `R_n (1-S)`.
    pub fn right_one_minus_s() -> Self {
        Self::from_pairs(vec![(RingElt::one(), consts::one_minus_s())])
    }

    pub fn left_one_plus_s() -> Self {
        Self::from_pairs(vec![(consts::one_plus_s(), RingElt::one())])
    }

    pub fn left_one_plus_u_u2() -> Self {
        Self::from_pairs(vec![(consts::one_plus_u_u2(), RingElt::one())])
    }

    /// `J = (1-T) R_n (1-S)`.
    pub fn j() -> Self {
        Self::from_pairs(vec![(consts::one_minus_t(), consts::one_minus_s())])
    }

    /// `J^∨ = (1-S) R_n (1-T^{-1})`.
    pub fn j_adj() -> Self {
        Self::from_pairs(vec![(consts::one_minus_s(), consts::one_minus_t_inv())])
    }

    /// `J + J^∨`, in that order.
    pub fn j_plus_j_adj() -> Self {
        Self::from_pairs(vec![
            (consts::one_minus_t(), consts::one_minus_s()),
            (consts::one_minus_s(), consts::one_minus_t_inv()),
        ])
    }

    /// Position of `J` and `J^∨` if this spec is exactly their sum.
    fn as_j_plus_j_adj(&self) -> Option<(usize, usize)> {
        if self.pairs.len() != 2 {
            return None;
        }
        let j = (consts::one_minus_t(), consts::one_minus_s());
        let jv = (consts::one_minus_s(), consts::one_minus_t_inv());
        if self.pairs[0] == j && self.pairs[1] == jv {
            Some((0, 1))
        } else if self.pairs[1] == j && self.pairs[0] == jv {
            Some((1, 0))
        } else {
            None
        }
    }

    /// `Σ L_i · w_i · R_i`.
    pub fn apply(&self, witnesses: &[RingElt]) -> Result<RingElt> {
        if witnesses.len() != self.pairs.len() {
            return Err(Error::InvalidArgument(format!(
                "{} witnesses for {} module pairs",
                witnesses.len(),
                self.pairs.len()
            )));
        }
        let mut out: Option<RingElt> = None;
        for ((l, r), w) in self.pairs.iter().zip(witnesses) {
            let term = &(l * w) * r;
            out = Some(match out {
                None => term,
                Some(acc) => acc.try_add(&term)?,
            });
        }
        Ok(out.expect("spec is nonempty"))
    }

    /// `aug(L_i) = 0` or `aug(R_i) = 0` for every pair, so `aug` vanishes on the module.
    fn kills_augmentation(&self) -> bool {
        self.pairs
            .iter()
            .all(|(l, r)| l.aug().is_zero() || r.aug().is_zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.pairs
                .iter()
                .map(|(l, r)| serde_json::json!([l.to_json(), r.to_json()]))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("module spec must be an array of pairs".into()))?;
        let pairs = arr
            .iter()
            .map(|p| {
                let pair = p
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::Parse(format!("module pair must be [L, R]: {p}")))?;
                Ok((RingElt::from_json(&pair[0])?, RingElt::from_json(&pair[1])?))
            })
            .collect::<Result<Vec<_>>>()?;
        ModuleSpec::new(pairs)
    }
}

/// Explicit certificate that `target = Σ L_i · witnesses_i · R_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub spec: ModuleSpec,
    pub target: RingElt,
    pub witnesses: Vec<RingElt>,
    /// Support-window depth the witness was found at; `None` for decision procedures.
    pub depth: Option<usize>,
}

impl Witness {
    pub fn verify(&self) -> bool {
        matches!(self.spec.apply(&self.witnesses), Ok(v) if v == self.target)
    }

    fn checked(self) -> Result<Self> {
        if self.verify() {
            Ok(self)
        } else {
            Err(Error::Internal(format!(
                "witness for {} does not reproduce its target",
                self.target
            )))
        }
    }
}

/// Why an element is outside a module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    LeftTOrbitSum { orbit: String, sum: String },
    RightTOrbitSum { orbit: String, sum: String },
    LeftSPair { matrix: String, value: String },
    RightSPair { matrix: String, value: String },
    LeftUOrbit { matrix: String },
    Augmentation { value: String },
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::LeftTOrbitSum { orbit, sum } => {
                write!(f, "left T-orbit of {orbit} has coefficient sum {sum}")
            }
            Refutation::RightTOrbitSum { orbit, sum } => {
                write!(f, "right T-orbit of {orbit} has coefficient sum {sum}")
            }
            Refutation::LeftSPair { matrix, value } => {
                write!(f, "left S-pair of {matrix} violates its relation by {value}")
            }
            Refutation::RightSPair { matrix, value } => {
                write!(f, "right S-pair of {matrix} violates its relation by {value}")
            }
            Refutation::LeftUOrbit { matrix } => {
                write!(f, "coefficients are not constant on the left U-orbit of {matrix}")
            }
            Refutation::Augmentation { value } => {
                write!(f, "augmentation is {value} but vanishes on the module")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    Member(Witness),
    NotMember(Refutation),
    /// No witness within the searched window; says nothing about membership.
    Undetermined { depth: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Member,
    NotMember,
    Undetermined,
}

impl MembershipVerdict {
    pub fn status(&self) -> Status {
        match self {
            MembershipVerdict::Member(_) => Status::Member,
            MembershipVerdict::NotMember(_) => Status::NotMember,
            MembershipVerdict::Undetermined { .. } => Status::Undetermined,
        }
    }

    pub fn is_member(&self) -> bool {
        matches!(self, MembershipVerdict::Member(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            MembershipVerdict::Member(w) => Some(w),
            _ => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            MembershipVerdict::NotMember(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub depth: usize,
    pub max_unknowns: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth: DEFAULT_DEPTH,
            max_unknowns: DEFAULT_MAX_UNKNOWNS,
        }
    }
}

impl SearchConfig {
    pub fn with_depth(depth: usize) -> Self {
        SearchConfig {
            depth,
            ..Self::default()
        }
    }
}

// ---------------------------------------------------------------------------
// Orbit representatives

/// Representative `m0` of the orbit `⟨T⟩ m` and the offset `k` with `m = T^k m0`.
///
/// Signed so that `c > 0` (or `c = 0 < d`), the representative has `a ∈ [0, c)`,
/// or `b ∈ [0, d)` when `c = 0`.
pub fn left_t_orbit_rep(m: &MatN) -> (MatN, BigInt) {
    // Left T-multiplication fixes the bottom row, so fix the sign of ±m by it.
    let (mut a, mut b, mut c, mut d) = (m.a().clone(), m.b().clone(), m.c().clone(), m.d().clone());
    if c.is_negative() || (c.is_zero() && d.is_negative()) {
        (a, b, c, d) = (-a, -b, -c, -d);
    }
    // T^{-k} m = (a - kc, b - kd; c, d)
    let k = if !c.is_zero() {
        (&a - a.mod_floor(&c)) / &c
    } else {
        (&b - b.mod_floor(&d)) / &d
    };
    let rep = MatN::new(&a - &k * &c, &b - &k * &d, c, d).expect("same determinant");
    (rep, k)
}

/// Representative `m0` of `m ⟨T⟩` and the offset `k` with `m = m0 T^k`.
///
/// Signed so that `c > 0` (or `c = 0 < a`), the representative has `d ∈ [0, c)`,
/// or `b ∈ [0, a)` when `c = 0`.
pub fn right_t_orbit_rep(m: &MatN) -> (MatN, BigInt) {
    // Right T-multiplication fixes the first column.
    let (mut a, mut b, mut c, mut d) = (m.a().clone(), m.b().clone(), m.c().clone(), m.d().clone());
    if c.is_negative() || (c.is_zero() && a.is_negative()) {
        (a, b, c, d) = (-a, -b, -c, -d);
    }
    // m T^{-k} = (a, b - ka; c, d - kc)
    let k = if !c.is_zero() {
        (&d - d.mod_floor(&c)) / &c
    } else {
        (&b - b.mod_floor(&a)) / &a
    };
    let rep = MatN::new(a.clone(), &b - &k * &a, c.clone(), &d - &k * &c).expect("same determinant");
    (rep, k)
}

type OrbitMap = BTreeMap<MatN, BTreeMap<BigInt, Rational>>;

fn group_left_t(x: &RingElt) -> OrbitMap {
    let mut orbits: OrbitMap = BTreeMap::new();
    for (m, c) in x.terms() {
        let (rep, k) = left_t_orbit_rep(m);
        orbits.entry(rep).or_default().insert(k, c.clone());
    }
    orbits
}

fn group_right_t(x: &RingElt) -> OrbitMap {
    let mut orbits: OrbitMap = BTreeMap::new();
    for (m, c) in x.terms() {
        let (rep, k) = right_t_orbit_rep(m);
        orbits.entry(rep).or_default().insert(k, c.clone());
    }
    orbits
}

fn first_nonzero_sum(orbits: &OrbitMap) -> Option<(MatN, Rational)> {
    orbits.iter().find_map(|(rep, coeffs)| {
        let sum = coeffs.values().fold(Rational::zero(), |acc, c| acc + c);
        (!sum.is_zero()).then(|| (rep.clone(), sum))
    })
}

/// Solves `(1-T) y = x` orbit by orbit; `x` must have vanishing left T-orbit sums.
fn left_t_prefix_witness(x: &RingElt, orbits: &OrbitMap) -> RingElt {
    let mut y = RingElt::zero(x.det().clone());
    for (rep, coeffs) in orbits {
        let (Some(lo), Some(hi)) = (coeffs.keys().next(), coeffs.keys().next_back()) else {
            continue;
        };
        let mut acc = Rational::zero();
        let mut k = lo.clone();
        while &k < hi {
            if let Some(c) = coeffs.get(&k) {
                acc += c;
            }
            if !acc.is_zero() {
                y.add_term(&MatN::t_pow(&k) * rep, acc.clone());
            }
            k += 1;
        }
    }
    y
}

/// Solves `y (1-T^{-1}) = x` orbit by orbit; `x` must have vanishing right T-orbit sums.
fn right_t_prefix_witness(x: &RingElt, orbits: &OrbitMap) -> RingElt {
    let mut y = RingElt::zero(x.det().clone());
    for (rep, coeffs) in orbits {
        let (Some(lo), Some(hi)) = (coeffs.keys().next(), coeffs.keys().next_back()) else {
            continue;
        };
        // x_k = y_k - y_{k+1}, so y_k = -Σ_{j<k} x_j.
        let mut acc = Rational::zero();
        let mut k = lo.clone();
        while &k < hi {
            if let Some(c) = coeffs.get(&k) {
                acc += c;
            }
            let next = &k + 1;
            if !acc.is_zero() {
                y.add_term(rep * &MatN::t_pow(&next), -acc.clone());
            }
            k = next;
        }
    }
    y
}

fn member(spec: ModuleSpec, target: &RingElt, witnesses: Vec<RingElt>) -> Result<MembershipVerdict> {
    let w = Witness {
        spec,
        target: target.clone(),
        witnesses,
        depth: None,
    }
    .checked()?;
    Ok(MembershipVerdict::Member(w))
}

// ---------------------------------------------------------------------------
// One-sided decision procedures

/// Decides `x ∈ (1-T) R_n`.
pub fn in_module_1mt_left(x: &RingElt) -> Result<MembershipVerdict> {
    let orbits = group_left_t(x);
    if let Some((rep, sum)) = first_nonzero_sum(&orbits) {
        return Ok(MembershipVerdict::NotMember(Refutation::LeftTOrbitSum {
            orbit: rep.to_string(),
            sum: sum.to_string(),
        }));
    }
    let y = left_t_prefix_witness(x, &orbits);
    member(ModuleSpec::left_one_minus_t(), x, vec![y])
}

/// Decides `x ∈ R_n (1-T^{-1})`.
pub fn in_module_1mtinv_right(x: &RingElt) -> Result<MembershipVerdict> {
    let orbits = group_right_t(x);
    if let Some((rep, sum)) = first_nonzero_sum(&orbits) {
        return Ok(MembershipVerdict::NotMember(Refutation::RightTOrbitSum {
            orbit: rep.to_string(),
            sum: sum.to_string(),
        }));
    }
    let y = right_t_prefix_witness(x, &orbits);
    member(ModuleSpec::right_one_minus_t_inv(), x, vec![y])
}

/// Checks `x(p) + sign·x(q) = 0` over pairs `{p, q = pair(p)}` and builds the
/// witness that puts `x(base)` on the smaller element of each pair.
fn decide_pairs(
    x: &RingElt,
    partner: impl Fn(&MatN) -> MatN,
    sign: i64,
    witness_on_base: bool,
) -> std::result::Result<RingElt, (MatN, Rational)> {
    let sign = rat(sign);
    let mut y = RingElt::zero(x.det().clone());
    let mut seen = BTreeSet::new();
    for (m, c) in x.terms() {
        if seen.contains(m) {
            continue;
        }
        let p = partner(m);
        let cp = x.coeff(&p);
        let defect = c + &sign * &cp;
        if !defect.is_zero() {
            return Err((m.clone(), defect));
        }
        let (base, cb) = if m < &p { (m.clone(), c.clone()) } else { (p.clone(), cp) };
        if witness_on_base {
            y.add_term(base, cb);
        }
        seen.insert(m.clone());
        seen.insert(p);
    }
    Ok(y)
}

/// Decides `x ∈ (1-S) R_n`: `x(m) + x(Sm) = 0` for all `m`.
pub fn in_module_1ms_left(x: &RingElt) -> Result<MembershipVerdict> {
    let s = MatN::s();
    match decide_pairs(x, |m| &s * m, 1, true) {
        Ok(y) => member(ModuleSpec::left_one_minus_s(), x, vec![y]),
        Err((m, v)) => Ok(MembershipVerdict::NotMember(Refutation::LeftSPair {
            matrix: m.to_string(),
            value: v.to_string(),
        })),
    }
}

/// Decides `x ∈ R_n (1-S)`: `x(m) + x(mS) = 0` for all `m`.
pub fn in_module_1ms_right(x: &RingElt) -> Result<MembershipVerdict> {
    let s = MatN::s();
    match decide_pairs(x, |m| m * &s, 1, true) {
        Ok(y) => member(ModuleSpec::right_one_minus_s(), x, vec![y]),
        Err((m, v)) => Ok(MembershipVerdict::NotMember(Refutation::RightSPair {
            matrix: m.to_string(),
            value: v.to_string(),
        })),
    }
}

/// Decides `x ∈ (1+S) R_n`: `x(m) = x(Sm)` for all `m`.
pub fn in_module_1ps(x: &RingElt) -> Result<MembershipVerdict> {
    let s = MatN::s();
    match decide_pairs(x, |m| &s * m, -1, true) {
        Ok(y) => member(ModuleSpec::left_one_plus_s(), x, vec![y]),
        Err((m, v)) => Ok(MembershipVerdict::NotMember(Refutation::LeftSPair {
            matrix: m.to_string(),
            value: v.to_string(),
        })),
    }
}

/// Decides `x ∈ (1+U+U^2) R_n`: `x` constant on every left U-orbit.
pub fn in_module_1puuu(x: &RingElt) -> Result<MembershipVerdict> {
    let u = MatN::u();
    let third = Rational::new(1.into(), 3.into());
    let mut y = RingElt::zero(x.det().clone());
    let mut seen = BTreeSet::new();
    for (m, c) in x.terms() {
        if seen.contains(m) {
            continue;
        }
        let um = &u * m;
        let uum = &u * &um;
        if x.coeff(&um) != *c || x.coeff(&uum) != *c {
            return Ok(MembershipVerdict::NotMember(Refutation::LeftUOrbit {
                matrix: m.to_string(),
            }));
        }
        for g in [m.clone(), um, uum] {
            y.add_term(g.clone(), c * &third);
            seen.insert(g);
        }
    }
    member(ModuleSpec::left_one_plus_u_u2(), x, vec![y])
}

/// Decides `x ∈ J = (1-T) R_n (1-S)`.
///
/// The action `m ↦ T^k m S^e` is free, so `x ∈ J` iff `x ∈ R_n(1-S)` and
/// `x ∈ (1-T)R_n`; then the unique `z` with `(1-T)z = x` satisfies
/// `z(1+S) = 0` and `x = (1-T)(z/2)(1-S)`.
pub fn in_j(x: &RingElt) -> Result<MembershipVerdict> {
    let s = MatN::s();
    if let Err((m, v)) = decide_pairs(x, |m| m * &s, 1, false) {
        return Ok(MembershipVerdict::NotMember(Refutation::RightSPair {
            matrix: m.to_string(),
            value: v.to_string(),
        }));
    }
    let orbits = group_left_t(x);
    if let Some((rep, sum)) = first_nonzero_sum(&orbits) {
        return Ok(MembershipVerdict::NotMember(Refutation::LeftTOrbitSum {
            orbit: rep.to_string(),
            sum: sum.to_string(),
        }));
    }
    let z = left_t_prefix_witness(x, &orbits);
    let y = z.scale(&Rational::new(1.into(), 2.into()));
    member(ModuleSpec::j(), x, vec![y])
}

/// Decides `x ∈ J^∨ = (1-S) R_n (1-T^{-1})` through `x^∨ ∈ J`.
pub fn in_j_adj(x: &RingElt) -> Result<MembershipVerdict> {
    Ok(match in_j(&x.adjoint())? {
        MembershipVerdict::Member(w) => {
            let y = w.witnesses[0].adjoint();
            return member(ModuleSpec::j_adj(), x, vec![y]);
        }
        other => other,
    })
}

/// Decides `x ∈ I = (1+S)R_n + (1+U+U^2)R_n` via `(1-S)x ∈ (1-T)R_n`.
///
/// A `Member` verdict carries the witness `y` with `(1-S)x = (1-T)y`.
pub fn in_i(x: &RingElt) -> Result<MembershipVerdict> {
    in_module_1mt_left(&(&consts::one_minus_s() * x))
}

/// Decides `x ∈ I^∨` as `x^∨ ∈ I`.
pub fn in_i_adj(x: &RingElt) -> Result<MembershipVerdict> {
    in_i(&x.adjoint())
}

/// Searches for `x ∈ I + I^∨` through the equivalent condition
/// `(1-S) x (1-S) ∈ J + J^∨`.
pub fn in_i_plus_i_adj(x: &RingElt, cfg: &SearchConfig) -> Result<MembershipVerdict> {
    let s = consts::one_minus_s();
    let target = &(&s * x) * &s;
    search_membership(&target, &ModuleSpec::j_plus_j_adj(), cfg)
}

// ---------------------------------------------------------------------------
// Witness search

/// The set of matrices reachable from `supp(x)` by at most `depth` of the
/// moves `m ↦ T^{±1}m, mT^{±1}, Sm, mS`.
pub fn support_closure(x: &RingElt, depth: usize) -> BTreeSet<MatN> {
    let t = MatN::t();
    let ti = MatN::t_inv();
    let s = MatN::s();
    let mut seen: BTreeSet<MatN> = x.support().cloned().collect();
    let mut frontier: VecDeque<MatN> = seen.iter().cloned().collect();
    for _ in 0..depth {
        let mut next = VecDeque::new();
        for m in frontier {
            for g in [&t * &m, &ti * &m, &m * &t, &m * &ti, &s * &m, &m * &s] {
                if seen.insert(g.clone()) {
                    next.push_back(g);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Orders unknowns small matrices first, so zero-filled free columns favour
/// compact witnesses.
fn ordered_window(window: BTreeSet<MatN>) -> Vec<MatN> {
    let mut cols: Vec<MatN> = window.into_iter().collect();
    cols.sort_by_cached_key(|m| (m.weight(), m.clone()));
    cols
}

/// Searches for `x ∈ Σ L_i R_n R_i` with witnesses supported on the depth-`B`
/// closure of `supp(x)`.
///
/// A feasible exact solve gives `Member`; an infeasible one gives
/// `Undetermined`. The only refutation is the augmentation certificate.
/// The spec `J + J^∨` is routed through a reduced formulation whose `J`
/// component comes from orbit sums instead of unknowns.
pub fn search_membership(
    x: &RingElt,
    spec: &ModuleSpec,
    cfg: &SearchConfig,
) -> Result<MembershipVerdict> {
    if let Some(v) = trivial_verdict(x, spec)? {
        return Ok(v);
    }
    match spec.as_j_plus_j_adj() {
        Some(order) => search_j_plus_j_adj(x, spec, order, cfg),
        None => search_generic(x, spec, cfg),
    }
}

fn trivial_verdict(x: &RingElt, spec: &ModuleSpec) -> Result<Option<MembershipVerdict>> {
    if x.is_zero() {
        let zeros = vec![RingElt::zero(x.det().clone()); spec.pairs.len()];
        return Ok(Some(member(spec.clone(), x, zeros)?));
    }
    let aug = x.aug();
    if !aug.is_zero() && spec.kills_augmentation() {
        return Ok(Some(MembershipVerdict::NotMember(Refutation::Augmentation {
            value: aug.to_string(),
        })));
    }
    Ok(None)
}

/// Unknowns `y_i(m)` for every pair `i` and every `m` in the window; one
/// equation per matrix in the image.
pub fn search_generic(x: &RingElt, spec: &ModuleSpec, cfg: &SearchConfig) -> Result<MembershipVerdict> {
    if let Some(v) = trivial_verdict(x, spec)? {
        return Ok(v);
    }
    let window = ordered_window(support_closure(x, cfg.depth));
    let npairs = spec.pairs.len();
    let ncols = window.len() * npairs;
    if ncols > cfg.max_unknowns {
        return Err(Error::ResourceLimit {
            depth: cfg.depth,
            unknowns: ncols,
            equations: 0,
        });
    }

    let mut row_of: HashMap<MatN, usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut row_index = |p: MatN, rows: &mut Vec<Vec<(usize, Rational)>>| -> usize {
        *row_of.entry(p).or_insert_with(|| {
            rows.push(Vec::new());
            rows.len() - 1
        })
    };
    for (i, (l, r)) in spec.pairs.iter().enumerate() {
        for (j, m) in window.iter().enumerate() {
            let col = i * window.len() + j;
            let image = &(l * &RingElt::basis(m.clone())) * r;
            for (p, c) in image.terms() {
                let ri = row_index(p.clone(), &mut rows);
                rows[ri].push((col, c.clone()));
            }
        }
    }
    for p in x.support() {
        row_index(p.clone(), &mut rows);
    }

    let mut sys = SparseSystem::new(ncols);
    let mut by_row: Vec<(usize, &MatN)> = row_of.iter().map(|(p, &i)| (i, p)).collect();
    by_row.sort_by_key(|(i, _)| *i);
    for (i, p) in by_row {
        sys.push_row(std::mem::take(&mut rows[i]), x.coeff(p));
    }

    match sys.solve() {
        Solution::Inconsistent { .. } => Ok(MembershipVerdict::Undetermined { depth: cfg.depth }),
        Solution::Feasible(sol) => {
            let mut witnesses = Vec::with_capacity(npairs);
            for i in 0..npairs {
                let mut w = RingElt::zero(x.det().clone());
                for (j, m) in window.iter().enumerate() {
                    let v = &sol[i * window.len() + j];
                    if !v.is_zero() {
                        w.add_term(m.clone(), v.clone());
                    }
                }
                witnesses.push(w);
            }
            finish_search(spec, x, witnesses, cfg.depth)
        }
    }
}

fn finish_search(
    spec: &ModuleSpec,
    x: &RingElt,
    witnesses: Vec<RingElt>,
    depth: usize,
) -> Result<MembershipVerdict> {
    let w = Witness {
        spec: spec.clone(),
        target: x.clone(),
        witnesses,
        depth: Some(depth),
    }
    .checked()?;
    Ok(MembershipVerdict::Member(w))
}

/// Reduced search for `x ∈ J + J^∨`.
///
/// The unknown is `γ = β(1-T^{-1})` on the window, constrained by
/// (a) vanishing right T-orbit sums of `γ`, and for `r = x - (1-S)γ`:
/// (b) `r(p) + r(pS) = 0` and (c) vanishing left T-orbit sums of `r`,
/// which together say `r ∈ J`. Both witnesses are then recovered by orbit
/// prefix sums, so arbitrarily long T-chains cost nothing.
fn search_j_plus_j_adj(
    x: &RingElt,
    spec: &ModuleSpec,
    (j_pos, jv_pos): (usize, usize),
    cfg: &SearchConfig,
) -> Result<MembershipVerdict> {
    let s = MatN::s();
    let window = ordered_window(support_closure(x, cfg.depth));
    let ncols = window.len();
    if ncols > cfg.max_unknowns {
        return Err(Error::ResourceLimit {
            depth: cfg.depth,
            unknowns: ncols,
            equations: 0,
        });
    }

    // Equations are keyed by a class label; each collects column coefficients
    // and the constant contributed by x.
    #[derive(PartialEq, Eq, Hash)]
    enum Key {
        RightOrbit(MatN),
        RightSPair(MatN),
        LeftOrbit(MatN),
    }
    let mut eq_of: HashMap<Key, usize> = HashMap::new();
    let mut eqs: Vec<(Vec<(usize, Rational)>, Rational)> = Vec::new();
    let mut slot = |k: Key, eqs: &mut Vec<(Vec<(usize, Rational)>, Rational)>| -> usize {
        *eq_of.entry(k).or_insert_with(|| {
            eqs.push((Vec::new(), Rational::zero()));
            eqs.len() - 1
        })
    };
    let pair_base = |p: &MatN| {
        let q = p * &s;
        if *p < q {
            p.clone()
        } else {
            q
        }
    };
    let one = Rational::one();
    let minus_one = -Rational::one();

    for (col, m) in window.iter().enumerate() {
        // (a)
        let e = slot(Key::RightOrbit(right_t_orbit_rep(m).0), &mut eqs);
        eqs[e].0.push((col, one.clone()));
        // γ(m) enters r(m) with -1 and r(Sm) with +1.
        let sm = &s * m;
        for (p, c) in [(m.clone(), &minus_one), (sm, &one)] {
            let e = slot(Key::RightSPair(pair_base(&p)), &mut eqs);
            eqs[e].0.push((col, c.clone()));
            let e = slot(Key::LeftOrbit(left_t_orbit_rep(&p).0), &mut eqs);
            eqs[e].0.push((col, c.clone()));
        }
    }
    // x moves to the right-hand side.
    for (p, c) in x.terms() {
        let e = slot(Key::RightSPair(pair_base(p)), &mut eqs);
        eqs[e].1 -= c;
        let e = slot(Key::LeftOrbit(left_t_orbit_rep(p).0), &mut eqs);
        eqs[e].1 -= c;
    }

    let mut sys = SparseSystem::new(ncols);
    for (row, rhs) in eqs {
        sys.push_row(row, rhs);
    }
    let sol = match sys.solve() {
        Solution::Inconsistent { .. } => {
            return Ok(MembershipVerdict::Undetermined { depth: cfg.depth })
        }
        Solution::Feasible(sol) => sol,
    };

    let mut gamma = RingElt::zero(x.det().clone());
    for (m, v) in window.iter().zip(sol) {
        if !v.is_zero() {
            gamma.add_term(m.clone(), v);
        }
    }
    let beta = right_t_prefix_witness(&gamma, &group_right_t(&gamma));
    let residual = x - &(&consts::one_minus_s() * &gamma);
    let alpha = match in_j(&residual)? {
        MembershipVerdict::Member(w) => w.witnesses.into_iter().next().expect("one witness"),
        other => {
            return Err(Error::Internal(format!(
                "reduced J + J^∨ solve left a residual outside J: {:?}",
                other.refutation()
            )))
        }
    };
    let mut witnesses = vec![RingElt::zero(x.det().clone()); 2];
    witnesses[j_pos] = alpha;
    witnesses[jv_pos] = beta;
    finish_search(spec, x, witnesses, cfg.depth)
}
