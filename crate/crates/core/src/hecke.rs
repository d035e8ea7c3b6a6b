//! Builders and exact verifiers for `T_n^∞`, the `T̃_n` elements solving
//! `T_n^∞(1-S) = (1-S)T̃_n + (1-T)Y_n`, and the element `U_n`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linsolve::{Solution, SparseSystem};
use crate::matrix::MatN;
use crate::membership::{
    in_i_plus_i_adj, in_module_1mt_left, left_t_orbit_rep, search_membership, support_closure,
    MembershipVerdict, ModuleSpec, SearchConfig,
};
use crate::ring::{consts, Rational, RingElt};

/// A `T̃_n` together with the `Y_n` that makes the Hecke relation hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckePair {
    pub n: u64,
    pub tilde: RingElt,
    pub y: RingElt,
    /// Set only after `T_n^∞(1-S) = (1-S)·tilde + (1-T)·y` was checked exactly.
    pub verified: bool,
}

fn require_positive(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut a = 1;
    while a * a <= n {
        if n.is_multiple_of(a) {
            small.push(a);
            if a * a != n {
                large.push(n / a);
            }
        }
        a += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `t_{a,d}(b) = (a b; 0 d)`.
pub fn t_ad(a: u64, d: u64, b: i64) -> MatN {
    MatN::new(a.into(), b.into(), BigInt::zero(), d.into()).expect("a, d positive")
}

/// `M_n^∞ = {(a b; 0 d) : ad = n, 0 ≤ b < d}`, ordered by `(a, b)`.
pub fn m_n_inf(n: u64) -> Result<Vec<MatN>> {
    require_positive(n)?;
    let mut out = Vec::new();
    for a in divisors(n) {
        let d = n / a;
        for b in 0..d {
            out.push(t_ad(a, d, b as i64));
        }
    }
    Ok(out)
}

/// `T_n^∞`, the formal sum of `M_n^∞`.
pub fn tn_inf(n: u64) -> Result<RingElt> {
    RingElt::sum_of(n, m_n_inf(n)?)
}

/// Candidate `T̃_n`: the sum of adjoints of all `(a b; c d)` with
/// `ad - bc = n`, `a > b ≥ 0`, `d > c ≥ 0`.
///
/// Always pass the result through [`verify_hecke_relation`] before use.
pub fn merel_adjoint_candidate(n: u64) -> Result<RingElt> {
    require_positive(n)?;
    let mut out = RingElt::zero(n);
    // a ≥ b+1 and d ≥ c+1 force n ≥ b + c + 1.
    for b in 0..n {
        for c in 0..n - b {
            let target = n + b * c;
            for a in divisors(target) {
                let d = target / a;
                if a > b && d > c {
                    let m = MatN::new(a.into(), b.into(), c.into(), d.into())?;
                    out.add_term(m.adjoint(), Rational::one());
                }
            }
        }
    }
    Ok(out)
}

/// Checks the Hecke relation for `tilde` exactly and extracts `Y_n`.
///
/// `X = T_n^∞(1-S) - (1-S)·tilde` must lie in `(1-T)R_n`; the orbit-sum
/// decision returns `Y_n` with `(1-T)Y_n = X` on success.
pub fn verify_hecke_relation(n: u64, tilde: &RingElt) -> Result<(MembershipVerdict, HeckePair)> {
    require_positive(n)?;
    if tilde.det() != &BigInt::from(n) {
        return Err(Error::DeterminantMismatch {
            left: n.to_string(),
            right: tilde.det().to_string(),
        });
    }
    let s = consts::one_minus_s();
    let x = &(&tn_inf(n)? * &s) - &(&s * tilde);
    let verdict = in_module_1mt_left(&x)?;
    let (y, verified) = match &verdict {
        MembershipVerdict::Member(w) => (w.witnesses[0].clone(), true),
        _ => (RingElt::zero(n), false),
    };
    if verified {
        let lhs = &tn_inf(n)? * &s;
        let rhs = &(&s * tilde) + &(&consts::one_minus_t() * &y);
        if lhs != rhs {
            return Err(Error::Internal(format!("Hecke relation re-check failed for n = {n}")));
        }
    }
    Ok((
        verdict,
        HeckePair {
            n,
            tilde: tilde.clone(),
            y,
            verified,
        },
    ))
}

/// Finds some `T̃_n` on the depth-`B` closure of `supp(T_n^∞(1-S))` by an
/// exact solve of the left T-orbit-sum equations.
pub fn solve_tilde(n: u64, cfg: &SearchConfig) -> Result<HeckePair> {
    require_positive(n)?;
    let s = MatN::s();
    let rhs_elt = &tn_inf(n)? * &consts::one_minus_s();
    let mut window: Vec<MatN> = support_closure(&rhs_elt, cfg.depth).into_iter().collect();
    window.sort_by_cached_key(|m| (m.weight(), m.clone()));
    if window.len() > cfg.max_unknowns {
        return Err(Error::ResourceLimit {
            depth: cfg.depth,
            unknowns: window.len(),
            equations: 0,
        });
    }

    // Σ_{p ∈ orbit} [A(p) - X(p) + X(Sp)] = 0 for every left T-orbit.
    let mut eq_of: HashMap<MatN, usize> = HashMap::new();
    let mut eqs: Vec<(Vec<(usize, Rational)>, Rational)> = Vec::new();
    let mut slot = |rep: MatN, eqs: &mut Vec<(Vec<(usize, Rational)>, Rational)>| {
        *eq_of.entry(rep).or_insert_with(|| {
            eqs.push((Vec::new(), Rational::zero()));
            eqs.len() - 1
        })
    };
    for (col, m) in window.iter().enumerate() {
        let e = slot(left_t_orbit_rep(m).0, &mut eqs);
        eqs[e].0.push((col, -Rational::one()));
        let e = slot(left_t_orbit_rep(&(&s * m)).0, &mut eqs);
        eqs[e].0.push((col, Rational::one()));
    }
    for (p, c) in rhs_elt.terms() {
        let e = slot(left_t_orbit_rep(p).0, &mut eqs);
        eqs[e].1 -= c;
    }
    let mut sys = SparseSystem::new(window.len());
    for (row, rhs) in eqs {
        sys.push_row(row, rhs);
    }
    let sol = match sys.solve() {
        Solution::Feasible(sol) => sol,
        Solution::Inconsistent { .. } => return Err(Error::DepthExhausted { n, depth: cfg.depth }),
    };
    let mut tilde = RingElt::zero(n);
    for (m, v) in window.into_iter().zip(sol) {
        if !v.is_zero() {
            tilde.add_term(m, v);
        }
    }
    let (verdict, pair) = verify_hecke_relation(n, &tilde)?;
    if !verdict.is_member() {
        return Err(Error::Internal(format!(
            "solved T̃_{n} fails the Hecke relation: {:?}",
            verdict.refutation()
        )));
    }
    Ok(pair)
}

/// [`solve_tilde`] at depths `0, 2, 4, ...` up to `cfg.depth`, returning the
/// first success; later depths are only tried when an earlier window is infeasible.
pub fn solve_tilde_deepening(n: u64, cfg: &SearchConfig) -> Result<HeckePair> {
    let mut depths: Vec<usize> = (0..cfg.depth).step_by(2).collect();
    depths.push(cfg.depth);
    let mut last = None;
    for depth in depths {
        match solve_tilde(n, &SearchConfig { depth, ..*cfg }) {
            Err(Error::DepthExhausted { .. }) => last = Some(depth),
            other => return other,
        }
    }
    Err(Error::DepthExhausted {
        n,
        depth: last.unwrap_or(cfg.depth),
    })
}

/// `U_n = T_n^∞ U^2 (1-S) + (1-S) U T_n^{∞∨}`.
///
/// Since `U^2 = ST^{-1}` and `U = TS` this is also
/// `T_n^∞ ST^{-1}(1-S) + (1-S) TS T_n^{∞∨}`.
pub fn un_element(n: u64) -> Result<RingElt> {
    let u = MatN::u();
    let u2 = MatN::u2();
    assert_eq!(u2, &MatN::s() * &MatN::t_inv(), "U^2 = S T^-1");
    assert_eq!(u, &MatN::t() * &MatN::s(), "U = T S");
    let tn = tn_inf(n)?;
    let s = consts::one_minus_s();
    let left = &tn.right_mul_mat(&u2) * &s;
    let right = &s * &tn.adjoint().left_mul_mat(&u);
    Ok(&left + &right)
}

/// `T_n^∞(1-T) ∈ (1-T)R_n`, decided exactly.
pub fn check_eq21(n: u64) -> Result<MembershipVerdict> {
    in_module_1mt_left(&(&tn_inf(n)? * &consts::one_minus_t()))
}

/// Witness search for `U_n ∈ J + J^∨`.
pub fn check_h1(n: u64, cfg: &SearchConfig) -> Result<MembershipVerdict> {
    search_membership(&un_element(n)?, &ModuleSpec::j_plus_j_adj(), cfg)
}

/// `W = T̃(T - T^{-1}) + (T^{-1} - T)T̃^∨`, the element that must lie in `I + I^∨`.
pub fn theorem_element(tilde: &RingElt) -> RingElt {
    let d = consts::t_minus_t_inv();
    &(tilde * &d) - &(&d * &tilde.adjoint())
}

/// Witness search for `W ∈ I + I^∨` given a verified `T̃_n`.
pub fn check_theorem(pair: &HeckePair, cfg: &SearchConfig) -> Result<MembershipVerdict> {
    if !pair.verified {
        return Err(Error::InvalidArgument(format!(
            "T̃_{} has not passed the Hecke relation check",
            pair.n
        )));
    }
    in_i_plus_i_adj(&theorem_element(&pair.tilde), cfg)
}

/// `σ_1(n)` by trial division; used as a cross-check on `|M_n^∞|`.
pub fn sigma1(n: u64) -> u64 {
    divisors(n).into_iter().sum()
}
