mod common;

use std::collections::BTreeSet;

use hecke_core::geometry::{
    build_set, congruence_difference, orbit_classes, signed_count_set, star_sum, v_n_parametrized,
    weighted_boundary_count, Congruence, Quad, SetLabel,
};
use hecke_core::hecke::{
    check_eq21, m_n_inf, merel_adjoint_candidate, sigma1, solve_tilde, tn_inf, un_element,
    verify_hecke_relation,
};
use hecke_core::membership::{in_i, search_membership, ModuleSpec, SearchConfig};
use hecke_core::ring::{consts, rat, rat_frac};
use hecke_core::theta::{
    lhs_identity1, lhs_identity2, prime_solution_count, rhs_identity1, rhs_identity2, DivisorTables,
};
use hecke_core::{MatN, RingElt};

#[test]
fn divisor_tables_match_trial_division() {
    let t = DivisorTables::new(200);
    for n in 1..=200u64 {
        let i = n as usize;
        assert_eq!(t.sigma1[i] as i64, common::sigma1(n));
        assert_eq!(t.tau[i] as i64, common::tau(n));
        assert_eq!(t.tau_ev[i] as i64, common::tau_ev(n));
        assert_eq!(t.sigma_min[i] as i64, common::sigma_min(n));
        assert_eq!(t.sigma_min_ev[i] as i64, common::sigma_min_ev(n));
        assert_eq!(t.is_square[i], common::is_square(n));
        assert!(t.sigma_min_ev[i] <= t.sigma_min[i]);
        assert!((t.sigma_min[i] as f64) <= 2.0 * (n as f64).sqrt() * t.tau[i] as f64);
        let expect_ev = if n % 2 == 0 { t.tau[i / 2] } else { 0 };
        assert_eq!(t.tau_ev[i], expect_ev);
    }
}

#[test]
fn lhs2_factorization_enumeration_matches_direct_loop() {
    let fast = lhs_identity2(40).unwrap();
    for n in 1..=40 {
        assert_eq!(fast.coeff(n as usize), &rat_frac(common::slow_lhs2_doubled(n), 2), "n = {n}");
    }
}

#[test]
fn prime_counts_match_direct_loop() {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        assert_eq!(prime_solution_count(p).unwrap() as i64, common::slow_prime_count(p as i64));
    }
}

#[test]
fn lattice_signed_and_divisor_counts_agree() {
    let l1 = lhs_identity1(60).unwrap();
    let l2 = lhs_identity2(60).unwrap();
    for n in 1..=60u64 {
        let i = n as usize;
        let x = signed_count_set(n, false).unwrap();
        assert_eq!(l1.coeff(i), &rat(x), "X_{n}");
        assert_eq!(x, common::x_count_formula(n), "X_{n}");
        assert_eq!(weighted_boundary_count(n, false).unwrap(), rat(x));
        let xp = signed_count_set(n, true).unwrap();
        assert_eq!(l2.coeff(i), &rat(xp), "X'_{n}");
        assert_eq!(xp, common::x_primed_count_formula(n), "X'_{n}");
        assert_eq!(weighted_boundary_count(n, true).unwrap(), rat(xp));
    }
}

#[test]
fn identity1_lhs_is_half_integral_and_nonnegative() {
    for (_, c) in lhs_identity1(100).unwrap().iter() {
        assert!(*c >= rat(0));
        assert!((c * rat(2)).is_integer());
    }
}

#[test]
fn rhs_series_use_ordered_factorizations() {
    let r1 = rhs_identity1(30).unwrap();
    let r2 = rhs_identity2(30).unwrap();
    for n in 1..=30u64 {
        let sq = common::is_square(n) as i64;
        let expect1 = 3 * common::sigma1(n) - 2 * common::sigma_min(n) + sq;
        assert_eq!(r1.coeff(n as usize), &rat(expect1));
        let part = |k: u64| if n % k == 0 { common::sigma1(n / k) } else { 0 };
        let expect2 = common::sigma1(n) - 2 * part(2) + 4 * part(4) - 2 * common::sigma_min_ev(n) + sq;
        assert_eq!(r2.coeff(n as usize), &rat(expect2));
    }
}

#[test]
fn m_n_inf_has_sigma1_elements() {
    for n in 1..=40u64 {
        let ms = m_n_inf(n).unwrap();
        assert_eq!(ms.len() as u64, sigma1(n));
        assert_eq!(ms.iter().collect::<BTreeSet<_>>().len(), ms.len());
        assert_eq!(tn_inf(n).unwrap().len() as u64, sigma1(n));
    }
}

#[test]
fn closed_form_and_solved_tildes_differ_by_i() {
    let cfg = SearchConfig::with_depth(4);
    for n in 1..=12u64 {
        let merel = merel_adjoint_candidate(n).unwrap();
        let (v, pair) = verify_hecke_relation(n, &merel).unwrap();
        assert!(v.is_member() && pair.verified, "n = {n}");
        if let Ok(solved) = solve_tilde(n, &cfg) {
            assert!(in_i(&(&solved.tilde - &merel)).unwrap().is_member(), "n = {n}");
        }
    }
}

#[test]
fn eq21_witness_reproduces_target() {
    for n in 1..=20u64 {
        let v = check_eq21(n).unwrap();
        let w = v.witness().unwrap();
        assert!(w.verify());
        assert_eq!(w.target, &tn_inf(n).unwrap() * &consts::one_minus_t());
    }
}

#[test]
fn un_element_is_self_adjoint() {
    for n in 1..=10u64 {
        let u = un_element(n).unwrap();
        assert_eq!(u.adjoint(), u);
        assert!(u.terms().all(|(m, _)| m.det() == &num_bigint::BigInt::from(n)));
    }
}

#[test]
fn star_sums_vanish_and_nest() {
    for n in 1..=40u64 {
        let get = |l| build_set(n, l).unwrap().elems.into_iter().collect::<BTreeSet<Quad>>();
        let (s, t, u, x, v) = (get(SetLabel::Sn), get(SetLabel::Tn), get(SetLabel::Un), get(SetLabel::Xn), get(SetLabel::Vn));
        assert!(s.is_subset(&t) && t.is_subset(&u) && u.is_subset(&x) && v.is_subset(&x));
        assert!(u.is_disjoint(&v));
        assert_eq!(u.union(&v).copied().collect::<BTreeSet<_>>(), x, "n = {n}");
        for l in [SetLabel::Tn, SetLabel::Un, SetLabel::Vn, SetLabel::Xn, SetLabel::XnP] {
            assert!(star_sum(&build_set(n, l).unwrap()).is_zero(), "{l} at n = {n}");
        }
        // T_n is the disjoint union of the A_γ, γ ∈ S_n.
        let mut union = BTreeSet::new();
        for g in &s {
            let a: BTreeSet<Quad> = hecke_core::geometry::a_gamma(g).into_iter().collect();
            assert!(union.is_disjoint(&a), "n = {n}");
            union.extend(a);
        }
        assert_eq!(union, t, "n = {n}");
    }
}

#[test]
fn partition_of_x_and_the_prime_s_bijection() {
    for n in 1..=25u64 {
        let x = build_set(n, SetLabel::Xn).unwrap().elems;
        let less = build_set(n, SetLabel::XnLess).unwrap().elems;
        let eq = build_set(n, SetLabel::XnEq).unwrap().elems;
        let greater = build_set(n, SetLabel::XnGreater).unwrap().elems;
        assert_eq!(less.len() + eq.len() + greater.len(), x.len());
        let image: BTreeSet<MatN> = less
            .iter()
            .map(|q| &q.to_mat().prime() * &MatN::s())
            .collect();
        let target: BTreeSet<MatN> = greater.iter().map(Quad::to_mat).collect();
        assert_eq!(image, target, "n = {n}");
        // X_n^= is {(a -b; c c) : c(a+b) = n, |a-b| < 2c}.
        let mut expect = BTreeSet::new();
        for c in common::divisors(n) {
            let s = (n / c) as i64;
            let c = c as i64;
            for a in -(4 * n as i64)..=(4 * n as i64) {
                let b = s - a;
                if (a - b).abs() < 2 * c && a + b > 0 {
                    expect.insert(Quad::new(a, b, c, c));
                }
            }
        }
        assert_eq!(eq.into_iter().collect::<BTreeSet<_>>(), expect, "n = {n}");
    }
}

#[test]
fn v_n_parametrization_and_involution() {
    for n in 1..=30u64 {
        let v: BTreeSet<Quad> = build_set(n, SetLabel::Vn).unwrap().elems.into_iter().collect();
        assert_eq!(v_n_parametrized(n).unwrap(), v, "n = {n}");
        let classes = orbit_classes(n).unwrap();
        classes.check().unwrap_or_else(|e| panic!("n = {n}: {e}"));
    }
}

#[test]
fn perturbed_congruence_is_refuted() {
    let mut delta = congruence_difference(6, Congruence::FourUn).unwrap();
    delta.add_term(MatN::of(1, 0, 0, 6), rat(1));
    let v = search_membership(&delta, &ModuleSpec::j_plus_j_adj(), &SearchConfig::default()).unwrap();
    assert!(!v.is_member());
    let zero = RingElt::zero(6);
    assert!(search_membership(&zero, &ModuleSpec::j_plus_j_adj(), &SearchConfig::default())
        .unwrap()
        .is_member());
}
