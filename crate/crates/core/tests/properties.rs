mod common;

use hecke_core::geometry::{a_gamma, build_set, star_sum_quads, SetLabel};
use hecke_core::membership::{
    in_i, in_j, in_j_adj, in_module_1mt_left, search_membership, ModuleSpec, SearchConfig,
};
use hecke_core::ring::{consts, rat};
use hecke_core::{MatN, RingElt};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mat(n: u64, seed: u64) -> MatN {
    common::random_mat(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn elt(n: u64, seed: u64, terms: usize) -> RingElt {
    common::random_elt(&mut ChaCha8Rng::seed_from_u64(seed), n, terms)
}

fn d(m: MatN) -> RingElt {
    RingElt::basis(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn four_term_relation(n in 1u64..=10, seed in any::<u64>()) {
        let m = mat(n, seed);
        let s = MatN::s();
        let mpv = m.prime().adjoint();
        let total = &(&d(m.clone()).star() + &d(mpv.clone()).star())
            + &(&d(&(&s * &m) * &s).star() + &d(&(&s * &mpv) * &s).star());
        prop_assert!(total.is_zero());
    }

    #[test]
    fn star_is_odd_under_prime_and_right_s(n in 1u64..=10, seed in any::<u64>()) {
        let m = mat(n, seed);
        let star = d(m.clone()).star();
        prop_assert_eq!(d(m.prime()).star(), -&star);
        prop_assert_eq!(d(&m * &MatN::s()).star(), -&star);
    }

    #[test]
    fn signed_count_moves(n in 1u64..=10, seed in any::<u64>(), k in -5i64..=5) {
        let m = mat(n, seed);
        let base = d(m.clone()).signed_count();
        prop_assert_eq!(-d(m.prime()).signed_count(), base.clone());
        prop_assert_eq!(-d(&m * &MatN::s()).signed_count(), base.clone());
        prop_assert_eq!(d(&MatN::t_pow(&BigInt::from(k)) * &m).signed_count(), base);
    }

    #[test]
    fn adjoint_reverses_products(n1 in 1u64..=6, n2 in 1u64..=6, s1 in any::<u64>(), s2 in any::<u64>()) {
        let x = elt(n1, s1, 4);
        let y = elt(n2, s2, 4);
        prop_assert_eq!((&x * &y).adjoint(), &y.adjoint() * &x.adjoint());
        prop_assert_eq!((&x * &y).prime(), &x.prime() * &y.prime());
        prop_assert_eq!(x.adjoint().adjoint(), x.clone());
        prop_assert_eq!(x.prime().prime(), x);
    }

    #[test]
    fn ring_axioms(n in 1u64..=4, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let x = elt(n, s1, 3);
        let y = elt(1, s2, 3);
        let z = elt(2, s3, 3);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        let y2 = elt(1, s3, 2);
        prop_assert_eq!(&x * &(&y + &y2), &(&x * &y) + &(&x * &y2));
        prop_assert_eq!((&x * &y).aug(), x.aug() * y.aug());
    }

    #[test]
    fn json_round_trip(n in 1u64..=30, seed in any::<u64>()) {
        let x = elt(n, seed, 6).scale(&hecke_core::ring::rat_frac(3, 7));
        prop_assert_eq!(RingElt::from_json(&x.to_json()).unwrap(), x.clone());
        let text = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<RingElt>(&text).unwrap(), x);
    }

    #[test]
    fn one_sided_decisions_recover_witnesses(n in 1u64..=8, seed in any::<u64>()) {
        let y = elt(n, seed, 5);
        let x = &consts::one_minus_t() * &y;
        let v = in_module_1mt_left(&x).unwrap();
        let w = v.witness().expect("member");
        prop_assert!(w.verify());
        // Witness may differ from y by T-invariant elements, which are zero here.
        prop_assert_eq!(&w.witnesses[0], &y);
    }

    #[test]
    fn j_and_j_adjoint_decisions(n in 1u64..=6, seed in any::<u64>()) {
        let y = elt(n, seed, 4);
        let x = &(&consts::one_minus_t() * &y) * &consts::one_minus_s();
        prop_assert!(in_j(&x).unwrap().witness().unwrap().verify());
        prop_assert!(in_j_adj(&x.adjoint()).unwrap().is_member());
    }

    #[test]
    fn i_contains_generators(n in 1u64..=6, seed in any::<u64>()) {
        let y = elt(n, seed, 4);
        let x = &(&consts::one_plus_s() * &y) + &(&consts::one_plus_u_u2() * &elt(n, seed ^ 1, 3));
        prop_assert!(in_i(&x).unwrap().is_member());
    }

    #[test]
    fn star_sums_of_a_gamma_vanish(n in 1u64..=30, pick in any::<prop::sample::Index>()) {
        let sn = build_set(n, SetLabel::Sn).unwrap();
        prop_assume!(!sn.is_empty());
        let g = sn.elems[pick.index(sn.len())];
        prop_assert!(star_sum_quads(n, &a_gamma(&g)).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn star_invariant_under_left_t_modulo_j_plus_j_adj(n in 1u64..=6, seed in any::<u64>(), k in -3i64..=3) {
        let m = mat(n, seed);
        let moved = &MatN::t_pow(&BigInt::from(k)) * &m;
        let x = &d(moved).star() - &d(m).star();
        let v = search_membership(&x, &ModuleSpec::j_plus_j_adj(), &SearchConfig::with_depth(2)).unwrap();
        prop_assert!(v.witness().is_some_and(|w| w.verify()));
    }
}

#[test]
fn sum_of_single_basis_is_not_in_j_plus_j_adj() {
    let x = d(MatN::of(2, 1, 1, 3));
    let v = search_membership(&x, &ModuleSpec::j_plus_j_adj(), &SearchConfig::default()).unwrap();
    assert!(v.refutation().is_some());
    assert_eq!(x.aug(), rat(1));
}
