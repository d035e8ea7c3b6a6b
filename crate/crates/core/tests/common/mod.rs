//! Random generators and slow reference computations shared by the integration tests.
#![allow(dead_code)]

use hecke_core::ring::rat;
use hecke_core::{MatN, RingElt};
use num_bigint::BigInt;
use rand::Rng;

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn word(rng: &mut impl Rng, len: usize) -> MatN {
    let gens = [MatN::s(), MatN::t(), MatN::t_inv()];
    (0..len).fold(MatN::identity(), |acc, _| &acc * &gens[rng.gen_range(0..3)])
}

/// A determinant-`n` matrix `g (a b; 0 d) h` with random words `g`, `h` in `S, T^{±1}`.
pub fn random_mat(rng: &mut impl Rng, n: u64) -> MatN {
    let divs = divisors(n);
    let a = divs[rng.gen_range(0..divs.len())];
    let d = n / a;
    let b = rng.gen_range(0..d) as i64;
    let core = MatN::of(a as i64, b, 0, d as i64);
    let (lg, lh) = (rng.gen_range(0..7), rng.gen_range(0..7));
    let g = word(rng, lg);
    let h = word(rng, lh);
    &(&g * &core) * &h
}

pub fn random_elt(rng: &mut impl Rng, n: u64, terms: usize) -> RingElt {
    let mut x = RingElt::zero(n);
    for _ in 0..terms {
        x.add_term(random_mat(rng, n), rat(rng.gen_range(-3..=3)));
    }
    x
}

pub fn sigma1(n: u64) -> i64 {
    divisors(n).iter().sum::<u64>() as i64
}

pub fn tau(n: u64) -> i64 {
    divisors(n).len() as i64
}

pub fn tau_ev(n: u64) -> i64 {
    divisors(n).iter().filter(|d| *d % 2 == 0).count() as i64
}

pub fn sigma_min(n: u64) -> i64 {
    divisors(n).iter().map(|&a| a.min(n / a) as i64).sum()
}

pub fn sigma_min_ev(n: u64) -> i64 {
    divisors(n)
        .iter()
        .filter(|&&a| (n / a + a).is_multiple_of(2))
        .map(|&a| a.min(n / a) as i64)
        .sum()
}

pub fn is_square(n: u64) -> bool {
    (1..=n).take_while(|r| r * r <= n).any(|r| r * r == n)
}

/// `N(X_n)` as `[2σ - τ_ev] + [σ + τ_ev - 2σ_min + δ(√n)]`.
pub fn x_count_formula(n: u64) -> i64 {
    (2 * sigma1(n) - tau_ev(n)) + (sigma1(n) + tau_ev(n) - 2 * sigma_min(n) + is_square(n) as i64)
}

/// `N(X'_n)`: odd `n` gives `σ - 2σ_min + δ(√n)`; even `n` gives
/// `[σ(n/2) - τ(n/4)] + [2σ(n/4) + τ(n/4) - 2σ_min^ev + δ(√n/2)]`.
pub fn x_primed_count_formula(n: u64) -> i64 {
    if n % 2 == 1 {
        return sigma1(n) - 2 * sigma_min(n) + is_square(n) as i64;
    }
    let quarter = |f: fn(u64) -> i64| if n.is_multiple_of(4) { f(n / 4) } else { 0 };
    let half_root = n.is_multiple_of(4) && is_square(n / 4);
    (sigma1(n / 2) - quarter(tau)) + (2 * quarter(sigma1) + quarter(tau) - 2 * sigma_min_ev(n) + half_root as i64)
}

/// Twice the weighted count of `x ≥ |y|`, `z ≥ |t|`, `x > |t|`, `z > |y|` with
/// `x^2 + z^2 - y^2 - t^2 = n`, by a plain four-fold loop.
pub fn slow_lhs2_doubled(n: i64) -> i64 {
    let r = n + 1;
    let mut total = 0;
    for x in 0..=r {
        for z in 0..=r {
            for y in -x..=x {
                if z <= y.abs() {
                    continue;
                }
                for t in -z..=z {
                    if x <= t.abs() || x * x + z * z - y * y - t * t != n {
                        continue;
                    }
                    total += if x == y.abs() || z == t.abs() { 1 } else { 2 };
                }
            }
        }
    }
    total
}

/// Solutions of `x^2 + z^2 - y^2 - t^2 = p` with `x, z > |y|, |t|`, by a plain loop.
pub fn slow_prime_count(p: i64) -> i64 {
    let r = (p + 1) / 2;
    let mut count = 0;
    for x in 1..=r {
        for z in 1..=r {
            for y in -(x.min(z) - 1)..x.min(z) {
                for t in -(x.min(z) - 1)..x.min(z) {
                    if x * x + z * z - y * y - t * t == p {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

pub fn big(k: i64) -> BigInt {
    BigInt::from(k)
}
