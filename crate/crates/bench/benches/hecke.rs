use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use hecke_core::geometry::{build_set, star_sum, verify_congruence, Congruence, SetLabel};
use hecke_core::hecke::{check_h1, merel_adjoint_candidate, solve_tilde_deepening, tn_inf};
use hecke_core::membership::SearchConfig;
use hecke_core::ring::consts;
use hecke_core::theta::{lhs_identity1, lhs_identity2, rhs_identity2};

fn ring_arithmetic(c: &mut Criterion) {
    let x = merel_adjoint_candidate(30).unwrap();
    let d = consts::t_minus_t_inv();
    c.bench_function("tilde_30 * (T - T^-1)", |b| b.iter(|| black_box(&x) * &d));
    c.bench_function("star(tilde_30)", |b| b.iter(|| black_box(&x).star()));
}

fn star_sums(c: &mut Criterion) {
    let mut group = c.benchmark_group("star_sum X_n");
    for n in [10u64, 20, 40] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| star_sum(&build_set(n, SetLabel::Xn).unwrap()))
        });
    }
    group.finish();
}

fn theta(c: &mut Criterion) {
    c.bench_function("lhs identity 1, nmax 100", |b| b.iter(|| lhs_identity1(black_box(100))));
    c.bench_function("lhs identity 2, nmax 100", |b| b.iter(|| lhs_identity2(black_box(100))));
    c.bench_function("rhs identity 2, nmax 1000", |b| b.iter(|| rhs_identity2(black_box(1000))));
}

fn searches(c: &mut Criterion) {
    let mut group = c.benchmark_group("searches");
    group.sample_size(10);
    let cfg = SearchConfig::with_depth(4);
    group.bench_function("h1 n=12", |b| b.iter(|| check_h1(12, &cfg).unwrap()));
    group.bench_function("xn congruence n=12", |b| {
        b.iter(|| verify_congruence(12, Congruence::XnSum, &cfg).unwrap())
    });
    group.bench_function("solve tilde n=30", |b| {
        b.iter(|| solve_tilde_deepening(30, &SearchConfig::with_depth(8)).unwrap())
    });
    group.bench_function("T_n^inf n=1000", |b| b.iter(|| tn_inf(black_box(1000)).unwrap()));
    group.finish();
}

criterion_group!(benches, ring_arithmetic, star_sums, theta, searches);
criterion_main!(benches);
