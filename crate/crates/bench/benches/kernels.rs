use charp_bench::sampler;
use charp_core::cartier::{cartier, log_witness, Chart};
use charp_core::connections::{maurer_cartan, pcurvature_brute, GroupTag, MatrixOneForm};
use charp_core::forms::dlog;
use charp_core::poly::gcd;
use charp_core::torsor::classify_mu_p;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn polynomial(c: &mut Criterion) {
    let mut group = c.benchmark_group("gcd");
    for p in [3u32, 7, 13] {
        let mut s = sampler(p, 2);
        let common = s.nonzero_poly(3, 4);
        let a = &s.nonzero_poly(4, 5) * &common;
        let b = &s.nonzero_poly(4, 5) * &common;
        group.bench_with_input(BenchmarkId::from_parameter(p), &(a, b), |bench, (a, b)| {
            bench.iter(|| gcd(black_box(a), black_box(b)))
        });
    }
    group.finish();
}

fn cartier_operator(c: &mut Criterion) {
    let mut group = c.benchmark_group("cartier");
    for (p, n) in [(3u32, 1usize), (5, 2), (7, 2), (5, 3)] {
        let w = sampler(p, n).closed_form(3);
        group.bench_with_input(BenchmarkId::new(format!("p{p}"), n), &w, |bench, w| {
            bench.iter(|| cartier(black_box(w)).unwrap())
        });
    }
    group.finish();
}

fn witnesses(c: &mut Criterion) {
    let mut group = c.benchmark_group("log_witness");
    for p in [3u32, 5, 7] {
        let mut s = sampler(p, 2);
        let chart = Chart::new(s.ring(), s.pool().to_vec()).unwrap();
        let w = dlog(&s.pool_unit()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(p), &(w, chart), |bench, (w, chart)| {
            bench.iter(|| log_witness(black_box(w), chart).unwrap())
        });
    }
    group.finish();

    let mut s = sampler(5, 2);
    let chart = Chart::new(s.ring(), s.pool().to_vec()).unwrap();
    let w = dlog(&s.pool_unit()).unwrap();
    c.bench_function("classify_mu_p/5", |bench| {
        bench.iter(|| classify_mu_p(black_box(&w), std::slice::from_ref(&chart)).unwrap())
    });
}

fn pcurvature(c: &mut Criterion) {
    let mut group = c.benchmark_group("pcurvature_brute");
    for p in [3u32, 5, 7] {
        let w = sampler(p, 1).one_form(3);
        let omega = MatrixOneForm::scalar(w);
        group.bench_with_input(BenchmarkId::new("rank1", p), &omega, |bench, o| {
            bench.iter(|| pcurvature_brute(black_box(o)))
        });
        let mut s = sampler(p, 2);
        let g = s.invertible_matrix(2, 2);
        let omega = maurer_cartan(&g, GroupTag::Gl(2)).unwrap();
        group.bench_with_input(BenchmarkId::new("gl2", p), &omega, |bench, o| {
            bench.iter(|| pcurvature_brute(black_box(o)))
        });
    }
    group.finish();
}

criterion_group!(benches, polynomial, cartier_operator, witnesses, pcurvature);
criterion_main!(benches);
