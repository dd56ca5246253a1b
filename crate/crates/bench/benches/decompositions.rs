use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use quatjordan::{additive_jcd, char_poly, hexp, jordan_form, multiplicative_jcd, Tolerances};
use quatjordan_bench::{fixture, SIZES};

fn bench(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("decompositions");
    for n in SIZES {
        let a = fixture(n);
        group.bench_with_input(BenchmarkId::new("char_poly", n), &a, |b, a| b.iter(|| char_poly(black_box(a), &tol)));
        group.bench_with_input(BenchmarkId::new("jordan_form", n), &a, |b, a| b.iter(|| jordan_form(black_box(a), &tol)));
        group.bench_with_input(BenchmarkId::new("additive_jcd", n), &a, |b, a| b.iter(|| additive_jcd(black_box(a), &tol)));
        group.bench_with_input(BenchmarkId::new("multiplicative_jcd", n), &a, |b, a| {
            b.iter(|| multiplicative_jcd(black_box(a), &tol))
        });
        group.bench_with_input(BenchmarkId::new("exp", n), &a, |b, a| b.iter(|| hexp(black_box(a))));
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
