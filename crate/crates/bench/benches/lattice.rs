use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use subpoint_bench::boolean_multifunction;
use subpoint_core::fixpoint::{fixed_points, subpoints, FixpointReport};
use subpoint_core::verify::{verify_fixpoint, verify_order, verify_qvip, Effort};

fn fixed_point_sets(c: &mut Criterion) {
    let mut g = c.benchmark_group("fixed-points");
    for k in [3, 4, 5] {
        let (_, s) = boolean_multifunction(k, 11);
        g.bench_with_input(BenchmarkId::new("subpoints", 1 << k), &s, |b, s| b.iter(|| subpoints(black_box(s))));
        g.bench_with_input(BenchmarkId::new("fixed", 1 << k), &s, |b, s| b.iter(|| fixed_points(black_box(s))));
        g.bench_with_input(BenchmarkId::new("report", 1 << k), &s, |b, s| {
            b.iter(|| FixpointReport::build(black_box(s)))
        });
    }
    g.finish();
}

fn quick_suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suites-quick");
    g.sample_size(10);
    g.bench_function("order", |b| b.iter(|| verify_order(black_box(7), Effort::Quick)));
    g.bench_function("fixpoint", |b| b.iter(|| verify_fixpoint(black_box(7), Effort::Quick)));
    g.bench_function("qvip", |b| b.iter(|| verify_qvip(black_box(7), Effort::Quick)));
    g.finish();
}

criterion_group!(benches, fixed_point_sets, quick_suites);
criterion_main!(benches);
