use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use subpoint_bench::load_problem;
use subpoint_core::grid::{load_solution, solve_plain, SolverConfig};

fn nodal_solver(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("solve-plain");
    g.sample_size(10);
    for p in [1.5, 2.0, 3.0] {
        for n in [31, 129] {
            let prob = load_problem(n, p);
            let v = prob.sup.clone();
            g.bench_with_input(BenchmarkId::new(format!("p={p}"), n), &prob, |b, prob| {
                b.iter(|| solve_plain(black_box(prob), &v, None, &cfg).expect("converges"))
            });
        }
    }
    g.finish();
}

fn direct_load(c: &mut Criterion) {
    let mut g = c.benchmark_group("load-solution");
    for n in [129, 1025] {
        g.bench_with_input(BenchmarkId::new("p=1.5", n), &n, |b, &n| {
            b.iter(|| load_solution(black_box(n), 1.5, 1.0, 8.0))
        });
    }
    g.finish();
}

criterion_group!(benches, nodal_solver, direct_load);
criterion_main!(benches);
