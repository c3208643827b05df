use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use subpoint_core::extremal::{brute_force_extremal, greatest_solution, smallest_solution, ExtremalConfig};
use subpoint_core::grid::presets::{preset, NAMES};

fn drivers(c: &mut Criterion) {
    let cfg = ExtremalConfig::default();
    let mut g = c.benchmark_group("drivers");
    g.sample_size(10);
    for name in NAMES {
        let prob = preset(name).expect("known").build().expect("builds");
        g.bench_function(format!("{name}/greatest"), |b| b.iter(|| greatest_solution(black_box(&prob), &cfg)));
        g.bench_function(format!("{name}/smallest"), |b| b.iter(|| smallest_solution(black_box(&prob), &cfg)));
    }
    g.finish();
}

fn quantized_oracle(c: &mut Criterion) {
    let config = preset("quantized").expect("known");
    let prob = config.build().expect("builds");
    let levels = config.levels.expect("quantized preset has levels");
    c.bench_function("brute-force-extremal", |b| b.iter(|| brute_force_extremal(black_box(&prob), &levels, 1e-9)));
}

criterion_group!(benches, drivers, quantized_oracle);
criterion_main!(benches);
