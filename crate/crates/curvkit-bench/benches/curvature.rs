//! Resistance vs Ollivier-Ricci curvature timings on small fixtures.
//!
//! Run with `cargo bench -p curvkit-bench`. The Table-V-style end-to-end
//! comparison lives in the `curvkit bench` subcommand; these benches track
//! the hot kernels during development.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use curvkit_bench::{complete_graph, nw_graph};
use curvkit_core::ollivier::{or_curvature, Metric};
use curvkit_core::resistance::{resistance_curvature, SolveMode};

fn bench_curvature_methods(c: &mut Criterion) {
    let mut group = c.benchmark_group("curvature");
    group.sample_size(10);
    for n in [120usize, 250] {
        let g = nw_graph(n, 10, 7);
        group.bench_with_input(BenchmarkId::new("resistance_nw", n), &g, |b, g| {
            b.iter(|| resistance_curvature(g, None, SolveMode::Auto).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("ollivier_nw", n), &g, |b, g| {
            b.iter(|| or_curvature(g, 0.5, Metric::Unit).unwrap())
        });
    }
    group.finish();
}

fn bench_transport(c: &mut Criterion) {
    let mut group = c.benchmark_group("transport");
    group.sample_size(10);
    for n in [12usize, 24] {
        let g = complete_graph(n);
        group.bench_with_input(BenchmarkId::new("w1_complete", n), &g, |b, g| {
            b.iter(|| or_curvature(g, 0.5, Metric::Unit).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_curvature_methods, bench_transport);
criterion_main!(benches);
