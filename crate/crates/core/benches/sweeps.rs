//! One worker against the full pool on the parallel hot paths. Build with
//! `--no-default-features` to time the sequential code instead.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use definetti::cli::hypergeom_rows;
use definetti::coalgebra::{accumulated_marginal, polya, UrnState};
use definetti::limit::{check_complete_monotone, cone_from_coalgebra, verify_cone, MomentSeq};
use definetti::par::with_threads;
use definetti::rational::ratio;

fn pools() -> [(&'static str, usize); 2] {
    let all = std::thread::available_parallelism().map_or(1, |n| n.get());
    [("1-thread", 1), ("pool", all)]
}

fn cone_levels(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_cone");
    let u = UrnState::new(2, 3).unwrap();
    for horizon in [20usize, 40] {
        let cone = cone_from_coalgebra(&polya(), &u, horizon);
        for (name, threads) in pools() {
            g.bench_with_input(BenchmarkId::new(name, horizon), &cone, |b, cone| {
                b.iter(|| with_threads(threads, || black_box(verify_cone(cone))))
            });
        }
    }
    g.finish();
}

fn monotone_triangle(c: &mut Criterion) {
    let mut g = c.benchmark_group("complete_monotone");
    for horizon in [30i64, 60] {
        let m = MomentSeq::new((0..=horizon).map(|j| ratio(1, j + 1)).collect()).unwrap();
        for (name, threads) in pools() {
            g.bench_with_input(BenchmarkId::new(name, horizon), &m, |b, m| {
                b.iter(|| with_threads(threads, || black_box(check_complete_monotone(m))))
            });
        }
    }
    g.finish();
}

fn polya_bind(c: &mut Criterion) {
    let mut g = c.benchmark_group("polya_marginal");
    let u = UrnState::new(1, 1).unwrap();
    for steps in [20usize, 40] {
        for (name, threads) in pools() {
            g.bench_with_input(BenchmarkId::new(name, steps), &steps, |b, &steps| {
                b.iter(|| with_threads(threads, || black_box(accumulated_marginal(&polya(), &u, steps))))
            });
        }
    }
    g.finish();
}

fn hypergeom_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("hypergeometric_tv");
    let ns: Vec<u64> = (1..=32).map(|i| i * 300).collect();
    for (name, threads) in pools() {
        g.bench_function(name, |b| {
            b.iter(|| with_threads(threads, || black_box(hypergeom_rows(5, &ratio(1, 2), &ns))))
        });
    }
    g.finish();
}

criterion_group! {
    name = sweeps;
    config = Criterion::default().sample_size(10);
    targets = cone_levels, monotone_triangle, polya_bind, hypergeom_sweep
}
criterion_main!(sweeps);
