use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use crownful::generators::{crown, random_digraph};
use crownful::minors::general_minor_check;
use crownful::par;
use crownful::solvers::{DominationInstance, Solver};

fn solver_batch() -> usize {
    par::map_range(48, |i| {
        let g = random_digraph(14, 0.2, i as u64);
        let inst = DominationInstance::new(g, 3);
        usize::from(Solver::Ds.run(&inst, 3).expect("valid instance").feasible)
    })
    .into_iter()
    .sum()
}

fn minor_batch() -> usize {
    let pattern = crown(3).expect("order 3").graph;
    par::map_range(24, |i| {
        let host = random_digraph(10, 0.3, 1000 + i as u64);
        usize::from(general_minor_check(&pattern, &host).is_some())
    })
    .into_iter()
    .sum()
}

fn compare(c: &mut Criterion) {
    let mut group = c.benchmark_group("batch");
    group.sample_size(10);
    for (name, work) in [("solve-ds", solver_batch as fn() -> usize), ("crown-minor", minor_batch)] {
        group.bench_with_input(BenchmarkId::new("parallel", name), &work, |b, w| b.iter(|| black_box(w())));
        group.bench_with_input(BenchmarkId::new("sequential", name), &work, |b, w| {
            b.iter(|| black_box(par::sequential(w)))
        });
    }
    group.finish();
}

criterion_group!(benches, compare);
criterion_main!(benches);
