use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cyclerank::equiv::{all_digraphs, random_configs, random_digraphs, run_batch};
use cyclerank::game::all_search_numbers_with;
use cyclerank::{cycle_rank_with, Digraph, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn single_graph(c: &mut Criterion) {
    let dense = random_digraphs(&random_configs(10, 0.4, 1, 7)).remove(0);
    let clique = Digraph::bidirected_complete(6);
    let mut group = c.benchmark_group("cycle_rank");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "random n=10"), &dense, |b, g| b.iter(|| cycle_rank_with(g, exec)));
    }
    group.finish();

    let mut group = c.benchmark_group("all_search_numbers");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "K6"), &clique, |b, g| b.iter(|| all_search_numbers_with(g, exec)));
    }
    group.finish();
}

fn batches(c: &mut Criterion) {
    let graphs: Vec<Digraph> = all_digraphs(3).collect();
    let mut group = c.benchmark_group("run_batch");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "all n=3"), &graphs, |b, gs| b.iter(|| run_batch(gs, exec)));
    }
    group.finish();
}

criterion_group!(benches, single_graph, batches);
criterion_main!(benches);
