use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use probid::complexity::ComplexityEstimator;
use probid::enumeration::InterleavedList;
use probid::iid_identify::identify_step;
use probid::markov_identify::{empirical, identify_chain, stationary};
use probid::measure_identify::identify_measure_step;
use probid::sampling::{draw_iid, run_chain};
use probid::tau;
use probid_bench::{dense_rows, measure_models, ten_pmfs, two_state_chains};

fn exact(c: &mut Criterion) {
    c.bench_function("tau/1e5", |b| b.iter(|| tau(black_box(100_000))));
    let mut g = c.benchmark_group("stationary");
    for k in [2, 5, 10] {
        let rows = dense_rows(k);
        g.bench_with_input(BenchmarkId::from_parameter(k), &rows, |b, rows| b.iter(|| stationary(rows).unwrap()));
    }
    g.finish();
}

fn identification(c: &mut Criterion) {
    let list = ten_pmfs();
    let target = list.get(6).unwrap();
    let mut g = c.benchmark_group("identify_step");
    for n in [1_000u64, 10_000, 100_000] {
        let s = draw_iid(&target, 1, n);
        g.bench_with_input(BenchmarkId::new("iid", n), &s, |b, s| b.iter(|| identify_step(&list, s).unwrap()));
    }
    let chains = two_state_chains();
    let qa = chains.get(2).unwrap();
    for n in [10_000u64, 100_000] {
        let counts = empirical(&run_chain(&qa, 1, 1, n).unwrap());
        g.bench_with_input(BenchmarkId::new("markov", n), &counts, |b, c| {
            b.iter(|| identify_chain(&chains, c).unwrap())
        });
    }
    g.finish();
}

fn measures(c: &mut Criterion) {
    let models = measure_models();
    let est = ComplexityEstimator::standard(&[1, 2], Some(models.clone()));
    let list = InterleavedList::new(models);
    let x: Vec<u64> = [1, 2].repeat(500);
    c.bench_function("khat/alternating-1000", |b| b.iter(|| est.khat(black_box(&x), 6).unwrap()));
    let mut g = c.benchmark_group("identify_measure_step");
    g.sample_size(10);
    for n in [100u64, 1000] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| identify_measure_step(&list, &x, n, &est).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, exact, identification, measures);
criterion_main!(benches);
