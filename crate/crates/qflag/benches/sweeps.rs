use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qflag::collections;
use qflag::dmod;
use qflag::par::{self, Mode};
use qflag::seeds;
use qflag::subsets::nonempty_subsets;

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

fn hom_sweep(c: &mut Criterion) {
    let n = 5;
    let reps: Vec<_> = nonempty_subsets(n).iter().map(|s| dmod::build_rank_one(n, s).unwrap()).collect();
    let pairs: Vec<(usize, usize)> = (0..reps.len()).flat_map(|a| (0..reps.len()).map(move |b| (a, b))).collect();
    let mut g = c.benchmark_group("hom_sweep_n5");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::map(mode, &pairs, |&(i, j)| dmod::dim_hom(&reps[i], &reps[j]).unwrap()))
        });
    }
    g.finish();
}

fn seed_build(c: &mut Criterion) {
    let coll = collections::extended_rectangle(6, &[1, 2, 3, 4, 5], 3).unwrap();
    let mut g = c.benchmark_group("seed_n6");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| seeds::seed_from_collection(black_box(&coll), mode).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, hom_sweep, seed_build);
criterion_main!(benches);
