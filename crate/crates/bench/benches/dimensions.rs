use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use learncomp::classes::{goedel_class, halting_class, materialize, step_class, FiniteClass, Window};
use learncomp::dimensions::{littlestone_dim, teaching_dim, vc_dim};
use learncomp::formal_system::inconsistent_toy;
use learncomp::games::{play_online_game, MajorityFlipAdversary, SoaLearner};
use learncomp::turing::fixtures::{busy_beaver_3, chain_halter, loop_machine};
use learncomp::turing::run_bounded;

fn halting_windows() -> Vec<(String, FiniteClass)> {
    (1..=4)
        .map(|k| {
            let fc = materialize(&halting_class(chain_halter(k)), Window::saturating(k + 2)).unwrap();
            (format!("halt{k}"), fc)
        })
        .chain([
            ("hypercube6".to_string(), FiniteClass::hypercube(6)),
            ("step7".to_string(), materialize(&step_class(), Window::saturating(7)).unwrap()),
        ])
        .collect()
}

fn bench_measures(c: &mut Criterion) {
    let classes = halting_windows();
    let mut group = c.benchmark_group("measures");
    for (name, fc) in &classes {
        group.bench_with_input(BenchmarkId::new("vc", name), fc, |b, fc| b.iter(|| vc_dim(black_box(fc)).unwrap()));
        group.bench_with_input(BenchmarkId::new("ldim", name), fc, |b, fc| {
            b.iter(|| littlestone_dim(black_box(fc)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("teaching", name), fc, |b, fc| {
            b.iter(|| teaching_dim(black_box(fc)).unwrap())
        });
    }
    group.finish();
}

fn bench_materialize(c: &mut Criterion) {
    let mut group = c.benchmark_group("materialize");
    group.sample_size(20);
    let looper = halting_class(loop_machine());
    let goedel = goedel_class(inconsistent_toy());
    for n in [5u64, 7] {
        group.bench_with_input(BenchmarkId::new("loop", n), &n, |b, &n| {
            b.iter(|| materialize(&looper, Window::saturating(n)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("goedel", n), &n, |b, &n| {
            b.iter(|| materialize(&goedel, Window::saturating(n)).unwrap())
        });
    }
    group.finish();
}

fn bench_simulation_and_games(c: &mut Criterion) {
    let bb3 = busy_beaver_3();
    c.bench_function("simulate_bb3", |b| b.iter(|| run_bounded(black_box(&bb3), 1000)));
    let fc = FiniteClass::hypercube(5);
    c.bench_function("soa_vs_majority_flip_k5", |b| {
        b.iter(|| {
            let mut adv = MajorityFlipAdversary::new(&fc);
            play_online_game(&fc, &mut SoaLearner::new(&fc), &mut adv, 10).unwrap()
        })
    });
}

criterion_group!(benches, bench_measures, bench_materialize, bench_simulation_and_games);
criterion_main!(benches);
