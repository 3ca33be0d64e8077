use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hermeval_bench::{tractable, wheel_like};
use hermeval_core::generators::{eulerian, flow, indepset};
use hermeval_core::oracle::eval_bruteforce;
use hermeval_core::quadsum::{eval_q, QuadraticForm};
use hermeval_core::{classify, eval_fast, Dichotomy, Pinning};

fn bench_classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    let cases = [
        ("eulerian", eulerian()),
        ("indepset", indepset()),
        (
            "flow-z2xz2-nonzero",
            flow(&[2, 2], &[vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap(),
        ),
        ("tractable-m4-w4", tractable(4, 4, 7)),
        ("tractable-m6-w4", tractable(6, 4, 7)),
    ];
    for (name, inst) in &cases {
        group.bench_function(*name, |b| b.iter(|| classify(black_box(inst)).unwrap()));
    }
    group.finish();
}

fn bench_eval(c: &mut Criterion) {
    let inst = tractable(4, 4, 11);
    let Dichotomy::PolyTime(plan) = classify(&inst).unwrap() else {
        panic!("fixture must be tractable")
    };
    let pins = Pinning::new();
    let mut group = c.benchmark_group("eval");
    for n in [4usize, 6, 8] {
        let g = wheel_like(n);
        group.bench_with_input(BenchmarkId::new("fast", n), &g, |b, g| {
            b.iter(|| eval_fast(&plan, &pins, g).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("oracle", n), &g, |b, g| {
            b.iter(|| eval_bruteforce(&inst, &pins, g).unwrap())
        });
    }
    for n in [12usize, 16] {
        let g = wheel_like(n);
        group.bench_with_input(BenchmarkId::new("fast", n), &g, |b, g| {
            b.iter(|| eval_fast(&plan, &pins, g).unwrap())
        });
    }
    group.finish();
}

fn bench_eval_q(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval_q");
    for (q, n) in [(8u64, 4usize), (9, 4), (8, 8), (25, 8)] {
        let mut f = QuadraticForm::new(q, n);
        for i in 0..n {
            f.add_lin(i, (i as i64) + 1);
            for j in i..n {
                f.add_quad(i, j, ((i * 3 + j * 5) % 7) as i64 + 1);
            }
        }
        group.bench_with_input(BenchmarkId::new(format!("q{q}"), n), &f, |b, f| {
            b.iter(|| eval_q(f).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_classify, bench_eval, bench_eval_q);
criterion_main!(benches);
