use std::hint::black_box;

use butson_scarpis::butson::Strategy;
use butson_scarpis::{corollary5, fourier, ButsonMatrix};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn inputs() -> Vec<(String, ButsonMatrix)> {
    let mut v: Vec<(String, ButsonMatrix)> = [64usize, 128, 256]
        .into_iter()
        .map(|n| (format!("fourier-{n}"), fourier(n)))
        .collect();
    for r in [2u32, 3] {
        let b = corollary5(r).expect("corollary5 output");
        v.push((format!("corollary5-r{r}-n{}", b.order()), b));
    }
    v
}

fn verify_strategies(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for (name, b) in inputs() {
        for (label, strategy) in [
            ("sequential", Strategy::Sequential),
            ("parallel", Strategy::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(label, &name), &b, |bench, b| {
                bench.iter(|| black_box(b.verify_with(strategy)))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, verify_strategies);
criterion_main!(benches);
