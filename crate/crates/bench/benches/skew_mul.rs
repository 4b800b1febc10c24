use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use skewreduce::MulStrategy;
use skewreduce_bench::{bench_field, poly_pair};

fn multiplication(c: &mut Criterion) {
    let ctx = bench_field();
    let mut group = c.benchmark_group("skew_mul");
    for len in [64, 256, 1024] {
        let (a, b) = poly_pair(&ctx, len, len as u64);
        for strategy in [MulStrategy::Naive, MulStrategy::Karatsuba] {
            group.bench_with_input(
                BenchmarkId::new(strategy.to_string(), len),
                &(&a, &b),
                |bench, (a, b)| bench.iter(|| a.mul(&ctx, b, strategy)),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, multiplication);
criterion_main!(benches);
