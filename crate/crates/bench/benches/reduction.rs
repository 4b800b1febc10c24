use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use skewreduce::matrix::naive_row_reduce;
use skewreduce::{reduce_dc, MulStrategy, ReduceOptions};
use skewreduce_bench::{bench_field, key_equation_matrix};

fn reducers(c: &mut Criterion) {
    let ctx = bench_field();
    let mut group = c.benchmark_group("reduce_key_equation");
    group.sample_size(10);
    for n in [64, 128, 256] {
        let (b, t) = key_equation_matrix(&ctx, n, 2, n as u64);
        for strategy in [MulStrategy::Naive, MulStrategy::Karatsuba] {
            let opts = ReduceOptions::with_strategy(strategy);
            group.bench_with_input(
                BenchmarkId::new(format!("dc-{strategy}"), n),
                &b,
                |bench, b| bench.iter(|| reduce_dc(&ctx, b, t, &opts).unwrap()),
            );
        }
        group.bench_with_input(BenchmarkId::new("naive", n), &b, |bench, b| {
            bench.iter(|| naive_row_reduce(&ctx, b).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, reducers);
criterion_main!(benches);
