//! Scaling measurements on key-equation shaped matrices.
//!
//! CSV columns, in order:
//! `schema,algorithm,r,n,t,ell,seed,rep,wall_time_ms,base_case_count,st_count`.

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use skewreduce::gabidulin::{build_b, derive_seed, roundtrip_trial};
use skewreduce::io::to_json;
use skewreduce::matrix::naive_row_reduce_with_stats;
use skewreduce::reduce::{orthogonality_defect, reduce_dc_with_stats, reduce_iterated_with_stats};
use skewreduce::sample::random_key_equation;
use skewreduce::{DefectHint, FieldContext, MulStrategy, ReduceOptions, ReductionStats};

use crate::{BenchArgs, CliError, CliResult, Suite};

pub const BENCH_SCHEMA: &str = "skewreduce.bench.v1";

/// `F_{2^16}`: large enough that random instances rarely degenerate.
pub const REDUCE_FIELD: (u32, u32, u32) = (2, 1, 16);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub schema: String,
    pub algorithm: String,
    pub r: usize,
    pub n: usize,
    pub t: usize,
    pub ell: usize,
    pub seed: u64,
    pub rep: usize,
    pub wall_time_ms: f64,
    pub base_case_count: usize,
    pub st_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchAlgo {
    Dc(MulStrategy),
    Iterated,
    Naive,
}

impl BenchAlgo {
    pub fn parse(name: &str) -> CliResult<Self> {
        match name {
            "dc" => Ok(BenchAlgo::Dc(MulStrategy::Naive)),
            "dc-karatsuba" => Ok(BenchAlgo::Dc(MulStrategy::Karatsuba)),
            "iterated" => Ok(BenchAlgo::Iterated),
            "naive" => Ok(BenchAlgo::Naive),
            other => Err(CliError::Usage(format!("unknown algorithm '{other}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BenchAlgo::Dc(MulStrategy::Naive) => "dc",
            BenchAlgo::Dc(MulStrategy::Karatsuba) => "dc-karatsuba",
            BenchAlgo::Iterated => "iterated",
            BenchAlgo::Naive => "naive",
        }
    }
}

fn check_sizes(sizes: &[usize]) -> CliResult<()> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] < 2 {
        return Err(CliError::Usage(
            "--sizes must be ascending and at least 2".into(),
        ));
    }
    Ok(())
}

/// Times each reducer on the same random `(ℓ+1) × (ℓ+1)` key-equation
/// matrix with `k = n/2`, reducing by its orthogonality defect. Every reducer
/// produces both `U` and `U·B`.
pub fn reduce_suite(
    sizes: &[usize],
    reps: usize,
    ell: usize,
    seed: u64,
    algos: &[BenchAlgo],
) -> CliResult<Vec<BenchRecord>> {
    check_sizes(sizes)?;
    let (p, u, m) = REDUCE_FIELD;
    let ctx = FieldContext::new(p, u, m, None)?;
    let mut records = Vec::new();
    for (size_index, &n) in sizes.iter().enumerate() {
        for rep in 0..reps {
            let instance_seed = derive_seed(seed, (size_index * reps + rep) as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed);
            let b = build_b(&random_key_equation(&ctx, n, n / 2, ell, &mut rng));
            let t = orthogonality_defect(&ctx, &b, DefectHint::Triangular)?;
            for &algo in algos {
                let mut stats = ReductionStats::default();
                let start = Instant::now();
                match algo {
                    BenchAlgo::Dc(strategy) => {
                        let opts = ReduceOptions::with_strategy(strategy);
                        let u = reduce_dc_with_stats(&ctx, &b, t, &opts, &mut stats)?;
                        std::hint::black_box(u.matrix.mul(&ctx, &b, strategy)?);
                    }
                    BenchAlgo::Iterated => {
                        let u = reduce_iterated_with_stats(&ctx, &b, t, &mut stats)?;
                        std::hint::black_box(u.matrix.mul(&ctx, &b, MulStrategy::Naive)?);
                    }
                    BenchAlgo::Naive => {
                        std::hint::black_box(naive_row_reduce_with_stats(&ctx, &b, &mut stats)?);
                    }
                }
                records.push(BenchRecord {
                    schema: BENCH_SCHEMA.into(),
                    algorithm: algo.name().into(),
                    r: ell + 1,
                    n,
                    t,
                    ell,
                    seed: instance_seed,
                    rep,
                    wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
                    base_case_count: stats.base_case_count,
                    st_count: stats.st_count,
                });
            }
        }
    }
    Ok(records)
}

/// Full decoder round trips over `F_{2^n}` with `m = n`, `k = n/2` and the
/// largest error rank `⌊ℓ(n − k)/(ℓ + 1)⌋`. Only successful trials are
/// recorded; `t` is the orthogonality defect of the decoding matrix.
pub fn decode_suite(
    sizes: &[usize],
    reps: usize,
    ell: usize,
    seed: u64,
) -> CliResult<Vec<BenchRecord>> {
    check_sizes(sizes)?;
    let mut records = Vec::new();
    for (size_index, &n) in sizes.iter().enumerate() {
        if n > 32 {
            return Err(CliError::Usage(format!(
                "decode suite needs n ≤ 32, got {n}"
            )));
        }
        let ctx = FieldContext::new(2, 1, n as u32, None)?;
        let k = n / 2;
        let tau = ell * (n - k) / (ell + 1);
        for rep in 0..reps {
            let trial_seed = derive_seed(seed, (size_index * reps + rep) as u64);
            let start = Instant::now();
            let r = roundtrip_trial(
                &ctx,
                n,
                &vec![k; ell],
                tau,
                rep as u64,
                trial_seed,
                &ReduceOptions::default(),
            )?;
            records.push(BenchRecord {
                schema: BENCH_SCHEMA.into(),
                algorithm: format!("decode-{:?}", r.status).to_lowercase(),
                r: ell + 1,
                n,
                t: r.defect,
                ell,
                seed: trial_seed,
                rep,
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
                base_case_count: 0,
                st_count: 0,
            });
        }
    }
    Ok(records)
}

pub fn write_csv(path: &Path, records: &[BenchRecord]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Median wall time per `(algorithm, n)`, in input order.
pub fn medians(records: &[BenchRecord]) -> Vec<(String, usize, f64)> {
    let mut keys: Vec<(String, usize)> = Vec::new();
    for r in records {
        let key = (r.algorithm.clone(), r.n);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(algo, n)| {
            let mut times: Vec<f64> = records
                .iter()
                .filter(|r| r.algorithm == algo && r.n == n)
                .map(|r| r.wall_time_ms)
                .collect();
            times.sort_by(f64::total_cmp);
            let median = times[times.len() / 2];
            (algo, n, median)
        })
        .collect()
}

#[derive(Serialize)]
struct BenchReport<'a> {
    schema: &'static str,
    suite: &'static str,
    records: &'a [BenchRecord],
}

pub fn command(args: &BenchArgs) -> CliResult<()> {
    if args.reps == 0 || args.ell == 0 {
        return Err(CliError::Usage("--reps and --ell must be positive".into()));
    }
    let records = match args.suite {
        Suite::Reduce => {
            let algos = args
                .algos
                .iter()
                .map(|a| BenchAlgo::parse(a))
                .collect::<CliResult<Vec<_>>>()?;
            reduce_suite(&args.sizes, args.reps, args.ell, args.seed, &algos)?
        }
        Suite::Decode => decode_suite(&args.sizes, args.reps, args.ell, args.seed)?,
    };
    if let Some(path) = &args.csv {
        write_csv(path, &records)?;
    }
    let suite = match args.suite {
        Suite::Reduce => "reduce",
        Suite::Decode => "decode",
    };
    print!(
        "{}",
        to_json(&BenchReport {
            schema: BENCH_SCHEMA,
            suite,
            records: &records,
        })
    );
    for (algo, n, ms) in medians(&records) {
        eprintln!("{algo:>14} n={n:<5} median {ms:.3} ms");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_are_reproducible_apart_from_time() {
        let algos = [BenchAlgo::Dc(MulStrategy::Naive), BenchAlgo::Naive];
        let strip = |mut v: Vec<BenchRecord>| {
            v.iter_mut().for_each(|r| r.wall_time_ms = 0.0);
            v
        };
        let a = strip(reduce_suite(&[8, 16], 2, 2, 5, &algos).unwrap());
        let b = strip(reduce_suite(&[8, 16], 2, 2, 5, &algos).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        assert!(a
            .iter()
            .all(|r| r.base_case_count <= r.t || r.algorithm == "naive"));
    }

    #[test]
    fn rejects_unsorted_sizes() {
        assert!(reduce_suite(&[16, 8], 1, 2, 0, &[BenchAlgo::Naive]).is_err());
        assert!(BenchAlgo::parse("fast").is_err());
    }
}
