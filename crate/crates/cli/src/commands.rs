use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use skewreduce::gabidulin::{
    add_rank_error, build_b, build_instance, decode as decode_word, derive_seed, encode,
    random_messages, roundtrip_trial, TrialResult, TrialStatus,
};
use skewreduce::io::{
    to_json, DecodeReportFile, FieldDescriptor, InstanceFile, MatrixFile, ReportStatus,
    REPORT_SCHEMA,
};
use skewreduce::matrix::naive_row_reduce_with_stats;
use skewreduce::reduce::{
    complete_to_wpf, orthogonality_defect, reduce_dc_with_stats, reduce_iterated_with_stats,
};
use skewreduce::sample::random_matrix;
use skewreduce::{
    CodeParams, DecodeOutcome, DefectHint, FieldContext, ReduceOptions, ReductionStats, SkewMatrix,
};

use crate::{
    Algorithm, CliError, CliResult, DecodeArgs, ReduceArgs, RoundtripArgs, SampleArgs, SampleKind,
    Target,
};

pub const ROUNDTRIP_SCHEMA: &str = "skewreduce.roundtrip.v1";
pub const REDUCTION_SCHEMA: &str = "skewreduce.reduction.v1";

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes to `out`, or stdout when absent.
pub fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripReport {
    pub schema: &'static str,
    pub q: u64,
    pub m: u32,
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub tau: usize,
    pub seed: u64,
    pub trials: u64,
    pub successes: u64,
    pub failures: u64,
    pub miscorrections: u64,
    pub success_rate: f64,
    pub failure_reasons: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<Vec<TrialResult>>,
}

/// A trial outcome with its wall time in milliseconds.
pub type TimedTrial = (TrialResult, f64);

/// Runs the trials of a round-trip experiment in index order.
pub fn run_trials(ctx: &FieldContext, args: &RoundtripArgs) -> CliResult<Vec<TimedTrial>> {
    if args.n > args.field.m as usize {
        return Err(CliError::Usage(format!(
            "n = {} exceeds m = {}",
            args.n, args.field.m
        )));
    }
    if args.k == 0 || args.k >= args.n {
        return Err(CliError::Usage(format!("k = {} not in [1, n)", args.k)));
    }
    if args.tau > args.n - args.k {
        return Err(CliError::Usage(format!(
            "tau = {} exceeds n - k = {}",
            args.tau,
            args.n - args.k
        )));
    }
    if args.ell == 0 {
        return Err(CliError::Usage("ell must be at least 1".into()));
    }
    let opts = ReduceOptions::with_strategy(args.mul.into());
    let k = vec![args.k; args.ell];
    let one = |i: u64| -> CliResult<TimedTrial> {
        let start = Instant::now();
        let r = roundtrip_trial(
            ctx,
            args.n,
            &k,
            args.tau,
            i,
            derive_seed(args.seed, i),
            &opts,
        )?;
        Ok((r, start.elapsed().as_secs_f64() * 1e3))
    };
    if args.parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.parallel)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        pool.install(|| (0..args.trials).into_par_iter().map(one).collect())
    } else {
        (0..args.trials).map(one).collect()
    }
}

pub fn summarize(args: &RoundtripArgs, results: &[TimedTrial]) -> RoundtripReport {
    let count = |s: TrialStatus| results.iter().filter(|(r, _)| r.status == s).count() as u64;
    let mut failure_reasons = BTreeMap::new();
    for (r, _) in results {
        if let Some(reason) = r.reason {
            *failure_reasons.entry(reason.to_string()).or_insert(0) += 1;
        }
    }
    let successes = count(TrialStatus::Success);
    RoundtripReport {
        schema: ROUNDTRIP_SCHEMA,
        q: args.field.q,
        m: args.field.m,
        n: args.n,
        k: args.k,
        ell: args.ell,
        tau: args.tau,
        seed: args.seed,
        trials: args.trials,
        successes,
        failures: count(TrialStatus::Failure),
        miscorrections: count(TrialStatus::Miscorrection),
        success_rate: if args.trials == 0 {
            1.0
        } else {
            successes as f64 / args.trials as f64
        },
        failure_reasons,
        results: args
            .verbose
            .then(|| results.iter().map(|(r, _)| r.clone()).collect()),
    }
}

pub fn roundtrip(args: &RoundtripArgs) -> CliResult<()> {
    let ctx = args.field.context()?;
    let results = run_trials(&ctx, args)?;
    let report = summarize(args, &results);
    print!("{}", to_json(&report));
    if !results.is_empty() {
        let mean = results.iter().map(|(_, t)| t).sum::<f64>() / results.len() as f64;
        eprintln!("mean trial time: {mean:.3} ms");
    }
    if report.success_rate < args.min_rate {
        return Err(CliError::Unmet(format!(
            "success rate {:.4} below --min-rate {}",
            report.success_rate, args.min_rate
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionFile {
    pub schema: &'static str,
    pub field: FieldDescriptor,
    pub algorithm: String,
    pub t: usize,
    pub weak_popov: bool,
    pub degree_before: Option<usize>,
    pub degree_after: Option<usize>,
    pub transform: SkewMatrix,
    pub reduced: SkewMatrix,
    pub stats: ReductionStats,
}

/// Runs one reducer. With `Target::Auto` the d&c and iterated reducers use
/// the orthogonality defect and finish with single-step reductions until
/// weak Popov form; `naive` ignores `t`.
pub fn reduce_matrix(
    ctx: &FieldContext,
    m: &SkewMatrix,
    algo: Algorithm,
    target: Target,
    opts: &ReduceOptions,
) -> CliResult<(usize, SkewMatrix, SkewMatrix, ReductionStats)> {
    let mut stats = ReductionStats::default();
    let t = match target {
        Target::Fixed(t) => t,
        Target::Auto => orthogonality_defect(ctx, m, DefectHint::Auto)?,
    };
    let transform = match algo {
        Algorithm::Naive => {
            let (u, reduced) = naive_row_reduce_with_stats(ctx, m, &mut stats)?;
            return Ok((t, u.matrix, reduced, stats));
        }
        Algorithm::Dc => reduce_dc_with_stats(ctx, m, t, opts, &mut stats)?,
        Algorithm::Iterated => reduce_iterated_with_stats(ctx, m, t, &mut stats)?,
    };
    let (transform, reduced) = if target == Target::Auto {
        complete_to_wpf(ctx, m, transform, opts, &mut stats)?
    } else {
        let reduced = transform.matrix.mul(ctx, m, opts.strategy)?;
        (transform, reduced)
    };
    Ok((t, transform.matrix, reduced, stats))
}

pub fn reduce(args: &ReduceArgs) -> CliResult<()> {
    let (ctx, m) = MatrixFile::from_json(&read_file(&args.input)?)?;
    let opts = ReduceOptions::with_strategy(args.mul.into());
    let (t, transform, reduced, stats) = reduce_matrix(&ctx, &m, args.algo, args.t, &opts)?;
    let file = ReductionFile {
        schema: REDUCTION_SCHEMA,
        field: FieldDescriptor::of(&ctx),
        algorithm: format!("{:?}", args.algo).to_lowercase(),
        t,
        weak_popov: reduced.is_weak_popov(),
        degree_before: m.degree(),
        degree_after: reduced.degree(),
        transform,
        reduced,
        stats,
    };
    emit(args.out.as_ref(), &to_json(&file))?;
    eprintln!(
        "weak Popov form: {}",
        if file.weak_popov { "yes" } else { "no" }
    );
    Ok(())
}

pub fn decode(args: &DecodeArgs) -> CliResult<()> {
    let (ctx, params, file) = InstanceFile::from_json(&read_file(&args.input)?)?;
    let start = Instant::now();
    let report = decode_word(
        &ctx,
        &params,
        &file.received,
        &ReduceOptions::with_strategy(args.mul.into()),
    )?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let (status, messages, reason) = match &report.outcome {
        DecodeOutcome::Decoded { messages, .. } => {
            (ReportStatus::Decoded, Some(messages.clone()), None)
        }
        DecodeOutcome::Failed(r) => (ReportStatus::Failed, None, Some(r.to_string())),
    };
    let out = DecodeReportFile {
        schema: REPORT_SCHEMA.into(),
        status,
        messages,
        reason,
        lambda_degree: report.lambda_degree(),
        defect: report.defect,
        wall_time_ms,
    };
    emit(args.out.as_ref(), &to_json(&out))?;
    match status {
        ReportStatus::Decoded => Ok(()),
        ReportStatus::Failed => Err(CliError::Unmet("decoding failed".into())),
    }
}

/// Received word, code and messages for a random instance.
pub fn sample_instance(
    ctx: &FieldContext,
    n: usize,
    k: usize,
    ell: usize,
    tau: usize,
    seed: u64,
) -> CliResult<InstanceFile> {
    let params = CodeParams::random(ctx, n, k, ell, derive_seed(seed, 0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1));
    let messages = random_messages(ctx, &params, &mut rng);
    let codewords = encode(ctx, &params, &messages)?;
    let (received, _) = add_rank_error(ctx, &codewords, tau, derive_seed(seed, 2))?;
    Ok(InstanceFile::new(ctx, &params, received, Some(messages)))
}

pub fn sample(args: &SampleArgs) -> CliResult<()> {
    match &args.kind {
        SampleKind::Matrix {
            field,
            r,
            degree,
            seed,
            out,
        } => {
            let ctx = field.context()?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let m = random_matrix(&ctx, *r, *degree, &mut rng);
            emit(out.as_ref(), &to_json(&MatrixFile::new(&ctx, m)))
        }
        SampleKind::Instance {
            field,
            n,
            k,
            ell,
            tau,
            seed,
            out,
        } => {
            let ctx = field.context()?;
            let file = sample_instance(&ctx, *n, *k, *ell, *tau, *seed)?;
            emit(out.as_ref(), &to_json(&file))
        }
        SampleKind::KeyMatrix {
            field,
            n,
            k,
            ell,
            tau,
            seed,
            out,
        } => {
            let ctx = field.context()?;
            let file = sample_instance(&ctx, *n, *k, *ell, *tau, *seed)?;
            let params = CodeParams::new(&ctx, file.k.clone(), file.locators.clone())?;
            let b = build_b(&build_instance(&ctx, &params, &file.received)?);
            emit(out.as_ref(), &to_json(&MatrixFile::new(&ctx, b)))
        }
    }
}
