//! Randomized property checks. The `check` command runs them at small sizes;
//! the acceptance suite runs them at full size.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewreduce::gabidulin::{
    add_rank_error, build_b, build_instance, derive_seed, encode, random_messages, TrialStatus,
};
use skewreduce::matrix::reduce_basecase_with_stats;
use skewreduce::reduce::{complete_to_wpf, orthogonality_defect, reduce_dc_with_stats};
use skewreduce::sample::{random_homogeneous_matrix, random_matrix};
use skewreduce::{
    reduce_dc, reduce_iterated, CodeParams, DefectHint, FieldContext, MulStrategy, ReduceOptions,
    ReductionStats, SkewMatrix, SkewPoly,
};

use crate::bench::{medians, reduce_suite, BenchAlgo};
use crate::commands::run_trials;
use crate::{CheckArgs, CliError, CliResult, FieldArgs, RoundtripArgs, Strategy};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Transforms returned by the d&c reducer with an entry longer than
    /// `max(t, 1)`.
    pub length_violations: usize,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

fn is_long(u: &SkewMatrix, t: usize) -> bool {
    u.max_entry_len() > t.max(1)
}

fn mixed_fields() -> CliResult<Vec<FieldContext>> {
    Ok(vec![
        FieldContext::new(2, 1, 8, None)?,
        FieldContext::new(3, 1, 3, None)?,
        FieldContext::new(2, 2, 3, None)?,
    ])
}

/// Decoding matrices over `F_{2^m}` with `m = n ∈ {12, 24}` and
/// `ℓ ∈ {1, 2, 3}` reach weak Popov form with degree exactly
/// `deg B − Δ(B)`.
pub fn key_equation_reduction(instances: u64, seed: u64) -> CliResult<CheckReport> {
    let fields = [
        FieldContext::new(2, 1, 12, None)?,
        FieldContext::new(2, 1, 24, None)?,
    ];
    let opts = ReduceOptions::default();
    let (mut bad, mut long, mut over_budget, mut completed) = (0, 0, 0, 0);
    for i in 0..instances {
        let ctx = &fields[(i % 2) as usize];
        let n = ctx.m() as usize;
        let ell = 1 + ((i / 2) % 3) as usize;
        let trial_seed = derive_seed(seed, i);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let k = rng.gen_range(1..n);
        let tau = rng.gen_range(0..=ell * (n - k) / (ell + 1));
        let params = CodeParams::random(ctx, n, k, ell, rng.gen())?;
        let messages = random_messages(ctx, &params, &mut rng);
        let codewords = encode(ctx, &params, &messages)?;
        let (received, _) = add_rank_error(ctx, &codewords, tau, rng.gen())?;
        let b = build_b(&build_instance(ctx, &params, &received)?);
        let defect = orthogonality_defect(ctx, &b, DefectHint::Triangular)?;
        let mut stats = ReductionStats::default();
        let u = reduce_dc_with_stats(ctx, &b, defect, &opts, &mut stats)?;
        long += usize::from(is_long(&u.matrix, defect));
        over_budget += usize::from(stats.base_case_count > defect);
        let before = u.factors.len();
        let (u, reduced) = complete_to_wpf(ctx, &b, u, &opts, &mut stats)?;
        completed += usize::from(u.factors.len() > before);
        let ok = reduced.is_weak_popov()
            && reduced
                .degree()
                .zip(b.degree())
                .is_some_and(|(a, d)| a + defect == d);
        bad += usize::from(!ok);
    }
    Ok(CheckReport {
        name: "key-equation matrices reach weak Popov form at deg B - defect",
        passed: bad == 0 && over_budget == 0,
        detail: format!(
            "{instances} instances, {bad} failures, {over_budget} over base-case budget, {completed} needed a completion step"
        ),
        length_violations: long,
    })
}

/// The d&c reducer returns the same transform as the iterated one.
pub fn dc_matches_iterated(
    cases: u64,
    seed: u64,
    max_r: usize,
    max_degree: usize,
    max_t: usize,
) -> CliResult<CheckReport> {
    let fields = mixed_fields()?;
    let (mut mismatches, mut long) = (0, 0);
    for i in 0..cases {
        let ctx = &fields[(i % 3) as usize];
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
        let r = 1 + (i as usize % max_r);
        let m = random_matrix(ctx, r, rng.gen_range(0..=max_degree), &mut rng);
        let t = rng.gen_range(0..=max_t);
        let it = reduce_iterated(ctx, &m, t)?;
        for strategy in [MulStrategy::Naive, MulStrategy::Karatsuba] {
            let dc = reduce_dc(ctx, &m, t, &ReduceOptions::with_strategy(strategy))?;
            mismatches += usize::from(dc != it);
            long += usize::from(is_long(&dc.matrix, t));
        }
    }
    Ok(CheckReport {
        name: "d&c transform equals iterated transform",
        passed: mismatches == 0,
        detail: format!("{cases} matrices (r <= {max_r}, deg <= {max_degree}, t <= {max_t}), {mismatches} mismatches"),
        length_violations: long,
    })
}

/// `R(M, t) = R(M|_t, t)`.
pub fn truncation_invariance(cases: u64, seed: u64) -> CliResult<CheckReport> {
    let fields = mixed_fields()?;
    let (mut mismatches, mut long) = (0, 0);
    for i in 0..cases {
        let ctx = &fields[(i % 3) as usize];
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
        let r = rng.gen_range(1..=4);
        let m = random_matrix(ctx, r, rng.gen_range(0..=40), &mut rng);
        let t = rng.gen_range(1..=24);
        let full = reduce_iterated(ctx, &m, t)?;
        let truncated = m.truncate(t);
        let dc = reduce_dc(ctx, &truncated, t, &ReduceOptions::default())?;
        mismatches += usize::from(full != reduce_iterated(ctx, &truncated, t)? || full != dc);
        long += usize::from(is_long(&dc.matrix, t));
    }
    Ok(CheckReport {
        name: "transform depends only on the truncation M|_t",
        passed: mismatches == 0,
        detail: format!("{cases} (M, t) pairs, {mismatches} mismatches"),
        length_violations: long,
    })
}

/// Entries of `R̂(M, t)` have length at most `t`, including on matrices
/// with long, sparse entries.
pub fn transform_length(cases: u64, seed: u64) -> CliResult<CheckReport> {
    let fields = mixed_fields()?;
    let mut long = 0;
    let mut longest = 0;
    for i in 0..cases {
        let ctx = &fields[(i % 3) as usize];
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
        let r = rng.gen_range(1..=5);
        let mut m = random_matrix(ctx, r, rng.gen_range(0..=48), &mut rng);
        if i % 2 == 1 {
            // stretch entries apart so rows have large length but few terms
            for row in 0..r {
                for col in 0..r {
                    let e = m.entry(row, col).clone();
                    let spread = SkewPoly::from_coeffs(
                        e.to_coeffs()
                            .iter()
                            .enumerate()
                            .flat_map(|(j, &c)| {
                                let pad = if j == 0 { 0 } else { 2 };
                                std::iter::repeat_n(ctx.zero(), pad).chain(std::iter::once(c))
                            })
                            .collect(),
                    );
                    m.set_entry(row, col, spread);
                }
            }
        }
        let t = rng.gen_range(0..=32);
        let u = reduce_dc(ctx, &m, t, &ReduceOptions::default())?;
        longest = longest.max(u.matrix.max_entry_len().saturating_sub(t.max(1)));
        long += usize::from(is_long(&u.matrix, t));
    }
    Ok(CheckReport {
        name: "d&c transforms have entries of length <= t",
        passed: long == 0,
        detail: format!("{cases} matrices, {long} violations (worst excess {longest})"),
        length_violations: long,
    })
}

/// On inputs of length at most one the base case uses at most `r²` simple
/// transformations, each touching at most `2r` coefficients (one row of
/// the matrix, one row of the transform).
pub fn basecase_cost(cases: u64, seed: u64, max_r: usize) -> CliResult<CheckReport> {
    let fields = mixed_fields()?;
    let (mut too_many, mut too_costly, mut long) = (0, 0, 0);
    let mut worst_ops = 0;
    for i in 0..cases {
        let ctx = &fields[(i % 3) as usize];
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
        let r = rng.gen_range(1..=max_r);
        let m = random_homogeneous_matrix(ctx, r, 10, &mut rng);
        let mut stats = ReductionStats::default();
        let u = reduce_basecase_with_stats(ctx, &m, &mut stats)?;
        too_many += usize::from(stats.st_count > r * r);
        too_costly += usize::from(stats.max_st_coeff_ops > 2 * r);
        long += usize::from(u.matrix.max_entry_len() > 1);
        worst_ops = worst_ops.max(stats.max_st_coeff_ops * 100 / (2 * r));
    }
    Ok(CheckReport {
        name: "base case on length-1 inputs: <= r^2 transformations, O(r) work each",
        passed: too_many == 0 && too_costly == 0,
        detail: format!(
            "{cases} matrices (r <= {max_r}), {too_many} over r^2, {too_costly} over 2r ops, worst {worst_ops}% of 2r"
        ),
        length_violations: long,
    })
}

fn roundtrip_args(
    n: usize,
    k: usize,
    ell: usize,
    tau: usize,
    trials: u64,
    seed: u64,
) -> RoundtripArgs {
    RoundtripArgs {
        field: FieldArgs { q: 2, m: n as u32 },
        n,
        k,
        ell,
        tau,
        trials,
        seed,
        min_rate: 1.0,
        parallel: 1,
        mul: Strategy::Naive,
        verbose: false,
    }
}

/// `ℓ = 1` within the unique decoding radius always succeeds.
pub fn unique_decoding(
    n: usize,
    k: usize,
    tau: usize,
    trials: u64,
    seed: u64,
    max_ms: f64,
) -> CliResult<CheckReport> {
    let args = roundtrip_args(n, k, 1, tau, trials, seed);
    let results = run_trials(&args.field.context()?, &args)?;
    let ok = results
        .iter()
        .filter(|(r, _)| r.status == TrialStatus::Success)
        .count();
    let slowest = results.iter().map(|&(_, t)| t).fold(0.0, f64::max);
    Ok(CheckReport {
        name: "single codeword round trip within the unique radius",
        passed: ok as u64 == trials && slowest < max_ms,
        detail: format!("n=m={n} k={k} tau={tau}: {ok}/{trials} decoded, slowest trial {slowest:.1} ms (limit {max_ms} ms)"),
        length_violations: 0,
    })
}

/// Interleaved decoding beyond the single-codeword radius.
pub fn interleaved_gain(
    n: usize,
    k: usize,
    ell: usize,
    tau: usize,
    trials: u64,
    seed: u64,
    min_rate: f64,
) -> CliResult<CheckReport> {
    let args = roundtrip_args(n, k, ell, tau, trials, seed);
    let results = run_trials(&args.field.context()?, &args)?;
    let ok = results
        .iter()
        .filter(|(r, _)| r.status == TrialStatus::Success)
        .count();
    let wrong = results
        .iter()
        .filter(|(r, _)| r.status == TrialStatus::Miscorrection)
        .count();
    let rate = ok as f64 / trials as f64;
    Ok(CheckReport {
        name: "interleaved decoding beyond the single-codeword radius",
        passed: rate >= min_rate,
        detail: format!(
            "n=m={n} k={k} ell={ell} tau={tau}: success rate {rate:.4} ({ok}/{trials}, {wrong} miscorrections), required {min_rate}"
        ),
        length_violations: 0,
    })
}

/// Wall time of the d&c reducer grows by at most `max_ratio` per doubling
/// of `n`, and it never calls the base case more than `t` times.
pub fn recurrence_shape(
    sizes: &[usize],
    reps: usize,
    seed: u64,
    max_ratio: f64,
) -> CliResult<CheckReport> {
    let algos = [BenchAlgo::Dc(MulStrategy::Naive), BenchAlgo::Naive];
    let records = reduce_suite(sizes, reps, 2, seed, &algos)?;
    let over_budget = records
        .iter()
        .filter(|r| r.algorithm == "dc" && r.base_case_count > r.t)
        .count();
    let med = medians(&records);
    let time = |algo: &str, n: usize| {
        med.iter()
            .find(|(a, m, _)| a == algo && *m == n)
            .map(|&(_, _, t)| t)
            .expect("measured")
    };
    let ratios: Vec<f64> = sizes
        .windows(2)
        .map(|w| time("dc", w[1]) / time("dc", w[0]))
        .collect();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    let largest = *sizes.last().expect("non-empty");
    let (dc, naive) = (time("dc", largest), time("naive", largest));
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    Ok(CheckReport {
        name: "d&c reducer scaling on key-equation matrices",
        passed: worst <= max_ratio && over_budget == 0,
        detail: format!(
            "sizes {sizes:?}, doubling ratios [{}] (limit {max_ratio}), {over_budget} runs over base-case budget; at n={largest}: d&c {dc:.1} ms vs naive {naive:.1} ms ({})",
            ratio_text.join(", "),
            if dc < naive { "d&c faster" } else { "naive faster" }
        ),
        length_violations: 0,
    })
}

/// The truncations of `[[x²+x, x²+1], [x⁴, x³+x²+x+1]]`.
pub fn truncation_example() -> CliResult<CheckReport> {
    let p = SkewPoly::from_values;
    let m = SkewMatrix::new(vec![
        vec![p(&[0, 1, 1]), p(&[1, 0, 1])],
        vec![p(&[0, 0, 0, 0, 1]), p(&[1, 1, 1, 1])],
    ])?;
    let m2 = SkewMatrix::new(vec![
        vec![p(&[0, 1, 1]), p(&[0, 0, 1])],
        vec![p(&[0, 0, 0, 0, 1]), p(&[0, 0, 0, 1])],
    ])?;
    let m1 = SkewMatrix::new(vec![
        vec![p(&[0, 0, 1]), p(&[0, 0, 1])],
        vec![p(&[0, 0, 0, 0, 1]), SkewPoly::zero()],
    ])?;
    let ok2 = m.truncate(2) == m2;
    let ok1 = m.truncate(1) == m1;
    Ok(CheckReport {
        name: "truncations M|_2 and M|_1 of the example matrix",
        passed: ok2 && ok1,
        detail: format!(
            "M|_2 {}, M|_1 {}",
            if ok2 { "matches" } else { "differs" },
            if ok1 { "matches" } else { "differs" }
        ),
        length_violations: 0,
    })
}

/// Combines the length violations recorded by other checks.
pub fn length_summary(reports: &[&CheckReport], own: CheckReport) -> CheckReport {
    let total: usize =
        reports.iter().map(|r| r.length_violations).sum::<usize>() + own.length_violations;
    CheckReport {
        name: own.name,
        passed: total == 0,
        detail: format!("{}; {total} violations across all suites", own.detail),
        length_violations: total,
    }
}

pub fn command(args: &CheckArgs) -> CliResult<()> {
    let n = args.cases as u64;
    let s = args.seed;
    let first = [
        key_equation_reduction(n, s)?,
        dc_matches_iterated(n, derive_seed(s, 1), 4, 32, 16)?,
        truncation_invariance(n, derive_seed(s, 2))?,
    ];
    let length = length_summary(
        &first.iter().collect::<Vec<_>>(),
        transform_length(n, derive_seed(s, 3))?,
    );
    let rest = [
        basecase_cost(n * 4, derive_seed(s, 4), 8)?,
        unique_decoding(12, 6, 3, n, derive_seed(s, 5), 2000.0)?,
        interleaved_gain(12, 6, 2, 4, n, derive_seed(s, 6), 0.5)?,
        truncation_example()?,
    ];
    let all: Vec<&CheckReport> = first
        .iter()
        .chain(std::iter::once(&length))
        .chain(&rest)
        .collect();
    for r in &all {
        println!("{r}");
    }
    let failed = all.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::Unmet(format!("{failed} checks failed")));
    }
    Ok(())
}
