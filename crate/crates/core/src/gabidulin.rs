//! Interleaved Gabidulin codes: encoding, a rank-error channel, and decoding
//! through weak Popov reduction of the key-equation matrix
//!
//! ```text
//! B = [ x^γ0  s_1·x^γ1  …  s_ℓ·x^γℓ ]
//!     [ 0     g_1·x^γ1  …  0        ]
//!     [ …                           ]
//!     [ 0     0         …  g_ℓ·x^γℓ ]
//! ```
//!
//! If `λ` annihilates the shared error column space, the row
//! `(λ·x^γ0, λ·f_1·x^γ1, …, λ·f_ℓ·x^γℓ)` lies in the row space of `B`. The
//! column weights `γ0 = max k_i`, `γi = γ0 − k_i` make its first entry strictly
//! dominant, so the reduced basis exposes it as the row with leading
//! position 0. Each message is then an exact left quotient by `λ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{matrix_rank, random_li_set_with, FieldContext, FieldElement};
use crate::matrix::{ReductionStats, SkewMatrix};
use crate::poly::{annihilator, interpolate, Side, SkewPoly};
use crate::reduce::{orthogonality_defect, reduce_to_wpf, DefectHint, ReduceOptions};

/// Parameters of an `ℓ`-interleaved Gabidulin code of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: Vec<usize>,
    pub locators: Vec<FieldElement>,
}

impl CodeParams {
    pub fn new(ctx: &FieldContext, k: Vec<usize>, locators: Vec<FieldElement>) -> Result<Self> {
        let n = locators.len();
        if n > ctx.m() as usize {
            return Err(Error::InvalidParams(format!(
                "length {n} exceeds the extension degree {}",
                ctx.m()
            )));
        }
        if k.is_empty() {
            return Err(Error::InvalidParams(
                "interleaving degree must be at least 1".into(),
            ));
        }
        if let Some(&bad) = k.iter().find(|&&ki| ki == 0 || ki >= n) {
            return Err(Error::InvalidParams(format!(
                "message length {bad} not in [1, {n})"
            )));
        }
        if crate::field::base_rank(ctx, &locators) < n {
            return Err(Error::DependentPoints);
        }
        Ok(CodeParams { n, k, locators })
    }

    /// Code with `ell` equal message lengths and seeded random locators.
    pub fn random(ctx: &FieldContext, n: usize, k: usize, ell: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let locators = random_li_set_with(ctx, n, &mut rng)?;
        Self::new(ctx, vec![k; ell], locators)
    }

    pub fn ell(&self) -> usize {
        self.k.len()
    }
}

/// `c_{i,j} = f_i(g_j)`.
pub fn encode(
    ctx: &FieldContext,
    params: &CodeParams,
    messages: &[SkewPoly],
) -> Result<Vec<Vec<FieldElement>>> {
    if messages.len() != params.ell() {
        return Err(Error::DimensionMismatch(format!(
            "{} messages for interleaving degree {}",
            messages.len(),
            params.ell()
        )));
    }
    messages
        .iter()
        .zip(&params.k)
        .enumerate()
        .map(|(index, (f, &k))| {
            if let Some(degree) = f.degree().filter(|&d| d >= k) {
                return Err(Error::MessageTooLong { index, degree, k });
            }
            Ok(params.locators.iter().map(|&g| f.eval(ctx, g)).collect())
        })
        .collect()
}

/// Uniformly random messages with `deg f_i < k_i`.
pub fn random_messages<R: Rng + ?Sized>(
    ctx: &FieldContext,
    params: &CodeParams,
    rng: &mut R,
) -> Vec<SkewPoly> {
    params
        .k
        .iter()
        .map(|&k| SkewPoly::from_coeffs((0..k).map(|_| ctx.random(rng)).collect()))
        .collect()
}

/// A rank error `e_{i,j} = Σ_t a_t·b_{i,t,j}` with `a_t ∈ F_{q^m}` shared
/// by all rows and `b ∈ F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorPattern {
    pub column_basis: Vec<FieldElement>,
    /// `row_factors[i][t][j] = b_{i,t,j}`.
    pub row_factors: Vec<Vec<Vec<FieldElement>>>,
    pub error: Vec<Vec<FieldElement>>,
}

impl ErrorPattern {
    pub fn rank(&self) -> usize {
        self.column_basis.len()
    }
}

/// Adds an error of `F_q`-rank exactly `tau` whose column space is shared
/// across all rows.
pub fn add_rank_error(
    ctx: &FieldContext,
    codewords: &[Vec<FieldElement>],
    tau: usize,
    seed: u64,
) -> Result<(Vec<Vec<FieldElement>>, ErrorPattern)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    add_rank_error_with(ctx, codewords, tau, &mut rng)
}

pub fn add_rank_error_with<R: Rng + ?Sized>(
    ctx: &FieldContext,
    codewords: &[Vec<FieldElement>],
    tau: usize,
    rng: &mut R,
) -> Result<(Vec<Vec<FieldElement>>, ErrorPattern)> {
    let ell = codewords.len();
    let n = codewords.first().map_or(0, Vec::len);
    if tau > n.min(ctx.m() as usize) {
        return Err(Error::InvalidParams(format!(
            "error rank {tau} exceeds min(n, m) = {}",
            n.min(ctx.m() as usize)
        )));
    }
    let column_basis = random_li_set_with(ctx, tau, rng)?;
    let row_factors = loop {
        let factors: Vec<Vec<Vec<FieldElement>>> = (0..ell)
            .map(|_| {
                (0..tau)
                    .map(|_| (0..n).map(|_| ctx.random_base(rng)).collect())
                    .collect()
            })
            .collect();
        // The τ × ℓn matrix [B_1 | … | B_ℓ] must have full row rank.
        let stacked: Vec<Vec<FieldElement>> = (0..tau)
            .map(|t| factors.iter().flat_map(|b| b[t].iter().copied()).collect())
            .collect();
        if matrix_rank(ctx, &stacked) == tau {
            break factors;
        }
    };
    let error: Vec<Vec<FieldElement>> = row_factors
        .iter()
        .map(|b| {
            (0..n)
                .map(|j| {
                    (0..tau).fold(FieldElement::ZERO, |acc, t| {
                        ctx.add(acc, ctx.mul(column_basis[t], b[t][j]))
                    })
                })
                .collect()
        })
        .collect();
    let received = codewords
        .iter()
        .zip(&error)
        .map(|(c, e)| c.iter().zip(e).map(|(&x, &y)| ctx.add(x, y)).collect())
        .collect();
    Ok((
        received,
        ErrorPattern {
            column_basis,
            row_factors,
            error,
        },
    ))
}

/// The polynomials and column weights defining `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodingInstance {
    pub s: Vec<SkewPoly>,
    pub g: Vec<SkewPoly>,
    pub gamma: Vec<usize>,
}

pub fn column_weights(k: &[usize]) -> Vec<usize> {
    let g0 = k.iter().copied().max().unwrap_or(0);
    std::iter::once(g0)
        .chain(k.iter().map(|&ki| g0 - ki))
        .collect()
}

pub fn build_instance(
    ctx: &FieldContext,
    params: &CodeParams,
    received: &[Vec<FieldElement>],
) -> Result<DecodingInstance> {
    if received.len() != params.ell() || received.iter().any(|r| r.len() != params.n) {
        return Err(Error::DimensionMismatch(format!(
            "received word must be {}x{}",
            params.ell(),
            params.n
        )));
    }
    let g = annihilator(ctx, &params.locators);
    let s = received
        .iter()
        .map(|row| {
            let pts: Vec<_> = params
                .locators
                .iter()
                .copied()
                .zip(row.iter().copied())
                .collect();
            interpolate(ctx, &pts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecodingInstance {
        g: vec![g; params.ell()],
        s,
        gamma: column_weights(&params.k),
    })
}

/// The `(ℓ+1) × (ℓ+1)` upper-triangular key-equation matrix.
pub fn build_b(instance: &DecodingInstance) -> SkewMatrix {
    let ell = instance.s.len();
    let r = ell + 1;
    let mut b = SkewMatrix::zero(r, r);
    b.set_entry(0, 0, SkewPoly::x_power(instance.gamma[0]));
    for i in 0..ell {
        let w = instance.gamma[i + 1];
        b.set_entry(0, i + 1, instance.s[i].shift_right_x(w));
        b.set_entry(i + 1, i + 1, instance.g[i].shift_right_x(w));
    }
    b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    #[serde(rename = "no-lp1-row")]
    NoLeadingRow,
    InexactDivision,
    DegreeBound,
}

impl std::fmt::Display for FailureReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FailureReason::NoLeadingRow => "no-lp1-row",
            FailureReason::InexactDivision => "inexact-division",
            FailureReason::DegreeBound => "degree-bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded {
        messages: Vec<SkewPoly>,
        error_span: SkewPoly,
    },
    Failed(FailureReason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeReport {
    pub outcome: DecodeOutcome,
    pub defect: usize,
    pub stats: ReductionStats,
}

impl DecodeReport {
    pub fn messages(&self) -> Option<&[SkewPoly]> {
        match &self.outcome {
            DecodeOutcome::Decoded { messages, .. } => Some(messages),
            DecodeOutcome::Failed(_) => None,
        }
    }

    pub fn lambda_degree(&self) -> Option<usize> {
        match &self.outcome {
            DecodeOutcome::Decoded { error_span, .. } => error_span.degree(),
            DecodeOutcome::Failed(_) => None,
        }
    }
}

/// `v = q·x^γ` exactly, or `None`.
fn strip_shift(ctx: &FieldContext, v: &SkewPoly, gamma: usize) -> Option<SkewPoly> {
    let (q, r) = v
        .divide(ctx, &SkewPoly::x_power(gamma), Side::Right)
        .expect("x^γ is nonzero");
    r.is_zero().then_some(q)
}

pub fn decode(
    ctx: &FieldContext,
    params: &CodeParams,
    received: &[Vec<FieldElement>],
    opts: &ReduceOptions,
) -> Result<DecodeReport> {
    let instance = build_instance(ctx, params, received)?;
    let b = build_b(&instance);
    let defect = orthogonality_defect(ctx, &b, DefectHint::Triangular)?;
    let reduction = reduce_to_wpf(ctx, &b, Some(defect), opts)?;
    let failed = |reason| DecodeReport {
        outcome: DecodeOutcome::Failed(reason),
        defect,
        stats: reduction.stats.clone(),
    };

    let lead_row = reduction
        .reduced
        .rows()
        .iter()
        .find(|row| row.leading_position().ok() == Some(0));
    let Some(row) = lead_row else {
        return Ok(failed(FailureReason::NoLeadingRow));
    };
    let Some(lambda) = strip_shift(ctx, row.get(0), instance.gamma[0]) else {
        return Ok(failed(FailureReason::InexactDivision));
    };
    let mut messages = Vec::with_capacity(params.ell());
    for i in 0..params.ell() {
        let Some(omega) = strip_shift(ctx, row.get(i + 1), instance.gamma[i + 1]) else {
            return Ok(failed(FailureReason::InexactDivision));
        };
        let (f, r) = omega.divide(ctx, &lambda, Side::Left)?;
        if !r.is_zero() {
            return Ok(failed(FailureReason::InexactDivision));
        }
        if f.degree().is_some_and(|d| d >= params.k[i]) {
            return Ok(failed(FailureReason::DegreeBound));
        }
        messages.push(f);
    }
    Ok(DecodeReport {
        outcome: DecodeOutcome::Decoded {
            messages,
            error_span: lambda,
        },
        defect,
        stats: reduction.stats,
    })
}

/// Per-trial seed derived from a run seed (SplitMix64 step).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialStatus {
    Success,
    /// The decoder reported a failure.
    Failure,
    /// The decoder returned messages that differ from the transmitted ones.
    Miscorrection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub index: u64,
    pub seed: u64,
    pub status: TrialStatus,
    pub reason: Option<FailureReason>,
    pub defect: usize,
    pub lambda_degree: Option<usize>,
    pub error_rank: usize,
}

/// One encode → channel → decode round trip with fresh locators, messages
/// and error drawn from `seed`.
pub fn roundtrip_trial(
    ctx: &FieldContext,
    n: usize,
    k: &[usize],
    tau: usize,
    index: u64,
    seed: u64,
    opts: &ReduceOptions,
) -> Result<TrialResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let locators = random_li_set_with(ctx, n, &mut rng)?;
    let params = CodeParams::new(ctx, k.to_vec(), locators)?;
    let messages = random_messages(ctx, &params, &mut rng);
    let codewords = encode(ctx, &params, &messages)?;
    let (received, pattern) = add_rank_error_with(ctx, &codewords, tau, &mut rng)?;
    let report = decode(ctx, &params, &received, opts)?;
    let (status, reason) = match &report.outcome {
        DecodeOutcome::Decoded { messages: got, .. } if *got == messages => {
            (TrialStatus::Success, None)
        }
        DecodeOutcome::Decoded { .. } => (TrialStatus::Miscorrection, None),
        DecodeOutcome::Failed(r) => (TrialStatus::Failure, Some(*r)),
    };
    Ok(TrialResult {
        index,
        seed,
        status,
        reason,
        defect: report.defect,
        lambda_degree: report.lambda_degree(),
        error_rank: pattern.rank(),
    })
}
