//! Input generators shared by the criterion benches.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewreduce::gabidulin::build_b;
use skewreduce::reduce::orthogonality_defect;
use skewreduce::sample::{random_key_equation, random_poly};
use skewreduce::{DefectHint, FieldContext, SkewMatrix, SkewPoly};

pub fn bench_field() -> FieldContext {
    FieldContext::new(2, 1, 16, None).expect("valid field")
}

/// Key-equation matrix with `k = n/2` and its orthogonality defect.
pub fn key_equation_matrix(
    ctx: &FieldContext,
    n: usize,
    ell: usize,
    seed: u64,
) -> (SkewMatrix, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = build_b(&random_key_equation(ctx, n, n / 2, ell, &mut rng));
    let t = orthogonality_defect(ctx, &b, DefectHint::Triangular).expect("triangular");
    (b, t)
}

/// Two random polynomials of degree `< len`.
pub fn poly_pair(ctx: &FieldContext, len: usize, seed: u64) -> (SkewPoly, SkewPoly) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = len.saturating_sub(1);
    (random_poly(ctx, d, &mut rng), random_poly(ctx, d, &mut rng))
}
