//! Seeded generators for random inputs.

use rand::Rng;

use crate::field::FieldContext;
use crate::gabidulin::{column_weights, DecodingInstance};
use crate::matrix::SkewMatrix;
use crate::poly::SkewPoly;

/// Random polynomial of degree at most `max_degree` (possibly zero).
pub fn random_poly<R: Rng + ?Sized>(
    ctx: &FieldContext,
    max_degree: usize,
    rng: &mut R,
) -> SkewPoly {
    SkewPoly::from_coeffs((0..=max_degree).map(|_| ctx.random(rng)).collect())
}

/// Random `r × r` matrix without zero rows. Each row gets its own degree
/// bound drawn from `0..=max_degree`, so row degrees differ.
pub fn random_matrix<R: Rng + ?Sized>(
    ctx: &FieldContext,
    r: usize,
    max_degree: usize,
    rng: &mut R,
) -> SkewMatrix {
    let rows = (0..r)
        .map(|_| {
            let bound = rng.gen_range(0..=max_degree);
            loop {
                let row: Vec<SkewPoly> = (0..r).map(|_| random_poly(ctx, bound, rng)).collect();
                if row.iter().any(|f| !f.is_zero()) {
                    break row;
                }
            }
        })
        .collect();
    SkewMatrix::new(rows).expect("square")
}

/// Random matrix whose rows are homogeneous: every nonzero entry of row `i`
/// is a monomial of the row degree, so all entries have length at most one.
pub fn random_homogeneous_matrix<R: Rng + ?Sized>(
    ctx: &FieldContext,
    r: usize,
    max_degree: usize,
    rng: &mut R,
) -> SkewMatrix {
    let rows = (0..r)
        .map(|_| {
            let d = rng.gen_range(0..=max_degree);
            loop {
                let row: Vec<SkewPoly> = (0..r)
                    .map(|_| {
                        if rng.gen_bool(0.7) {
                            SkewPoly::monomial(ctx.random(rng), d)
                        } else {
                            SkewPoly::zero()
                        }
                    })
                    .collect();
                if row.iter().any(|f| !f.is_zero()) {
                    break row;
                }
            }
        })
        .collect();
    SkewMatrix::new(rows).expect("square")
}

/// A key-equation instance with random `s_i` of degree `< n` and a random
/// monic `G` of degree `n`, for benchmarking without building a code.
pub fn random_key_equation<R: Rng + ?Sized>(
    ctx: &FieldContext,
    n: usize,
    k: usize,
    ell: usize,
    rng: &mut R,
) -> DecodingInstance {
    let mut g = random_poly(ctx, n.saturating_sub(1), rng).to_coeffs();
    g.resize(n, ctx.zero());
    g.push(ctx.one());
    let g = SkewPoly::from_coeffs(g);
    DecodingInstance {
        s: (0..ell)
            .map(|_| random_poly(ctx, n.saturating_sub(1), rng))
            .collect(),
        g: vec![g; ell],
        gamma: column_weights(&vec![k; ell]),
    }
}
