//! Iterated and divide-&-conquer row reduction to weak Popov form.
//!
//! `R(M, t)` denotes the transform obtained by repeating the base-case
//! reducer until the matrix is in weak Popov form or its degree has dropped by
//! at least `t`. [`reduce_iterated`] computes it directly; [`reduce_dc`]
//! computes the same transform recursively, halving `t` and working on
//! accuracy approximations `M|_t` so that every product involves polynomials
//! of length at most `t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::matrix::{
    basecase_in_place, naive_row_reduce, ReductionStats, SkewMatrix, TransformRecord,
};
use crate::poly::MulStrategy;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceOptions {
    pub strategy: MulStrategy,
    /// Below this `t` the recursion hands over to the iterated reducer.
    /// `None` recurses all the way down to `t = 1`.
    pub iterated_cutoff: Option<usize>,
}

impl ReduceOptions {
    pub fn with_strategy(strategy: MulStrategy) -> Self {
        ReduceOptions {
            strategy,
            iterated_cutoff: None,
        }
    }
}

/// Degree drop from `before` to `after`, with a zero row counting as an
/// unbounded drop.
fn degree_drop(before: Option<usize>, after: Option<usize>) -> usize {
    match (before, after) {
        (Some(b), Some(a)) => b.saturating_sub(a),
        (_, None) => usize::MAX,
        (None, Some(_)) => 0,
    }
}

fn check_input(m: &SkewMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    match m.first_zero_row() {
        Some(i) => Err(Error::ZeroRow(i)),
        None => Ok(()),
    }
}

/// `R(M, t)` by repeated base-case reduction on the full matrix.
pub fn reduce_iterated(ctx: &FieldContext, m: &SkewMatrix, t: usize) -> Result<TransformRecord> {
    reduce_iterated_with_stats(ctx, m, t, &mut ReductionStats::default())
}

pub fn reduce_iterated_with_stats(
    ctx: &FieldContext,
    m: &SkewMatrix,
    t: usize,
    stats: &mut ReductionStats,
) -> Result<TransformRecord> {
    check_input(m)?;
    let start = m.degree();
    let mut work = m.clone();
    let mut record = TransformRecord::identity(m.nrows());
    while degree_drop(start, work.degree()) < t && !work.is_weak_popov() {
        let step = basecase_in_place(ctx, &mut work, stats)?;
        record.matrix = step.apply(ctx, &record.matrix);
        record.factors.extend(step.factors);
    }
    Ok(record)
}

/// `R̂(M, t)`: divide-&-conquer computation of `R(M, t)`.
pub fn reduce_dc(
    ctx: &FieldContext,
    m: &SkewMatrix,
    t: usize,
    opts: &ReduceOptions,
) -> Result<TransformRecord> {
    reduce_dc_with_stats(ctx, m, t, opts, &mut ReductionStats::default())
}

pub fn reduce_dc_with_stats(
    ctx: &FieldContext,
    m: &SkewMatrix,
    t: usize,
    opts: &ReduceOptions,
    stats: &mut ReductionStats,
) -> Result<TransformRecord> {
    check_input(m)?;
    dc(ctx, m, t, opts, stats)
}

fn dc(
    ctx: &FieldContext,
    m: &SkewMatrix,
    t: usize,
    opts: &ReduceOptions,
    stats: &mut ReductionStats,
) -> Result<TransformRecord> {
    if t == 0 || m.is_weak_popov() {
        return Ok(TransformRecord::identity(m.nrows()));
    }
    if t == 1 {
        let mut leaf = m.truncate(1);
        return basecase_in_place(ctx, &mut leaf, stats);
    }
    let truncated = m.truncate(t);
    if opts.iterated_cutoff.is_some_and(|c| t <= c) {
        return reduce_iterated_with_stats(ctx, &truncated, t, stats);
    }
    let first = dc(ctx, &truncated, t / 2, opts, stats)?;
    if first.factors.is_empty() {
        // R(M, t/2) = I only when M is already in weak Popov form.
        return Ok(first);
    }
    let reduced = first.matrix.mul(ctx, &truncated, opts.strategy)?;
    let dropped = degree_drop(truncated.degree(), reduced.degree());
    if dropped >= t {
        return Ok(first);
    }
    let second = dc(ctx, &reduced, t - dropped, opts, stats)?;
    first.then(ctx, second, opts.strategy)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefectHint {
    /// Triangular if the matrix is upper triangular, otherwise via reduction.
    #[default]
    Auto,
    Triangular,
    ViaReduction,
}

/// Orthogonality defect `deg M − deg det M`.
pub fn orthogonality_defect(ctx: &FieldContext, m: &SkewMatrix, hint: DefectHint) -> Result<usize> {
    check_input(m)?;
    let deg = m.degree().expect("no zero rows");
    let use_triangular = match hint {
        DefectHint::Triangular => true,
        DefectHint::ViaReduction => false,
        DefectHint::Auto => {
            m.is_upper_triangular() && (0..m.nrows()).all(|i| !m.entry(i, i).is_zero())
        }
    };
    let det_deg = if use_triangular {
        if !m.is_upper_triangular() {
            return Err(Error::NotTriangular);
        }
        (0..m.nrows())
            .map(|i| m.entry(i, i).degree())
            .sum::<Option<usize>>()
            .ok_or(Error::NotTriangular)?
    } else {
        let (_, reduced) = naive_row_reduce(ctx, m)?;
        reduced.degree().expect("full rank is preserved")
    };
    Ok(deg - det_deg)
}

/// Outcome of [`reduce_to_wpf`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpfReduction {
    pub transform: TransformRecord,
    pub reduced: SkewMatrix,
    /// The `t` passed to the divide-&-conquer reducer.
    pub target: usize,
    pub stats: ReductionStats,
}

/// Brings a full-rank square matrix into weak Popov form.
///
/// Runs `R̂(M, t)` with `t` defaulting to the orthogonality defect. A matrix
/// can reach the determinant degree while two rows still share a leading
/// position; in that case a final base-case pass (which can no longer lower
/// the degree) resolves the remaining conflicts.
pub fn reduce_to_wpf(
    ctx: &FieldContext,
    m: &SkewMatrix,
    t: Option<usize>,
    opts: &ReduceOptions,
) -> Result<WpfReduction> {
    check_input(m)?;
    let target = match t {
        Some(t) => t,
        None => orthogonality_defect(ctx, m, DefectHint::Auto)?,
    };
    let mut stats = ReductionStats::default();
    if m.is_weak_popov() {
        return Ok(WpfReduction {
            transform: TransformRecord::identity(m.nrows()),
            reduced: m.clone(),
            target,
            stats,
        });
    }
    let transform = dc(ctx, m, target, opts, &mut stats)?;
    let (transform, reduced) = complete_to_wpf(ctx, m, transform, opts, &mut stats)?;
    Ok(WpfReduction {
        transform,
        reduced,
        target,
        stats,
    })
}

/// Extends `transform` by single-step reductions until `transform·M` is in
/// weak Popov form. Returns the extended transform and the reduced matrix.
pub fn complete_to_wpf(
    ctx: &FieldContext,
    m: &SkewMatrix,
    mut transform: TransformRecord,
    opts: &ReduceOptions,
    stats: &mut ReductionStats,
) -> Result<(TransformRecord, SkewMatrix)> {
    let mut reduced = transform.matrix.mul(ctx, m, opts.strategy)?;
    while !reduced.is_weak_popov() {
        if let Some(i) = reduced.first_zero_row() {
            return Err(Error::ZeroRow(i));
        }
        let step = dc(ctx, &reduced, 1, opts, stats)?;
        reduced = step.matrix.mul(ctx, &reduced, opts.strategy)?;
        transform = transform.then(ctx, step, opts.strategy)?;
    }
    Ok((transform, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::SkewPoly;

    fn p(v: &[u32]) -> SkewPoly {
        SkewPoly::from_values(v)
    }

    fn mat(rows: &[&[&[u32]]]) -> SkewMatrix {
        SkewMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|e| p(e)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn defect_examples() {
        let k = FieldContext::new(2, 1, 2, None).unwrap();
        let wpf = mat(&[
            &[&[0, 1, 1], &[1, 0, 1]],
            &[&[0, 0, 0, 0, 1], &[1, 1, 1, 1]],
        ]);
        assert_eq!(
            orthogonality_defect(&k, &wpf, DefectHint::ViaReduction).unwrap(),
            0
        );
        let tri = mat(&[&[&[0, 1], &[0, 0, 1]], &[&[], &[0, 1]]]);
        assert_eq!(
            orthogonality_defect(&k, &tri, DefectHint::Triangular).unwrap(),
            1
        );
        assert_eq!(
            orthogonality_defect(&k, &tri, DefectHint::ViaReduction).unwrap(),
            1
        );
        assert_eq!(
            orthogonality_defect(&k, &wpf, DefectHint::Triangular),
            Err(Error::NotTriangular)
        );
    }

    #[test]
    fn wpf_fixpoint() {
        let k = FieldContext::new(2, 1, 2, None).unwrap();
        let wpf = mat(&[
            &[&[0, 1, 1], &[1, 0, 1]],
            &[&[0, 0, 0, 0, 1], &[1, 1, 1, 1]],
        ]);
        for t in 1..5 {
            assert!(reduce_iterated(&k, &wpf, t).unwrap().is_identity());
            assert!(reduce_dc(&k, &wpf, t, &ReduceOptions::default())
                .unwrap()
                .is_identity());
        }
        let out = reduce_to_wpf(&k, &wpf, None, &ReduceOptions::default()).unwrap();
        assert!(out.transform.is_identity());
        assert_eq!(out.reduced, wpf);
    }

    #[test]
    fn row_reduced_but_not_weak_popov() {
        // deg = deg det, yet both rows lead in the last column.
        let k = FieldContext::new(2, 1, 1, None).unwrap();
        let m = mat(&[&[&[0, 1], &[0, 1]], &[&[], &[0, 1]]]);
        assert!(!m.is_weak_popov());
        assert_eq!(orthogonality_defect(&k, &m, DefectHint::Auto).unwrap(), 0);
        let out = reduce_to_wpf(&k, &m, None, &ReduceOptions::default()).unwrap();
        assert!(out.reduced.is_weak_popov());
        assert_eq!(out.reduced.degree(), m.degree());
    }

    #[test]
    fn t_one_matches_basecase_on_truncation() {
        let k = FieldContext::new(2, 1, 3, None).unwrap();
        let m = mat(&[
            &[&[1, 2, 3], &[4, 0, 5], &[1]],
            &[&[0, 6], &[1, 1, 7], &[2, 2]],
            &[&[3, 3, 3], &[5], &[0, 0, 1]],
        ]);
        let dc = reduce_dc(&k, &m, 1, &ReduceOptions::default()).unwrap();
        let base = crate::matrix::reduce_basecase(&k, &m.truncate(1)).unwrap();
        assert_eq!(dc, base);
        assert_eq!(dc, reduce_iterated(&k, &m, 1).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let k = FieldContext::new(2, 1, 1, None).unwrap();
        let zero_row = mat(&[&[&[1], &[]], &[&[], &[]]]);
        assert_eq!(
            reduce_dc(&k, &zero_row, 3, &ReduceOptions::default()),
            Err(Error::ZeroRow(1))
        );
        assert_eq!(reduce_iterated(&k, &zero_row, 3), Err(Error::ZeroRow(1)));
        let rect = mat(&[&[&[1], &[1]]]);
        assert_eq!(
            reduce_dc(&k, &rect, 1, &ReduceOptions::default()),
            Err(Error::NotSquare)
        );
    }
}
