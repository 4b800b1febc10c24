//! Vectors and matrices over `F[x; σ]`, the weak Popov predicate, simple
//! transformations and the base-case reducer.
//!
//! Positions are 0-based throughout: the leading position of `(x², x²+1)` is
//! `1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::poly::{short_product, MulStrategy, SkewPoly};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SkewVector(Vec<SkewPoly>);

/// Summary of a nonzero vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorStats {
    pub degree: usize,
    pub leading_position: usize,
    pub leading_term: SkewPoly,
    pub len: usize,
}

impl SkewVector {
    pub fn new(entries: Vec<SkewPoly>) -> Self {
        SkewVector(entries)
    }

    pub fn zero(width: usize) -> Self {
        SkewVector(vec![SkewPoly::zero(); width])
    }

    pub fn unit(width: usize, i: usize) -> Self {
        let mut v = Self::zero(width);
        v.0[i] = SkewPoly::one();
        v
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[SkewPoly] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<SkewPoly> {
        self.0
    }

    pub fn get(&self, i: usize) -> &SkewPoly {
        &self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(SkewPoly::is_zero)
    }

    /// Maximum entry degree; `None` for the zero vector.
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().filter_map(SkewPoly::degree).max()
    }

    /// Rightmost position attaining the degree.
    pub fn leading_position(&self) -> Result<usize> {
        let d = self.degree().ok_or(Error::ZeroVector)?;
        Ok(self
            .0
            .iter()
            .rposition(|e| e.degree() == Some(d))
            .expect("degree is attained"))
    }

    pub fn leading_term(&self) -> Result<&SkewPoly> {
        Ok(&self.0[self.leading_position()?])
    }

    /// `max_i (deg v − deg v_i + len v_i)` over the nonzero entries.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        let Some(d) = self.degree() else { return 0 };
        self.0
            .iter()
            .filter_map(|e| e.degree().map(|di| d - di + e.len()))
            .max()
            .unwrap_or(0)
    }

    pub fn stats(&self) -> Result<VectorStats> {
        let leading_position = self.leading_position()?;
        Ok(VectorStats {
            degree: self.degree().expect("nonzero"),
            leading_position,
            leading_term: self.0[leading_position].clone(),
            len: self.len(),
        })
    }

    /// Entry `i` is truncated to depth `t − (deg v − deg v_i)`, or zeroed
    /// when that is not positive.
    pub fn truncate(&self, t: usize) -> SkewVector {
        let Some(d) = self.degree() else {
            return self.clone();
        };
        SkewVector(
            self.0
                .iter()
                .map(|e| match e.degree() {
                    Some(di) => e.truncate(t.saturating_sub(d - di)),
                    None => SkewPoly::zero(),
                })
                .collect(),
        )
    }
}

/// A rectangular matrix over `F[x; σ]`, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<SkewVector>", into = "Vec<SkewVector>")]
pub struct SkewMatrix {
    rows: Vec<SkewVector>,
    cols: usize,
}

impl TryFrom<Vec<SkewVector>> for SkewMatrix {
    type Error = Error;

    fn try_from(rows: Vec<SkewVector>) -> Result<Self> {
        SkewMatrix::from_rows(rows)
    }
}

impl From<SkewMatrix> for Vec<SkewVector> {
    fn from(m: SkewMatrix) -> Self {
        m.rows
    }
}

impl SkewMatrix {
    pub fn from_rows(rows: Vec<SkewVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, SkewVector::width);
        if rows.iter().any(|r| r.width() != cols) {
            return Err(Error::DimensionMismatch("rows of unequal width".into()));
        }
        Ok(SkewMatrix { rows, cols })
    }

    pub fn new(entries: Vec<Vec<SkewPoly>>) -> Result<Self> {
        Self::from_rows(entries.into_iter().map(SkewVector).collect())
    }

    pub fn identity(r: usize) -> Self {
        SkewMatrix {
            rows: (0..r).map(|i| SkewVector::unit(r, i)).collect(),
            cols: r,
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        SkewMatrix {
            rows: vec![SkewVector::zero(cols); rows],
            cols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.cols
    }

    pub fn rows(&self) -> &[SkewVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SkewVector {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> &SkewPoly {
        &self.rows[i].0[j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, value: SkewPoly) {
        self.rows[i].0[j] = value;
    }

    pub fn row_degrees(&self) -> Vec<Option<usize>> {
        self.rows.iter().map(SkewVector::degree).collect()
    }

    /// Sum of the row degrees; `None` (`-∞`) if some row is zero.
    pub fn degree(&self) -> Option<usize> {
        self.rows.iter().map(SkewVector::degree).sum()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(SkewVector::len).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Largest length of any single entry.
    pub fn max_entry_len(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| r.0.iter().map(SkewPoly::len))
            .max()
            .unwrap_or(0)
    }

    pub fn truncate(&self, t: usize) -> SkewMatrix {
        SkewMatrix {
            rows: self.rows.iter().map(|r| r.truncate(t)).collect(),
            cols: self.cols,
        }
    }

    pub fn first_zero_row(&self) -> Option<usize> {
        self.rows.iter().position(SkewVector::is_zero)
    }

    /// Leading positions of all rows; errors on a zero row.
    pub fn leading_positions(&self) -> Result<Vec<usize>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.leading_position().map_err(|_| Error::ZeroRow(i)))
            .collect()
    }

    /// All rows nonzero with pairwise distinct leading positions.
    pub fn is_weak_popov(&self) -> bool {
        let Ok(lps) = self.leading_positions() else {
            return false;
        };
        let mut seen = vec![false; self.cols];
        lps.into_iter()
            .all(|lp| !std::mem::replace(&mut seen[lp], true))
    }

    /// Picks the next simple transformation `(i, j)`: the smallest shared
    /// leading position; `j` is the row of least degree there (lowest index
    /// on ties) and `i` the remaining row of greatest degree (highest index on
    /// ties). `None` iff the matrix is in weak Popov form.
    pub fn find_conflict(&self) -> Result<Option<(usize, usize)>> {
        let lps = self.leading_positions()?;
        let degs: Vec<usize> = self
            .rows
            .iter()
            .map(|r| r.degree().expect("nonzero row"))
            .collect();
        let mut count = vec![0usize; self.cols];
        for &lp in &lps {
            count[lp] += 1;
        }
        let Some(shared) = (0..self.cols).find(|&c| count[c] > 1) else {
            return Ok(None);
        };
        let members: Vec<usize> = (0..lps.len()).filter(|&r| lps[r] == shared).collect();
        let j = *members
            .iter()
            .min_by_key(|&&r| (degs[r], r))
            .expect("at least two members");
        let i = *members
            .iter()
            .filter(|&&r| r != j)
            .max_by_key(|&&r| (degs[r], r))
            .expect("at least two members");
        Ok(Some((i, j)))
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.0[..i.min(self.cols)].iter().all(SkewPoly::is_zero))
    }

    /// Naive `r³` product, each entry product length-aware.
    pub fn mul(
        &self,
        ctx: &FieldContext,
        rhs: &SkewMatrix,
        strategy: MulStrategy,
    ) -> Result<SkewMatrix> {
        if self.cols != rhs.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.cols,
                rhs.nrows(),
                rhs.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let entries = (0..rhs.cols)
                    .map(|k| {
                        row.0
                            .iter()
                            .zip(&rhs.rows)
                            .filter(|(a, b)| !a.is_zero() && !b.0[k].is_zero())
                            .fold(SkewPoly::zero(), |acc, (a, b)| {
                                let prod = short_product(ctx, a, &b.0[k], strategy)
                                    .expect("operands are nonzero");
                                acc.add(ctx, &prod)
                            })
                    })
                    .collect();
                SkewVector(entries)
            })
            .collect();
        Ok(SkewMatrix {
            rows,
            cols: rhs.cols,
        })
    }

    /// Matrix-vector product `M·v` with `v` as a column.
    pub fn mul_vector(
        &self,
        ctx: &FieldContext,
        v: &SkewVector,
        strategy: MulStrategy,
    ) -> Result<SkewVector> {
        let col = SkewMatrix::from_rows(v.0.iter().map(|e| SkewVector(vec![e.clone()])).collect())?;
        let prod = self.mul(ctx, &col, strategy)?;
        Ok(SkewVector(
            prod.rows
                .into_iter()
                .map(|r| r.0.into_iter().next().unwrap())
                .collect(),
        ))
    }

    /// `row_i ← row_i − α·x^δ·row_j`; returns the coefficient multiplications
    /// spent.
    fn row_sub_scaled(
        &mut self,
        ctx: &FieldContext,
        i: usize,
        j: usize,
        alpha: FieldElement,
        delta: usize,
    ) -> usize {
        let mut ops = 0;
        for k in 0..self.cols {
            let src = &self.rows[j].0[k];
            if src.is_zero() {
                continue;
            }
            let (v, n) = self.rows[i].0[k].sub_scaled(ctx, alpha, delta, src);
            self.rows[i].0[k] = v;
            ops += n;
        }
        ops
    }
}

/// One elementary factor `I − α·x^δ·E_{i,j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub i: usize,
    pub j: usize,
    pub alpha: FieldElement,
    pub delta: usize,
}

/// An accumulated unimodular transform `U` together with the ordered list of
/// elementary factors whose product (first factor applied first) it is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub matrix: SkewMatrix,
    pub factors: Vec<Factor>,
}

impl TransformRecord {
    pub fn identity(r: usize) -> Self {
        TransformRecord {
            matrix: SkewMatrix::identity(r),
            factors: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty() && self.matrix == SkewMatrix::identity(self.matrix.nrows())
    }

    /// `later · self`.
    pub fn then(
        self,
        ctx: &FieldContext,
        later: TransformRecord,
        strategy: MulStrategy,
    ) -> Result<Self> {
        if later.factors.is_empty() {
            return Ok(self);
        }
        if self.factors.is_empty() {
            return Ok(later);
        }
        let matrix = later.matrix.mul(ctx, &self.matrix, strategy)?;
        let mut factors = self.factors;
        factors.extend(later.factors);
        Ok(TransformRecord { matrix, factors })
    }

    /// Rebuilds `U` by applying the factors to the identity.
    pub fn from_factors(ctx: &FieldContext, r: usize, factors: &[Factor]) -> Self {
        let mut m = SkewMatrix::identity(r);
        for f in factors {
            m.row_sub_scaled(ctx, f.i, f.j, f.alpha, f.delta);
        }
        TransformRecord {
            matrix: m,
            factors: factors.to_vec(),
        }
    }

    /// Applies the factors, in order, to `m`.
    pub fn apply(&self, ctx: &FieldContext, m: &SkewMatrix) -> SkewMatrix {
        let mut out = m.clone();
        for f in &self.factors {
            out.row_sub_scaled(ctx, f.i, f.j, f.alpha, f.delta);
        }
        out
    }

    /// Applies `U^{-1}`: the inverses `I + α·x^δ·E_{i,j}` in reverse order.
    pub fn apply_inverse(&self, ctx: &FieldContext, m: &SkewMatrix) -> SkewMatrix {
        let mut out = m.clone();
        for f in self.factors.iter().rev() {
            out.row_sub_scaled(ctx, f.i, f.j, ctx.neg(f.alpha), f.delta);
        }
        out
    }
}

/// Work counters shared by all reducers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStats {
    pub st_count: usize,
    pub base_case_count: usize,
    /// Coefficient multiplications spent inside simple transformations,
    /// counting both the matrix and the transform rows.
    pub st_coeff_ops: usize,
    pub max_st_coeff_ops: usize,
}

/// Applies the simple transformation on rows `(i, j)` of `m`, mirroring it on
/// `u` when given.
pub fn simple_transform(
    ctx: &FieldContext,
    m: &mut SkewMatrix,
    u: Option<&mut SkewMatrix>,
    i: usize,
    j: usize,
) -> Result<Factor> {
    simple_transform_counted(ctx, m, u, i, j, &mut ReductionStats::default())
}

fn simple_transform_counted(
    ctx: &FieldContext,
    m: &mut SkewMatrix,
    u: Option<&mut SkewMatrix>,
    i: usize,
    j: usize,
    stats: &mut ReductionStats,
) -> Result<Factor> {
    if i == j || i >= m.nrows() || j >= m.nrows() {
        return Err(Error::InvalidTransform(format!("rows ({i}, {j})")));
    }
    let si = m.rows[i].stats().map_err(|_| Error::ZeroRow(i))?;
    let sj = m.rows[j].stats().map_err(|_| Error::ZeroRow(j))?;
    if si.leading_position != sj.leading_position || si.degree < sj.degree {
        return Err(Error::InvalidTransform(format!(
            "rows {i} and {j} have leading positions {} and {}, degrees {} and {}",
            si.leading_position, sj.leading_position, si.degree, sj.degree
        )));
    }
    let delta = si.degree - sj.degree;
    let lc_i = si.leading_term.leading_coeff().expect("nonzero");
    let lc_j = sj.leading_term.leading_coeff().expect("nonzero");
    let alpha = ctx.div(lc_i, ctx.frobenius(lc_j, delta))?;
    let mut ops = m.row_sub_scaled(ctx, i, j, alpha, delta);
    if let Some(u) = u {
        ops += u.row_sub_scaled(ctx, i, j, alpha, delta);
    }
    stats.st_count += 1;
    stats.st_coeff_ops += ops;
    stats.max_st_coeff_ops = stats.max_st_coeff_ops.max(ops);
    Ok(Factor { i, j, alpha, delta })
}

fn check_full_rank_input(m: &SkewMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    match m.first_zero_row() {
        Some(i) => Err(Error::ZeroRow(i)),
        None => Ok(()),
    }
}

/// Base-case reduction `R(M)` on a working matrix, which is left holding
/// `U·M`. Stops once the degree of the matrix changes or it is in weak Popov
/// form.
pub(crate) fn basecase_in_place(
    ctx: &FieldContext,
    work: &mut SkewMatrix,
    stats: &mut ReductionStats,
) -> Result<TransformRecord> {
    check_full_rank_input(work)?;
    stats.base_case_count += 1;
    let start = work.degree();
    let mut u = SkewMatrix::identity(work.nrows());
    let mut factors = Vec::new();
    while work.degree() == start {
        let Some((i, j)) = work.find_conflict()? else {
            break;
        };
        factors.push(simple_transform_counted(
            ctx,
            work,
            Some(&mut u),
            i,
            j,
            stats,
        )?);
    }
    Ok(TransformRecord { matrix: u, factors })
}

/// `R(M)`: a transform `U` with `U·M` in weak Popov form or
/// `deg(U·M) ≤ deg M − 1`.
pub fn reduce_basecase(ctx: &FieldContext, m: &SkewMatrix) -> Result<TransformRecord> {
    reduce_basecase_with_stats(ctx, m, &mut ReductionStats::default())
}

pub fn reduce_basecase_with_stats(
    ctx: &FieldContext,
    m: &SkewMatrix,
    stats: &mut ReductionStats,
) -> Result<TransformRecord> {
    let mut work = m.clone();
    basecase_in_place(ctx, &mut work, stats)
}

/// Simple transformations until weak Popov form (Mulders–Storjohann style).
/// Returns the transform and the reduced matrix.
pub fn naive_row_reduce(
    ctx: &FieldContext,
    m: &SkewMatrix,
) -> Result<(TransformRecord, SkewMatrix)> {
    naive_row_reduce_with_stats(ctx, m, &mut ReductionStats::default())
}

pub fn naive_row_reduce_with_stats(
    ctx: &FieldContext,
    m: &SkewMatrix,
    stats: &mut ReductionStats,
) -> Result<(TransformRecord, SkewMatrix)> {
    check_full_rank_input(m)?;
    let mut work = m.clone();
    let mut u = SkewMatrix::identity(m.nrows());
    let mut factors = Vec::new();
    while let Some((i, j)) = work.find_conflict()? {
        factors.push(simple_transform_counted(
            ctx,
            &mut work,
            Some(&mut u),
            i,
            j,
            stats,
        )?);
    }
    Ok((TransformRecord { matrix: u, factors }, work))
}
