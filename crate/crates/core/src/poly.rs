//! Skew polynomials in `F[x; σ]`, where `x·a = σ(a)·x`.
//!
//! A [`SkewPoly`] stores only the span between its lowest and highest nonzero
//! coefficient together with the power of `x` at which that span starts. Its
//! length (in the ring-theoretic sense) is therefore the size of the stored
//! buffer, and a product of two polynomials of length `≤ s` costs `O(M(s))`
//! regardless of their degrees.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{base_rank, linear_solve, FieldContext, FieldElement};

/// Operand length below which Karatsuba falls back to the schoolbook product.
pub const KARATSUBA_CUTOFF: usize = 32;

/// Dense multiplication kernel used for the length-aware product.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MulStrategy {
    #[default]
    Naive,
    /// Karatsuba with split points at multiples of the order of σ, where
    /// `x^s` is central.
    Karatsuba,
}

impl FromStr for MulStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(MulStrategy::Naive),
            "karatsuba" => Ok(MulStrategy::Karatsuba),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

impl std::fmt::Display for MulStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MulStrategy::Naive => "naive",
            MulStrategy::Karatsuba => "karatsuba",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `a = q·b + r`
    Right,
    /// `a = b·q + r`
    Left,
}

/// A skew polynomial `Σ a_i x^i`.
///
/// Invariant: `coeffs` is empty (the zero polynomial, `low == 0`) or both its
/// first and last entries are nonzero; `coeffs[k]` is the coefficient of
/// `x^(low + k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<FieldElement>", into = "Vec<FieldElement>")]
pub struct SkewPoly {
    low: usize,
    coeffs: Vec<FieldElement>,
}

impl From<Vec<FieldElement>> for SkewPoly {
    fn from(v: Vec<FieldElement>) -> Self {
        SkewPoly::from_coeffs(v)
    }
}

impl From<SkewPoly> for Vec<FieldElement> {
    fn from(p: SkewPoly) -> Self {
        p.to_coeffs()
    }
}

impl SkewPoly {
    fn normalized(mut low: usize, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return SkewPoly::zero();
        }
        if lead_zeros > 0 {
            coeffs.drain(..lead_zeros);
            low += lead_zeros;
        }
        SkewPoly { low, coeffs }
    }

    pub fn zero() -> Self {
        SkewPoly {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(FieldElement::ONE)
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::monomial(c, 0)
    }

    /// `c·x^d`.
    pub fn monomial(c: FieldElement, d: usize) -> Self {
        Self::normalized(d, vec![c])
    }

    pub fn x_power(d: usize) -> Self {
        Self::monomial(FieldElement::ONE, d)
    }

    /// From a little-endian coefficient list (index `i` is the coefficient of
    /// `x^i`).
    pub fn from_coeffs(coeffs: Vec<FieldElement>) -> Self {
        Self::normalized(0, coeffs)
    }

    /// Little-endian coefficient list without trailing zeros.
    pub fn to_coeffs(&self) -> Vec<FieldElement> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut out = vec![FieldElement::ZERO; self.low];
        out.extend_from_slice(&self.coeffs);
        out
    }

    pub fn from_values(values: &[u32]) -> Self {
        Self::from_coeffs(values.iter().map(|&v| FieldElement::from_raw(v)).collect())
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` standing for `-∞` (the zero polynomial). `None`
    /// orders below every `Some`.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.low + self.coeffs.len() - 1)
        }
    }

    /// Number of positions from the lowest to the highest nonzero
    /// coefficient; zero for the zero polynomial.
    #[allow(clippy::len_without_is_empty)]
    #[inline]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Exponent of the lowest nonzero term, `deg a − len a + 1`.
    #[inline]
    pub fn valuation(&self) -> Option<usize> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        if i < self.low {
            return FieldElement::ZERO;
        }
        self.coeffs
            .get(i - self.low)
            .copied()
            .unwrap_or(FieldElement::ZERO)
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == Some(FieldElement::ONE)
    }

    /// The stored span `ã`, with `a = ã·x^valuation`.
    pub fn span(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn add(&self, ctx: &FieldContext, other: &SkewPoly) -> SkewPoly {
        self.combine(other, |a, b| ctx.add(a, b))
    }

    pub fn sub(&self, ctx: &FieldContext, other: &SkewPoly) -> SkewPoly {
        self.combine(other, |a, b| ctx.sub(a, b))
    }

    pub fn neg(&self, ctx: &FieldContext) -> SkewPoly {
        SkewPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| ctx.neg(c)).collect(),
        }
    }

    fn combine(
        &self,
        other: &SkewPoly,
        op: impl Fn(FieldElement, FieldElement) -> FieldElement,
    ) -> SkewPoly {
        match (self.degree(), other.degree()) {
            (None, None) => SkewPoly::zero(),
            (None, Some(_)) => SkewPoly::zero().combine_nonzero(other, op),
            (Some(_), None) => self.clone(),
            (Some(_), Some(_)) => self.combine_nonzero(other, op),
        }
    }

    fn combine_nonzero(
        &self,
        other: &SkewPoly,
        op: impl Fn(FieldElement, FieldElement) -> FieldElement,
    ) -> SkewPoly {
        let low = if self.is_zero() {
            other.low
        } else {
            self.low.min(other.low)
        };
        let high = self.degree().max(other.degree()).unwrap_or(0);
        let coeffs = (low..=high)
            .map(|i| op(self.coeff(i), other.coeff(i)))
            .collect();
        SkewPoly::normalized(low, coeffs)
    }

    /// `c·x^d·self`.
    pub fn left_monomial_mul(&self, ctx: &FieldContext, c: FieldElement, d: usize) -> SkewPoly {
        if c.is_zero() || self.is_zero() {
            return SkewPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| ctx.mul(c, ctx.frobenius(a, d)))
            .collect();
        SkewPoly::normalized(self.low + d, coeffs)
    }

    /// `self·x^d`, a plain shift.
    pub fn shift_right_x(&self, d: usize) -> SkewPoly {
        if self.is_zero() {
            return SkewPoly::zero();
        }
        SkewPoly {
            low: self.low + d,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `self − α·x^δ·other`. Also returns the number of coefficient
    /// multiplications performed.
    pub fn sub_scaled(
        &self,
        ctx: &FieldContext,
        alpha: FieldElement,
        delta: usize,
        other: &SkewPoly,
    ) -> (SkewPoly, usize) {
        let term = other.left_monomial_mul(ctx, alpha, delta);
        (self.sub(ctx, &term), other.len())
    }

    /// Applies `σ^k` to every coefficient.
    pub fn map_frobenius(&self, ctx: &FieldContext, k: usize) -> SkewPoly {
        SkewPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|&a| ctx.frobenius(a, k)).collect(),
        }
    }

    /// Textbook product `Σ_{i,j} a_i σ^i(b_j) x^(i+j)` over the full
    /// coefficient ranges. Kept as a reference for the other products.
    pub fn mul_naive(&self, ctx: &FieldContext, other: &SkewPoly) -> SkewPoly {
        let a = self.to_coeffs();
        let b = other.to_coeffs();
        if a.is_empty() || b.is_empty() {
            return SkewPoly::zero();
        }
        let mut c = vec![FieldElement::ZERO; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                let t = ctx.mul(ai, ctx.frobenius(bj, i));
                c[i + j] = ctx.add(c[i + j], t);
            }
        }
        SkewPoly::from_coeffs(c)
    }

    /// Product under the given strategy; equal to [`SkewPoly::mul_naive`].
    pub fn mul(&self, ctx: &FieldContext, other: &SkewPoly, strategy: MulStrategy) -> SkewPoly {
        if self.is_zero() || other.is_zero() {
            return SkewPoly::zero();
        }
        short_product_nonzero(ctx, self, other, strategy)
    }

    /// Accuracy approximation `a|_t`: the `t` highest-power coefficient
    /// positions, everything below them zeroed.
    pub fn truncate(&self, t: usize) -> SkewPoly {
        if t == 0 {
            return SkewPoly::zero();
        }
        let len = self.len();
        if t >= len {
            return self.clone();
        }
        SkewPoly::normalized(self.low + len - t, self.coeffs[len - t..].to_vec())
    }

    /// Euclidean division on the given side; `deg r < deg b`.
    pub fn divide(
        &self,
        ctx: &FieldContext,
        divisor: &SkewPoly,
        side: Side,
    ) -> Result<(SkewPoly, SkewPoly)> {
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_b = divisor.leading_coeff().expect("nonzero divisor");
        let b = divisor.to_coeffs();
        let mut r = self.to_coeffs();
        if r.len() <= db {
            return Ok((SkewPoly::zero(), self.clone()));
        }
        let mut q = vec![FieldElement::ZERO; r.len() - db];
        for top in (db..r.len()).rev() {
            let lead_r = r[top];
            if lead_r.is_zero() {
                continue;
            }
            let d = top - db;
            match side {
                Side::Right => {
                    // c·x^d·b has leading coefficient c·σ^d(lc b)
                    let c = ctx.div(lead_r, ctx.frobenius(lead_b, d))?;
                    q[d] = c;
                    for (i, &bi) in b.iter().enumerate() {
                        let t = ctx.mul(c, ctx.frobenius(bi, d));
                        r[i + d] = ctx.sub(r[i + d], t);
                    }
                }
                Side::Left => {
                    // b·c·x^d has leading coefficient lc b·σ^db(c)
                    let c = ctx.inverse_frobenius(ctx.div(lead_r, lead_b)?, db);
                    q[d] = c;
                    for (i, &bi) in b.iter().enumerate() {
                        let t = ctx.mul(bi, ctx.frobenius(c, i));
                        r[i + d] = ctx.sub(r[i + d], t);
                    }
                }
            }
        }
        r.truncate(db);
        Ok((SkewPoly::from_coeffs(q), SkewPoly::from_coeffs(r)))
    }

    /// Operator evaluation `Σ f_i σ^i(α)`.
    pub fn eval(&self, ctx: &FieldContext, alpha: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .enumerate()
            .fold(FieldElement::ZERO, |acc, (k, &f)| {
                ctx.add(acc, ctx.mul(f, ctx.frobenius(alpha, self.low + k)))
            })
    }
}

/// Length-aware product: with `a = ã·x^sa` and `b = b̃·x^sb`,
/// `a·b = [ã·σ^sa(b̃)]·x^(sa+sb)`.
pub fn short_product(
    ctx: &FieldContext,
    a: &SkewPoly,
    b: &SkewPoly,
    strategy: MulStrategy,
) -> Result<SkewPoly> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(short_product_nonzero(ctx, a, b, strategy))
}

fn short_product_nonzero(
    ctx: &FieldContext,
    a: &SkewPoly,
    b: &SkewPoly,
    strategy: MulStrategy,
) -> SkewPoly {
    let twisted: Vec<FieldElement> = b.coeffs.iter().map(|&c| ctx.frobenius(c, a.low)).collect();
    let coeffs = match strategy {
        MulStrategy::Naive => dense_schoolbook(ctx, &a.coeffs, &twisted),
        MulStrategy::Karatsuba => dense_karatsuba(ctx, &a.coeffs, &twisted),
    };
    SkewPoly::normalized(a.low + b.low, coeffs)
}

/// `Σ a_i σ^i(b_j) x^(i+j)` for dense operands starting at `x^0`.
fn dense_schoolbook(
    ctx: &FieldContext,
    a: &[FieldElement],
    b: &[FieldElement],
) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let order = ctx.m() as usize;
    // σ has order m, so only min(m, len a) twists of b are distinct.
    let twists: Vec<Vec<FieldElement>> = (0..order.min(a.len()))
        .map(|k| b.iter().map(|&c| ctx.frobenius(c, k)).collect())
        .collect();
    let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        let tw = &twists[i % order];
        for (j, &bj) in tw.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj));
        }
    }
    out
}

fn dense_karatsuba(
    ctx: &FieldContext,
    a: &[FieldElement],
    b: &[FieldElement],
) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let order = ctx.m() as usize;
    let n = a.len().max(b.len());
    let split = n.div_ceil(2).div_ceil(order) * order;
    if a.len().min(b.len()) < KARATSUBA_CUTOFF || split >= a.len().min(b.len()) {
        return dense_schoolbook(ctx, a, b);
    }
    // x^split is central because σ^split = id.
    let (a_lo, a_hi) = a.split_at(split);
    let (b_lo, b_hi) = b.split_at(split);
    let lo = dense_karatsuba(ctx, a_lo, b_lo);
    let hi = dense_karatsuba(ctx, a_hi, b_hi);
    let a_sum = dense_add(ctx, a_lo, a_hi);
    let b_sum = dense_add(ctx, b_lo, b_hi);
    let mut mid = dense_karatsuba(ctx, &a_sum, &b_sum);
    for (k, &v) in lo.iter().enumerate() {
        mid[k] = ctx.sub(mid[k], v);
    }
    for (k, &v) in hi.iter().enumerate() {
        mid[k] = ctx.sub(mid[k], v);
    }
    let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
    for (k, &v) in lo.iter().enumerate() {
        out[k] = ctx.add(out[k], v);
    }
    // Entries of `mid` past the output length are zero.
    for (o, &v) in out[split..].iter_mut().zip(&mid) {
        *o = ctx.add(*o, v);
    }
    for (k, &v) in hi.iter().enumerate() {
        out[k + 2 * split] = ctx.add(out[k + 2 * split], v);
    }
    out
}

fn dense_add(ctx: &FieldContext, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    (0..a.len().max(b.len()))
        .map(|i| {
            ctx.add(
                a.get(i).copied().unwrap_or_default(),
                b.get(i).copied().unwrap_or_default(),
            )
        })
        .collect()
}

/// Monic polynomial of degree `rank_q(U)` vanishing on the `F_q`-span of
/// `points` under operator evaluation.
pub fn annihilator(ctx: &FieldContext, points: &[FieldElement]) -> SkewPoly {
    let mut poly = SkewPoly::one();
    for &v in points {
        let beta = poly.eval(ctx, v);
        if beta.is_zero() {
            continue;
        }
        let c = ctx.pow(beta, ctx.base_order() - 1);
        let factor = SkewPoly::from_coeffs(vec![ctx.neg(c), FieldElement::ONE]);
        poly = factor.mul(ctx, &poly, MulStrategy::Naive);
    }
    poly
}

/// The unique `R` with `deg R < n` and `R(α_j) = y_j` for `n` points whose
/// `α_j` are linearly independent over `F_q`.
pub fn interpolate(
    ctx: &FieldContext,
    points: &[(FieldElement, FieldElement)],
) -> Result<SkewPoly> {
    let n = points.len();
    let alphas: Vec<FieldElement> = points.iter().map(|&(a, _)| a).collect();
    if base_rank(ctx, &alphas) < n {
        return Err(Error::DependentPoints);
    }
    let moore: Vec<Vec<FieldElement>> = alphas
        .iter()
        .map(|&a| (0..n).map(|i| ctx.frobenius(a, i)).collect())
        .collect();
    let ys: Vec<FieldElement> = points.iter().map(|&(_, y)| y).collect();
    let sol = linear_solve(ctx, &moore, &ys)?.ok_or(Error::DependentPoints)?;
    Ok(SkewPoly::from_coeffs(sol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f4() -> FieldContext {
        FieldContext::new(2, 1, 2, None).unwrap()
    }

    const W: FieldElement = FieldElement::from_raw(2);
    const W1: FieldElement = FieldElement::from_raw(3);
    const ONE: FieldElement = FieldElement::ONE;
    const ZERO: FieldElement = FieldElement::ZERO;

    fn p(v: &[u32]) -> SkewPoly {
        SkewPoly::from_values(v)
    }

    fn random_poly(ctx: &FieldContext, rng: &mut ChaCha8Rng, max_len: usize) -> SkewPoly {
        use rand::Rng;
        let len = rng.gen_range(0..=max_len);
        SkewPoly::from_coeffs((0..len).map(|_| ctx.random(rng)).collect())
    }

    #[test]
    fn normalization_and_degree() {
        let a = p(&[0, 0, 3, 0, 1, 0, 0]);
        assert_eq!(a.degree(), Some(4));
        assert_eq!(a.len(), 3);
        assert_eq!(a.valuation(), Some(2));
        assert_eq!(a.to_coeffs(), p(&[0, 0, 3, 0, 1]).to_coeffs());
        assert_eq!(p(&[0, 0]), SkewPoly::zero());
        assert_eq!(SkewPoly::zero().degree(), None);
        assert!(SkewPoly::zero().degree() < Some(0));
        assert_eq!(SkewPoly::zero().len(), 0);
    }

    #[test]
    fn addition_examples() {
        let k = f4();
        let a = p(&[0, 1, 1]);
        assert!(a.add(&k, &a).is_zero());
        assert_eq!(a.add(&k, &p(&[1, 0, 1])), p(&[1, 1]));
        assert_eq!(SkewPoly::zero().add(&k, &a), a);
    }

    #[test]
    fn commutation_rule_examples() {
        let k = f4();
        let x = SkewPoly::x_power(1);
        let w = SkewPoly::constant(W);
        for s in [MulStrategy::Naive, MulStrategy::Karatsuba] {
            // x·ω = ω²x = (ω+1)x
            assert_eq!(x.mul(&k, &w, s), SkewPoly::monomial(W1, 1));
            // (x+1)·(ωx) = (ω+1)x² + ωx
            let lhs = p(&[1, 1]).mul(&k, &SkewPoly::monomial(W, 1), s);
            assert_eq!(lhs, SkewPoly::from_coeffs(vec![ZERO, W, W1]));
            // ω·x ≠ x·ω
            assert_ne!(w.mul(&k, &x, s), x.mul(&k, &w, s));
            assert_eq!(w.mul(&k, &w, s), SkewPoly::constant(W1));
        }
        assert_eq!(x.mul_naive(&k, &w), SkewPoly::monomial(W1, 1));
    }

    #[test]
    fn short_product_examples() {
        let k = f4();
        let a = SkewPoly::x_power(100);
        let b = SkewPoly::x_power(50);
        let c = short_product(&k, &a, &b, MulStrategy::Naive).unwrap();
        assert_eq!(c, SkewPoly::x_power(150));
        let a = SkewPoly::monomial(W, 10);
        let b = SkewPoly::x_power(1);
        assert_eq!(
            short_product(&k, &a, &b, MulStrategy::Naive).unwrap(),
            a.mul_naive(&k, &b)
        );
        let b = SkewPoly::monomial(W, 3);
        assert_eq!(
            short_product(&k, &a, &b, MulStrategy::Naive).unwrap(),
            a.mul_naive(&k, &b)
        );
        assert_eq!(
            short_product(&k, &SkewPoly::zero(), &b, MulStrategy::Naive),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn short_product_high_degree_matches_naive() {
        let k = FieldContext::new(2, 1, 8, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = random_poly(&k, &mut rng, 4).shift_right_x(996);
            let b = random_poly(&k, &mut rng, 4).shift_right_x(997);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let fast = short_product(&k, &a, &b, MulStrategy::Naive).unwrap();
            assert_eq!(fast, a.mul_naive(&k, &b));
        }
    }

    #[test]
    fn karatsuba_matches_naive_large() {
        let k = FieldContext::new(2, 1, 8, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for len in [64usize, 65, 200, 513] {
            let a = SkewPoly::from_coeffs((0..len).map(|_| k.random(&mut rng)).collect());
            let b = SkewPoly::from_coeffs((0..len).map(|_| k.random(&mut rng)).collect());
            let kara = a.mul(&k, &b, MulStrategy::Karatsuba);
            assert_eq!(kara, a.mul(&k, &b, MulStrategy::Naive));
            if len <= 200 {
                assert_eq!(kara, a.mul_naive(&k, &b));
            }
        }
        let k3 = FieldContext::new(3, 1, 5, None).unwrap();
        let a = SkewPoly::from_coeffs((0..90).map(|_| k3.random(&mut rng)).collect());
        let b = SkewPoly::from_coeffs((0..77).map(|_| k3.random(&mut rng)).collect());
        assert_eq!(a.mul(&k3, &b, MulStrategy::Karatsuba), a.mul_naive(&k3, &b));
    }

    #[test]
    #[ignore = "slow in debug builds; run with --release --ignored"]
    fn karatsuba_matches_naive_degree_4096() {
        let k = FieldContext::new(2, 1, 16, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = SkewPoly::from_coeffs((0..4096).map(|_| k.random(&mut rng)).collect());
        let b = SkewPoly::from_coeffs((0..4096).map(|_| k.random(&mut rng)).collect());
        assert_eq!(a.mul(&k, &b, MulStrategy::Karatsuba), a.mul_naive(&k, &b));
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!(
            "karatsuba".parse::<MulStrategy>().unwrap(),
            MulStrategy::Karatsuba
        );
        assert_eq!(
            "fft".parse::<MulStrategy>(),
            Err(Error::UnknownStrategy("fft".into()))
        );
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(p(&[1, 1, 1, 1]).truncate(2), p(&[0, 0, 1, 1]));
        assert_eq!(p(&[1, 0, 1]).truncate(1), p(&[0, 0, 1]));
        let a = p(&[0, 3, 0, 2]);
        assert_eq!(a.truncate(3), a);
        assert_eq!(a.truncate(10), a);
        assert!(a.truncate(0).is_zero());
        // truncation may expose a zero below the top
        assert_eq!(a.truncate(2), p(&[0, 0, 0, 2]));
    }

    #[test]
    fn division_examples() {
        let k = f4();
        // (x+ω)(x+1) = x² + ω²x + ω
        let a = SkewPoly::from_coeffs(vec![W, W1, ONE]);
        let b = p(&[1, 1]);
        let (q, r) = a.divide(&k, &b, Side::Right).unwrap();
        assert_eq!(q, SkewPoly::from_coeffs(vec![W, ONE]));
        assert!(r.is_zero());
        assert_eq!(
            a.divide(&k, &SkewPoly::one(), Side::Right).unwrap(),
            (a.clone(), SkewPoly::zero())
        );
        assert_eq!(
            a.divide(&k, &SkewPoly::zero(), Side::Left),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn division_reassembles() {
        let k = FieldContext::new(2, 1, 5, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1000 {
            let a = random_poly(&k, &mut rng, 14);
            let b = random_poly(&k, &mut rng, 8);
            if b.is_zero() {
                continue;
            }
            let (q, r) = a.divide(&k, &b, Side::Right).unwrap();
            assert!(r.degree() < b.degree());
            assert_eq!(q.mul_naive(&k, &b).add(&k, &r), a);
            let (q, r) = a.divide(&k, &b, Side::Left).unwrap();
            assert!(r.degree() < b.degree());
            assert_eq!(b.mul_naive(&k, &q).add(&k, &r), a);
        }
    }

    #[test]
    fn evaluation_examples() {
        let k = f4();
        assert_eq!(SkewPoly::x_power(1).eval(&k, W), W1);
        assert_eq!(SkewPoly::one().eval(&k, W), W);
        let k8 = FieldContext::new(2, 1, 8, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let f = random_poly(&k8, &mut rng, 10);
            let a = k8.random(&mut rng);
            let b = k8.random(&mut rng);
            assert_eq!(
                f.eval(&k8, k8.add(a, b)),
                k8.add(f.eval(&k8, a), f.eval(&k8, b))
            );
            // composition: (f·g)(α) = f(g(α))
            let g = random_poly(&k8, &mut rng, 6);
            assert_eq!(
                f.mul_naive(&k8, &g).eval(&k8, a),
                f.eval(&k8, g.eval(&k8, a))
            );
        }
    }

    #[test]
    fn annihilator_examples() {
        let k = f4();
        assert_eq!(annihilator(&k, &[ONE]), p(&[1, 1]));
        assert_eq!(annihilator(&k, &[W]), SkewPoly::from_coeffs(vec![W, ONE]));
        assert_eq!(annihilator(&k, &[]), SkewPoly::one());
        for v in [ONE, W] {
            assert!(annihilator(&k, &[v]).eval(&k, v).is_zero());
        }
    }

    #[test]
    fn annihilator_kills_span() {
        let k = FieldContext::new(2, 1, 6, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let pts: Vec<_> = (0..4).map(|_| k.random(&mut rng)).collect();
            let rank = base_rank(&k, &pts);
            let ann = annihilator(&k, &pts);
            assert!(ann.is_monic());
            assert_eq!(ann.degree(), Some(rank));
            for mask in 0u32..16 {
                let v = (0..4)
                    .filter(|b| mask >> b & 1 == 1)
                    .fold(k.zero(), |acc, b| k.add(acc, pts[b]));
                assert!(ann.eval(&k, v).is_zero());
            }
        }
    }

    #[test]
    fn interpolation_round_trip() {
        let k = FieldContext::new(2, 1, 8, None).unwrap();
        let alphas = crate::field::random_li_set(&k, 6, 3).unwrap();
        let zeros: Vec<_> = alphas.iter().map(|&a| (a, ZERO)).collect();
        assert!(interpolate(&k, &zeros).unwrap().is_zero());
        let c = k.element(77).unwrap();
        let scaled: Vec<_> = alphas.iter().map(|&a| (a, k.mul(c, a))).collect();
        assert_eq!(interpolate(&k, &scaled).unwrap(), SkewPoly::constant(c));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let f = random_poly(&k, &mut rng, 6);
            let pts: Vec<_> = alphas.iter().map(|&a| (a, f.eval(&k, a))).collect();
            assert_eq!(interpolate(&k, &pts).unwrap(), f);
        }
        let dep = vec![(alphas[0], ONE), (alphas[0], ZERO)];
        assert_eq!(interpolate(&k, &dep), Err(Error::DependentPoints));
    }

    #[test]
    fn serde_uses_full_coefficient_list() {
        let a = p(&[0, 0, 5, 1]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[0,0,5,1]");
        let back: SkewPoly = serde_json::from_str("[0,0,5,1,0]").unwrap();
        assert_eq!(back, a);
    }

    fn arb_poly(max_len: usize) -> impl Strategy<Value = SkewPoly> {
        (0usize..6, proptest::collection::vec(0u32..16, 0..max_len))
            .prop_map(|(shift, c)| SkewPoly::from_values(&c).shift_right_x(shift))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(8), b in arb_poly(8), c in arb_poly(8)) {
            let k = FieldContext::new(2, 1, 4, None).unwrap();
            let s = MulStrategy::Naive;
            prop_assert_eq!(a.mul(&k, &b, s).mul(&k, &c, s), a.mul(&k, &b.mul(&k, &c, s), s));
            prop_assert_eq!(
                a.mul(&k, &b.add(&k, &c), s),
                a.mul(&k, &b, s).add(&k, &a.mul(&k, &c, s))
            );
            prop_assert_eq!(
                a.add(&k, &b).mul(&k, &c, s),
                a.mul(&k, &c, s).add(&k, &b.mul(&k, &c, s))
            );
            prop_assert_eq!(a.mul(&k, &b, s), a.mul_naive(&k, &b));
            if let (Some(da), Some(db)) = (a.degree(), b.degree()) {
                prop_assert_eq!(a.mul(&k, &b, s).degree(), Some(da + db));
            }
        }

        #[test]
        fn strategies_agree(a in arb_poly(120), b in arb_poly(120)) {
            let k = FieldContext::new(2, 1, 4, None).unwrap();
            prop_assert_eq!(
                a.mul(&k, &b, MulStrategy::Karatsuba),
                a.mul(&k, &b, MulStrategy::Naive)
            );
        }

        #[test]
        fn truncation_properties(a in arb_poly(20), t in 0usize..25, s in 0usize..25) {
            prop_assert!(a.truncate(t).len() <= t);
            prop_assert_eq!(a.truncate(t).truncate(s), a.truncate(t.min(s)));
            if t >= 1 {
                prop_assert_eq!(a.truncate(t).degree(), a.degree());
            }
        }
    }
}
