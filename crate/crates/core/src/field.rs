//! Arithmetic in `F_{q^m}` with `q = p^u`.
//!
//! Elements are stored as their canonical integer encoding: the coordinate
//! vector in the polynomial basis `1, z, z^2, ...` read as little-endian
//! base-`p` digits. Two interchangeable backends sit behind [`FieldContext`]:
//!
//! - [`Backend::ZechLog`]: discrete log / antilog tables plus a Zech table for
//!   addition in odd characteristic. Selected automatically for fields with at
//!   most [`ZECH_TABLE_LIMIT`] elements.
//! - [`Backend::PolynomialBasis`]: carry-less (or base-`p`) multiplication
//!   reduced by the modulus, with the Frobenius powers stored as precomputed
//!   linear maps.
//!
//! Both backends apply `σ^i: α ↦ α^(q^i)` with a constant number of table
//! lookups, independent of `i`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order for which log tables are built.
pub const ZECH_TABLE_LIMIT: u64 = 1 << 20;

/// Largest field order representable by the `u32` element encoding.
pub const MAX_FIELD_ORDER: u64 = 1 << 32;

const NO_LOG: u32 = u32::MAX;

/// Canonical encoding of a field element.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw encoding without range checking. Use
    /// [`FieldContext::element`] for untrusted input.
    #[inline]
    pub const fn from_raw(value: u32) -> Self {
        FieldElement(value)
    }

    #[inline]
    pub const fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    ZechLog,
    PolynomialBasis,
}

/// Serialized description of a field, `{"p":2,"u":1,"m":24,"modulus":[...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub u: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

struct LogTables {
    log: Vec<u32>,
    /// `exp[k] = g^k` for `k < 2(Q-1)` so sums of two logs need no reduction.
    exp: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`; empty in characteristic 2.
    zech: Vec<u32>,
    /// `q^i mod (Q-1)` for `i < m`.
    frob: Vec<u64>,
}

enum FrobeniusMaps {
    /// Characteristic 2: `tables[i][chunk * 256 + byte]` is the image of the
    /// basis bits in `byte` under `σ^i`.
    Bytes {
        chunks: usize,
        tables: Vec<Vec<u32>>,
    },
    /// Odd characteristic: `images[i][b] = σ^i(z^b)`.
    Images { images: Vec<Vec<u32>> },
}

/// An immutable finite field `F_{q^m}` with its Frobenius automorphism.
pub struct FieldContext {
    p: u32,
    u: u32,
    m: u32,
    degree: u32,
    order: u64,
    q: u64,
    modulus: Vec<u32>,
    backend: Backend,
    logs: Option<LogTables>,
    frob_maps: Option<FrobeniusMaps>,
    /// Generator of the multiplicative group of the fixed field `F_q`.
    base_generator: FieldElement,
}

impl std::fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldContext")
            .field("p", &self.p)
            .field("u", &self.u)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("backend", &self.backend)
            .finish()
    }
}

impl FieldContext {
    /// Builds `F_{q^m}` with `q = p^u`. Without an explicit modulus the
    /// lexicographically least monic irreducible of degree `u·m` is used.
    pub fn new(p: u32, u: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        Self::build(p, u, m, modulus, None)
    }

    /// Like [`FieldContext::new`] but with a forced backend.
    pub fn with_backend(
        p: u32,
        u: u32,
        m: u32,
        modulus: Option<Vec<u32>>,
        backend: Backend,
    ) -> Result<Self> {
        Self::build(p, u, m, modulus, Some(backend))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Self::new(spec.p, spec.u, spec.m, Some(spec.modulus.clone()))
    }

    fn build(
        p: u32,
        u: u32,
        m: u32,
        modulus: Option<Vec<u32>>,
        backend: Option<Backend>,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if u == 0 || m == 0 {
            return Err(Error::InvalidField("u and m must be at least 1".into()));
        }
        let degree = u
            .checked_mul(m)
            .ok_or_else(|| Error::InvalidField("u·m overflows".into()))?;
        let order = checked_pow(p as u64, degree)
            .filter(|&o| o <= MAX_FIELD_ORDER)
            .ok_or_else(|| {
                Error::InvalidField(format!("{p}^{degree} exceeds the supported field size"))
            })?;
        let q = (p as u64).pow(u);

        let modulus = match modulus {
            Some(f) => {
                if f.len() != degree as usize + 1
                    || f.iter().any(|&c| c >= p)
                    || f[degree as usize] != 1
                    || !is_irreducible(&f, p)
                {
                    return Err(Error::ReducibleModulus(degree));
                }
                f
            }
            None => least_irreducible(p, degree),
        };

        let backend = match backend {
            Some(Backend::ZechLog) if order > ZECH_TABLE_LIMIT => {
                return Err(Error::TableTooLarge {
                    order,
                    limit: ZECH_TABLE_LIMIT,
                })
            }
            Some(b) => b,
            None if order <= ZECH_TABLE_LIMIT => Backend::ZechLog,
            None => Backend::PolynomialBasis,
        };

        let mut ctx = FieldContext {
            p,
            u,
            m,
            degree,
            order,
            q,
            modulus,
            backend,
            logs: None,
            frob_maps: None,
            base_generator: FieldElement::ONE,
        };

        let generator = ctx.find_primitive();
        ctx.base_generator = FieldElement(ctx.basis_pow(generator, (order - 1) / (q - 1)));
        match backend {
            Backend::ZechLog => ctx.logs = Some(ctx.build_log_tables(generator)),
            Backend::PolynomialBasis => ctx.frob_maps = Some(ctx.build_frobenius_maps()),
        }
        Ok(ctx)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Size `q` of the fixed field of σ.
    pub fn base_order(&self) -> u64 {
        self.q
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    /// Extension degree over `F_q`, which is also the order of σ.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Degree `u·m` of the field over its prime field.
    pub fn prime_degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            u: self.u,
            m: self.m,
            modulus: self.modulus.clone(),
        }
    }

    /// Validates a raw encoding.
    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value < self.order {
            Ok(FieldElement(value as u32))
        } else {
            Err(Error::ElementOutOfRange(value))
        }
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The class of `z`, i.e. the root of the modulus.
    pub fn generator_z(&self) -> FieldElement {
        if self.degree == 1 {
            // z is the root of the linear modulus x + c_0
            FieldElement((self.p - self.modulus[0]) % self.p)
        } else {
            FieldElement(self.p)
        }
    }

    /// The prime-field element `k mod p`.
    pub fn from_int(&self, k: u64) -> FieldElement {
        FieldElement((k % self.p as u64) as u32)
    }

    /// Base-`p` digits of the encoding, little-endian, always `u·m` long.
    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        let mut v = a.0 as u64;
        let p = self.p as u64;
        (0..self.degree)
            .map(|_| {
                let d = (v % p) as u32;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElement {
        let p = self.p as u64;
        let v = digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * p + (d as u64 % p));
        FieldElement(v as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        match &self.logs {
            Some(t) => {
                let n = (self.order - 1) as u32;
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                let k = if lb >= la { lb - la } else { lb + n - la };
                let z = t.zech[k as usize];
                if z == NO_LOG {
                    FieldElement::ZERO
                } else {
                    FieldElement(t.exp[(la + z) as usize])
                }
            }
            None => FieldElement(self.digit_add(a.0, b.0, false)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        match &self.logs {
            Some(t) => {
                let half = ((self.order - 1) / 2) as u32;
                FieldElement(t.exp[(t.log[a.0 as usize] + half) as usize])
            }
            None => FieldElement(self.digit_add(0, a.0, true)),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            FieldElement(a.0 ^ b.0)
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        match &self.logs {
            Some(t) => FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => FieldElement(self.basis_mul(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.logs {
            Some(t) => {
                let n = (self.order - 1) as u32;
                let l = t.log[a.0 as usize];
                FieldElement(t.exp[((n - l) % n) as usize])
            }
            None => FieldElement(self.basis_pow(a.0, self.order - 2)),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k`, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        match &self.logs {
            Some(t) => {
                let n = self.order - 1;
                let e = (t.log[a.0 as usize] as u64 * (k % n)) % n;
                FieldElement(t.exp[e as usize])
            }
            None => FieldElement(self.basis_pow(a.0, k)),
        }
    }

    /// `σ^i(a) = a^(q^i)`.
    #[inline]
    pub fn frobenius(&self, a: FieldElement, i: usize) -> FieldElement {
        let i = i % self.m as usize;
        if i == 0 || a.0 <= 1 {
            return a;
        }
        if let Some(t) = &self.logs {
            let n = self.order - 1;
            let e = (t.log[a.0 as usize] as u64 * t.frob[i]) % n;
            return FieldElement(t.exp[e as usize]);
        }
        match self
            .frob_maps
            .as_ref()
            .expect("polynomial backend has maps")
        {
            FrobeniusMaps::Bytes { chunks, tables } => {
                let table = &tables[i];
                let mut v = a.0;
                let mut out = 0u32;
                for c in 0..*chunks {
                    out ^= table[(c << 8) | (v & 0xff) as usize];
                    v >>= 8;
                }
                FieldElement(out)
            }
            FrobeniusMaps::Images { images } => {
                let imgs = &images[i];
                let mut acc = FieldElement::ZERO;
                for (b, d) in self.digits(a).into_iter().enumerate() {
                    if d != 0 {
                        let term = self.mul(FieldElement(d), FieldElement(imgs[b]));
                        acc = self.add(acc, term);
                    }
                }
                acc
            }
        }
    }

    /// `σ^(-i)(a)`.
    #[inline]
    pub fn inverse_frobenius(&self, a: FieldElement, i: usize) -> FieldElement {
        let m = self.m as usize;
        self.frobenius(a, (m - i % m) % m)
    }

    /// Whether `a` lies in the fixed field `F_q`.
    pub fn in_base_field(&self, a: FieldElement) -> bool {
        self.frobenius(a, 1) == a
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.order) as u32)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(1..self.order) as u32)
    }

    /// Uniform element of the fixed field `F_q`.
    pub fn random_base<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        if self.u == 1 {
            return FieldElement(rng.gen_range(0..self.p));
        }
        let mut acc = FieldElement::ZERO;
        let mut power = FieldElement::ONE;
        for _ in 0..self.u {
            let c = FieldElement(rng.gen_range(0..self.p));
            acc = self.add(acc, self.mul(c, power));
            power = self.mul(power, self.base_generator);
        }
        acc
    }

    /// An `F_p`-basis of the fixed field `F_q`.
    pub fn base_field_basis(&self) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.u as usize);
        let mut power = FieldElement::ONE;
        for _ in 0..self.u {
            out.push(power);
            power = self.mul(power, self.base_generator);
        }
        out
    }

    // ---- polynomial-basis arithmetic, also used to build the tables ----

    fn digit_add(&self, a: u32, b: u32, negate_b: bool) -> u32 {
        let p = self.p as u64;
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut scale = 1u64;
        while a > 0 || b > 0 {
            let db = b % p;
            let db = if negate_b { (p - db) % p } else { db };
            out += ((a % p + db) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out as u32
    }

    fn basis_mul(&self, a: u32, b: u32) -> u32 {
        let d = self.degree as usize;
        if self.p == 2 {
            let (a, b) = (a as u64, b as u64);
            let mut prod = 0u64;
            for i in 0..d {
                if (a >> i) & 1 == 1 {
                    prod ^= b << i;
                }
            }
            let modulus: u64 = self
                .modulus
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &c)| acc | ((c as u64) << i));
            for k in (d..2 * d - 1).rev() {
                if (prod >> k) & 1 == 1 {
                    prod ^= modulus << (k - d);
                }
            }
            return prod as u32;
        }
        let p = self.p as u64;
        let da = self.digits(FieldElement(a));
        let db = self.digits(FieldElement(b));
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c != 0 {
                for (i, &f) in self.modulus.iter().enumerate() {
                    let idx = k - d + i;
                    prod[idx] = (prod[idx] + (p - c) * f as u64) % p;
                }
            }
        }
        let digits: Vec<u32> = prod[..d].iter().map(|&x| x as u32).collect();
        self.from_digits(&digits).0
    }

    fn basis_pow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.basis_mul(acc, base);
            }
            base = self.basis_mul(base, base);
            k >>= 1;
        }
        acc
    }

    fn find_primitive(&self) -> u32 {
        let n = self.order - 1;
        let factors = prime_factors(n);
        (1..self.order as u32)
            .find(|&g| factors.iter().all(|&r| self.basis_pow(g, n / r) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_log_tables(&self, generator: u32) -> LogTables {
        let n = (self.order - 1) as usize;
        let mut log = vec![NO_LOG; self.order as usize];
        let mut exp = vec![0u32; 2 * n];
        let mut x = 1u32;
        for k in 0..n {
            exp[k] = x;
            exp[k + n] = x;
            log[x as usize] = k as u32;
            x = self.basis_mul(x, generator);
        }
        let zech = if self.p == 2 {
            Vec::new()
        } else {
            (0..n)
                .map(|k| {
                    let s = self.digit_add(1, exp[k], false);
                    if s == 0 {
                        NO_LOG
                    } else {
                        log[s as usize]
                    }
                })
                .collect()
        };
        let nn = n as u64;
        let mut frob = Vec::with_capacity(self.m as usize);
        let mut e = 1u64 % nn.max(1);
        for _ in 0..self.m {
            frob.push(e);
            e = (e * (self.q % nn.max(1))) % nn.max(1);
        }
        LogTables {
            log,
            exp,
            zech,
            frob,
        }
    }

    fn build_frobenius_maps(&self) -> FrobeniusMaps {
        let d = self.degree as usize;
        // images[i][b] = σ^i(z^b)
        let mut images: Vec<Vec<u32>> = Vec::with_capacity(self.m as usize);
        let basis: Vec<u32> = (0..d).map(|b| self.basis_pow(self.p, b as u64)).collect();
        let basis: Vec<u32> = if d == 1 { vec![1] } else { basis };
        images.push(basis.clone());
        for i in 1..self.m as usize {
            let next = images[i - 1]
                .iter()
                .map(|&x| self.basis_pow(x, self.q))
                .collect();
            images.push(next);
        }
        if self.p != 2 {
            return FrobeniusMaps::Images { images };
        }
        let chunks = d.div_ceil(8);
        let tables = images
            .iter()
            .map(|img| {
                let mut table = vec![0u32; chunks * 256];
                for c in 0..chunks {
                    for byte in 0..256usize {
                        let mut acc = 0u32;
                        for bit in 0..8 {
                            let b = c * 8 + bit;
                            if b < d && (byte >> bit) & 1 == 1 {
                                acc ^= img[b];
                            }
                        }
                        table[(c << 8) | byte] = acc;
                    }
                }
                table
            })
            .collect();
        FrobeniusMaps::Bytes { chunks, tables }
    }
}

/// Solves `A·x = b` by Gaussian elimination, pivoting on the first nonzero
/// entry in column order. Returns `Ok(None)` for an inconsistent system;
/// free variables are set to zero.
pub fn linear_solve(
    ctx: &FieldContext,
    a: &[Vec<FieldElement>],
    b: &[FieldElement],
) -> Result<Option<Vec<FieldElement>>> {
    let rows = a.len();
    if b.len() != rows {
        return Err(Error::DimensionMismatch(format!(
            "{} equations but {} right-hand sides",
            rows,
            b.len()
        )));
    }
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("ragged coefficient matrix".into()));
    }
    let mut aug: Vec<Vec<FieldElement>> = a
        .iter()
        .zip(b)
        .map(|(r, &y)| {
            let mut row = r.clone();
            row.push(y);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        let Some(pr) = (next_row..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(next_row, pr);
        let inv = ctx.inv(aug[next_row][col])?;
        for v in aug[next_row].iter_mut() {
            *v = ctx.mul(*v, inv);
        }
        let pivot = aug[next_row].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != next_row && !row[col].is_zero() {
                let f = row[col];
                for (v, &pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *v = ctx.sub(*v, ctx.mul(f, pv));
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows {
            break;
        }
    }
    if aug[next_row..].iter().any(|r| !r[cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![FieldElement::ZERO; cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols];
    }
    Ok(Some(x))
}

/// Rank of a matrix over the full field `F_{q^m}`.
pub fn matrix_rank(ctx: &FieldContext, rows: &[Vec<FieldElement>]) -> usize {
    let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = ctx.inv(m[rank][col]).expect("pivot is nonzero");
        let (done, below) = m.split_at_mut(rank + 1);
        let pivot = &done[rank];
        for row in below {
            if !row[col].is_zero() {
                let f = ctx.mul(row[col], inv);
                for (v, &pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *v = ctx.sub(*v, ctx.mul(f, pv));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension over `F_q` of the span of `elements`.
pub fn base_rank(ctx: &FieldContext, elements: &[FieldElement]) -> usize {
    let basis = ctx.base_field_basis();
    let p = ctx.characteristic() as u64;
    let mut vectors: Vec<Vec<u64>> = elements
        .iter()
        .flat_map(|&e| {
            basis.iter().map(move |&b| {
                ctx.digits(ctx.mul(b, e))
                    .into_iter()
                    .map(u64::from)
                    .collect()
            })
        })
        .collect();
    rank_mod_p(&mut vectors, p) / ctx.u() as usize
}

/// `F_q`-rank of a matrix with entries in `F_{q^m}`: the dimension of the
/// `F_q`-span of all entries, which equals the rank of the expanded
/// `m × (rows·cols)` matrix over `F_q`.
pub fn rank_over_base(ctx: &FieldContext, rows: &[Vec<FieldElement>]) -> usize {
    let all: Vec<FieldElement> = rows.iter().flatten().copied().collect();
    base_rank(ctx, &all)
}

/// `n` elements linearly independent over `F_q`, drawn deterministically from
/// `seed`.
pub fn random_li_set(ctx: &FieldContext, n: usize, seed: u64) -> Result<Vec<FieldElement>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    random_li_set_with(ctx, n, &mut rng)
}

pub fn random_li_set_with<R: Rng + ?Sized>(
    ctx: &FieldContext,
    n: usize,
    rng: &mut R,
) -> Result<Vec<FieldElement>> {
    if n > ctx.m() as usize {
        return Err(Error::TooManyIndependent {
            requested: n,
            available: ctx.m() as usize,
        });
    }
    let mut out: Vec<FieldElement> = Vec::with_capacity(n);
    while out.len() < n {
        let cand = ctx.random_nonzero(rng);
        out.push(cand);
        if base_rank(ctx, &out) < out.len() {
            out.pop();
        }
    }
    Ok(out)
}

fn rank_mod_p(vectors: &mut [Vec<u64>], p: u64) -> usize {
    let cols = vectors.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..vectors.len()).find(|&r| vectors[r][col] != 0) else {
            continue;
        };
        vectors.swap(rank, pr);
        let inv = mod_inv(vectors[rank][col], p);
        let (done, below) = vectors.split_at_mut(rank + 1);
        let pivot = &done[rank];
        for row in below {
            let f = row[col] * inv % p;
            if f != 0 {
                for (v, &pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *v = (*v + (p - f) * pv) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

fn mod_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    (0..exp).try_fold(1u64, |acc, _| acc.checked_mul(base))
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    (2..)
        .take_while(|d| d * d <= n)
        .all(|d| !n.is_multiple_of(d))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---- dense polynomials over F_p, used for modulus selection ----

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let inv_lead = mod_inv(f[df], p);
    while r.len() > df {
        let k = r.len() - 1;
        let c = r[k] * inv_lead % p;
        for (i, &fi) in f.iter().enumerate() {
            let idx = k - df + i;
            r[idx] = (r[idx] + (p - c) * fi) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_powmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = poly_rem(a, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, f, p);
        }
        base = poly_mulmod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

/// Rabin's irreducibility test for a monic polynomial over `F_p`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let p = p as u64;
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    // frob[k] = x^(p^k) mod f
    let mut frob = vec![poly_rem(&x, &f, p)];
    for k in 1..=d {
        let next = poly_powmod(&frob[k - 1], p, &f, p);
        frob.push(next);
    }
    if poly_sub(&frob[d], &x, p) != Vec::<u64>::new() {
        return false;
    }
    prime_factors(d as u64).into_iter().all(|r| {
        let h = poly_sub(&frob[d / r as usize], &x, p);
        poly_gcd(&f, &h, p).len() == 1
    })
}

fn least_irreducible(p: u32, degree: u32) -> Vec<u32> {
    let d = degree as usize;
    let p64 = p as u64;
    let lead = p64.pow(degree);
    (0..lead)
        .map(|low| {
            let mut f = Vec::with_capacity(d + 1);
            let mut v = low;
            for _ in 0..d {
                f.push((v % p64) as u32);
                v /= p64;
            }
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}
