//! Binary linear block codes: Hamming, BCH, Golay, repetition and single
//! parity-check constructions, standard-array syndrome decoding and a
//! Berlekamp–Massey decoder for narrow-sense BCH codes.
//!
//! Constructed codes use the systematic layout `G = [P | I_k]`,
//! `H = [I_{n-k} | Pᵀ]` unless noted otherwise, so a message `m` encodes to
//! `[m·P | m]`.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{binomial, BitMatrix, BitVector, Combinations};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum CodeKind {
    Hamming { m: usize },
    Bch { m: usize, t: usize },
    Golay,
    Repetition,
    Spc,
    Custom,
}

/// An `[n, k, d]` binary linear code.
#[derive(Debug, Clone)]
pub struct ClassicalCode {
    n: usize,
    k: usize,
    d: usize,
    kind: CodeKind,
    g: BitMatrix,
    h: BitMatrix,
    /// Positions where `G` restricts to the identity.
    info_set: Vec<usize>,
    /// Coefficients of the generator polynomial for cyclic constructions.
    generator_poly: Option<Vec<u8>>,
    /// Number of trailing message positions removed by [`ClassicalCode::shorten`].
    shortened: usize,
}

impl ClassicalCode {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of parity checks, `n - k`.
    #[inline]
    pub fn r(&self) -> usize {
        self.n - self.k
    }

    /// Known or design distance; 0 when unknown.
    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn t(&self) -> usize {
        self.d.saturating_sub(1) / 2
    }

    #[inline]
    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    #[inline]
    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    #[inline]
    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn generator_poly(&self) -> Option<&[u8]> {
        self.generator_poly.as_deref()
    }

    pub fn shortened(&self) -> usize {
        self.shortened
    }

    pub fn is_bch(&self) -> bool {
        matches!(self.kind, CodeKind::Bch { .. })
    }

    /// Registry identifier, e.g. `bch:127:6`.
    pub fn id(&self) -> String {
        let base = match self.kind {
            CodeKind::Hamming { m } => format!("hamming:{m}"),
            CodeKind::Bch { m, t } => format!("bch:{}:{t}", (1usize << m) - 1),
            CodeKind::Golay => "golay23".to_string(),
            CodeKind::Repetition => format!("rep:{}", self.n),
            CodeKind::Spc => format!("spc:{}", self.n),
            CodeKind::Custom => format!("custom:{}:{}", self.n, self.k),
        };
        if self.shortened > 0 && self.kind != CodeKind::Custom {
            format!("{base}:s{}", self.shortened)
        } else {
            base
        }
    }

    /// Whether `H = [I_{n-k} | Pᵀ]` with the identity in the leading columns.
    pub fn is_standard_systematic(&self) -> bool {
        let r = self.r();
        (0..r).all(|i| {
            let row = self.h.row(i);
            row.weight_in(0, r) == 1 && row.get(i)
        })
    }

    /// The `Pᵀ` block of a code in `[I | Pᵀ]` layout, an `(n-k) × k` matrix.
    pub fn parity_transpose(&self) -> Result<BitMatrix> {
        if !self.is_standard_systematic() {
            return Err(Error::NotSystematic);
        }
        let cols: Vec<usize> = (self.r()..self.n).collect();
        Ok(self.h.select_columns(&cols))
    }

    /// Build a code from a full-rank parity-check matrix. The generator is
    /// `[P | I]` when `H` is already in `[I | Pᵀ]` form and a row-reduced
    /// kernel basis otherwise. The distance is computed exhaustively when
    /// `k ≤ 20` or `n - k ≤ 20` and left at 0 otherwise.
    pub fn from_parity_check(h: BitMatrix) -> Result<Self> {
        let rank = h.rank();
        if rank != h.rows() {
            return Err(Error::RankDeficient {
                rank,
                rows: h.rows(),
            });
        }
        let mut code = Self::from_h_unchecked(h, CodeKind::Custom, 0, None);
        code.d = code.minimum_distance().unwrap_or(0);
        Ok(code)
    }

    fn from_h_unchecked(h: BitMatrix, kind: CodeKind, d: usize, poly: Option<Vec<u8>>) -> Self {
        let n = h.cols();
        let r = h.rows();
        let k = n - r;
        let standard = (0..r).all(|i| {
            let row = h.row(i);
            row.weight_in(0, r) == 1 && row.get(i)
        });
        let (g, info_set) = if standard {
            let pt = h.select_columns(&(r..n).collect::<Vec<_>>());
            let g = pt.transpose().hstack(&BitMatrix::identity(k)).expect("shapes agree");
            (g, (r..n).collect())
        } else {
            let rr = h.nullspace().rref();
            (rr.matrix, rr.pivots)
        };
        Self {
            n,
            k,
            d,
            kind,
            g,
            h,
            info_set,
            generator_poly: poly,
            shortened: 0,
        }
    }

    /// Systematic code from a generator polynomial of degree `n - k`.
    fn cyclic(n: usize, poly: Vec<u8>, kind: CodeKind, d: usize) -> Self {
        let r = poly.len() - 1;
        let k = n - r;
        let mut h = BitMatrix::zeros(r, n);
        for i in 0..r {
            h.set(i, i, true);
        }
        // rem = x^(r+i) mod g, starting from x^r ≡ g - x^r
        let mut rem: Vec<u8> = poly[..r].to_vec();
        for i in 0..k {
            for (row, &bit) in rem.iter().enumerate() {
                if bit == 1 {
                    h.set(row, r + i, true);
                }
            }
            let carry = rem[r - 1];
            for j in (1..r).rev() {
                rem[j] = rem[j - 1];
            }
            rem[0] = 0;
            if carry == 1 {
                for (a, b) in rem.iter_mut().zip(&poly[..r]) {
                    *a ^= b;
                }
            }
        }
        Self::from_h_unchecked(h, kind, d, Some(poly))
    }

    /// `v = m·G`, which reads `[m·P | m]` for the standard layout.
    pub fn encode(&self, msg: &BitVector) -> Result<BitVector> {
        if msg.len() != self.k {
            return Err(Error::Length {
                op: "encode",
                expected: self.k,
                actual: msg.len(),
            });
        }
        self.g.vec_mul(msg)
    }

    pub fn syndrome(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.n {
            return Err(Error::Length {
                op: "syndrome",
                expected: self.n,
                actual: v.len(),
            });
        }
        self.h.mul_vec(v)
    }

    pub fn is_codeword(&self, v: &BitVector) -> bool {
        self.syndrome(v).map(|s| s.is_zero()).unwrap_or(false)
    }

    /// Remove the last `s` message positions (codewords with those bits zero).
    pub fn shorten(&self, s: usize) -> Result<Self> {
        if s >= self.k {
            return Err(Error::InvalidParameter(format!(
                "cannot shorten a k={} code by {s}",
                self.k
            )));
        }
        let removed: Vec<usize> = self.info_set[self.k - s..].to_vec();
        let keep: Vec<usize> = (0..self.n).filter(|c| !removed.contains(c)).collect();
        let keep_rows: Vec<usize> = (0..self.k - s).collect();
        let h = self.h.select_columns(&keep);
        if h.rank() != h.rows() {
            return Err(Error::RankDeficient {
                rank: h.rank(),
                rows: h.rows(),
            });
        }
        let g = self.g.select_rows(&keep_rows).select_columns(&keep);
        let info_set = self.info_set[..self.k - s]
            .iter()
            .map(|&p| keep.iter().position(|&c| c == p).expect("kept"))
            .collect();
        let tail = removed.iter().enumerate().all(|(i, &p)| p == self.n - s + i);
        Ok(Self {
            n: self.n - s,
            k: self.k - s,
            d: self.d,
            kind: if tail { self.kind } else { CodeKind::Custom },
            g,
            h,
            info_set,
            generator_poly: self.generator_poly.clone(),
            shortened: if tail { self.shortened + s } else { 0 },
        })
    }

    /// Exact minimum distance by codeword enumeration (`k ≤ 20`) or from the
    /// dual weight distribution (`n - k ≤ 20`). `None` when neither is
    /// feasible or the code has no nonzero codeword.
    pub fn minimum_distance(&self) -> Option<usize> {
        if self.k == 0 {
            return None;
        }
        if self.k <= 20 {
            let wd = weight_distribution(&self.g);
            return wd.iter().skip(1).position(|&c| c > 0).map(|i| i + 1);
        }
        if self.r() <= 20 {
            let dual = weight_distribution(&self.h);
            return macwilliams_min_weight(&dual, self.n);
        }
        None
    }
}

impl fmt::Display for ClassicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d > 0 {
            write!(f, "[{}, {}, {}]", self.n, self.k, self.d)
        } else {
            write!(f, "[{}, {}]", self.n, self.k)
        }
    }
}

trait WeightIn {
    fn weight_in(&self, start: usize, end: usize) -> usize;
}

impl WeightIn for BitVector {
    fn weight_in(&self, start: usize, end: usize) -> usize {
        self.iter_ones().filter(|&i| i >= start && i < end).count()
    }
}

/// Weight distribution of the row space of `basis` (rows assumed independent),
/// by Gray-code enumeration.
fn weight_distribution(basis: &BitMatrix) -> Vec<u64> {
    let n = basis.cols();
    let mut counts = vec![0u64; n + 1];
    let mut v = BitVector::zeros(n);
    counts[0] = 1;
    let total: u64 = 1 << basis.rows();
    for i in 1..total {
        let bit = i.trailing_zeros() as usize;
        v.xor_assign(&basis.row(bit));
        counts[v.weight()] += 1;
    }
    counts
}

fn macwilliams_min_weight(dual: &[u64], n: usize) -> Option<usize> {
    let big_binom = |a: usize, b: usize| -> BigInt {
        if b > a {
            return BigInt::from(0);
        }
        let mut acc = BigInt::from(1);
        for i in 0..b {
            acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
        }
        acc
    };
    let zero = BigInt::from(0);
    (1..=n).find(|&i| {
        let mut sum = BigInt::from(0);
        for (j, &b) in dual.iter().enumerate() {
            if b == 0 {
                continue;
            }
            // Krawtchouk polynomial K_i(j)
            let mut kr = BigInt::from(0);
            for s in 0..=i.min(j) {
                let term = big_binom(j, s) * big_binom(n - j, i - s);
                if s % 2 == 0 {
                    kr += term;
                } else {
                    kr -= term;
                }
            }
            sum += kr * BigInt::from(b);
        }
        sum > zero
    })
}

/// `GF(2^m)` with log/antilog tables.
#[derive(Debug, Clone)]
pub struct GaloisField {
    m: usize,
    primitive_poly: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

/// Primitive polynomial for each supported degree, bit `i` = coefficient of `x^i`.
pub fn primitive_polynomial(m: usize) -> Option<u32> {
    Some(match m {
        2 => 0b111,
        3 => 0b1011,
        4 => 0b10011,
        5 => 0b100101,
        6 => 0b1000011,
        7 => 0b10001001,
        8 => 0b100011101,
        9 => 0b1000010001,
        10 => 0b10000001001,
        11 => 0b100000000101,
        12 => 0b1000001010011,
        13 => 0b10000000011011,
        14 => 0b100010001000011,
        15 => 0b1000000000000011,
        16 => 0b10001000000001011,
        _ => return None,
    })
}

impl GaloisField {
    pub fn new(m: usize) -> Result<Self> {
        let poly = primitive_polynomial(m)
            .ok_or_else(|| Error::InvalidParameter(format!("GF(2^{m}) not supported (2 ≤ m ≤ 16)")))?;
        let order = (1usize << m) - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; order + 1];
        let mut x: u32 = 1;
        for (i, e) in exp.iter_mut().take(order).enumerate() {
            *e = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        assert_eq!(x, 1, "polynomial for m={m} is not primitive");
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self {
            m,
            primitive_poly: poly,
            exp,
            log,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Multiplicative order `2^m - 1`.
    pub fn order(&self) -> usize {
        (1 << self.m) - 1
    }

    /// `α^i`
    #[inline]
    pub fn alpha_pow(&self, i: usize) -> u16 {
        self.exp[i % self.order()]
    }

    #[inline]
    pub fn log(&self, a: u16) -> Option<usize> {
        (a != 0).then(|| self.log[a as usize] as usize)
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    #[inline]
    pub fn div(&self, a: u16, b: u16) -> u16 {
        assert!(b != 0, "division by zero in GF(2^m)");
        if a == 0 {
            return 0;
        }
        let o = self.order();
        self.exp[(self.log[a as usize] as usize + o - self.log[b as usize] as usize) % o]
    }

    /// Cyclotomic coset of `i` modulo `2^m - 1`.
    pub fn cyclotomic_coset(&self, i: usize) -> Vec<usize> {
        let o = self.order();
        let mut coset = vec![i % o];
        let mut j = (2 * i) % o;
        while j != i % o {
            coset.push(j);
            j = (2 * j) % o;
        }
        coset
    }

    /// Minimal polynomial of `α^i` over GF(2), coefficients low to high.
    pub fn minimal_polynomial(&self, i: usize) -> Vec<u8> {
        let mut poly: Vec<u16> = vec![1];
        for j in self.cyclotomic_coset(i) {
            let root = self.alpha_pow(j);
            let mut next = vec![0u16; poly.len() + 1];
            for (d, &c) in poly.iter().enumerate() {
                next[d + 1] ^= c;
                next[d] ^= self.mul(c, root);
            }
            poly = next;
        }
        poly.into_iter()
            .map(|c| {
                debug_assert!(c <= 1);
                c as u8
            })
            .collect()
    }
}

fn poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 1 {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= y;
            }
        }
    }
    out
}

/// Generator polynomial of the narrow-sense binary BCH code of length
/// `2^m - 1` correcting `t` errors.
pub fn bch_generator(field: &GaloisField, t: usize) -> Vec<u8> {
    let mut covered = vec![false; field.order()];
    let mut g = vec![1u8];
    for i in (1..2 * t).step_by(2) {
        if covered[i % field.order()] {
            continue;
        }
        for j in field.cyclotomic_coset(i) {
            covered[j] = true;
        }
        g = poly_mul(&g, &field.minimal_polynomial(i));
    }
    g
}

/// Degree of the BCH generator polynomial: the size of the union of the
/// cyclotomic cosets of `1, 3, …, 2t-1`.
pub fn bch_generator_degree(m: usize, t: usize) -> usize {
    let o = (1usize << m) - 1;
    let mut covered = vec![false; o];
    for i in (1..2 * t).step_by(2) {
        let mut j = i % o;
        while !covered[j] {
            covered[j] = true;
            j = (2 * j) % o;
        }
    }
    covered.iter().filter(|&&c| c).count()
}

/// `[2^m - 1, 2^m - 1 - m, 3]` Hamming code.
///
/// For `m = 3` the columns of `Pᵀ` are `101, 111, 110, 011`. Other lengths
/// take every vector of weight at least two, in increasing integer order.
pub fn hamming(m: usize) -> Result<ClassicalCode> {
    if !(2..=16).contains(&m) {
        return Err(Error::InvalidParameter(format!("hamming: m={m} outside 2..=16")));
    }
    let r = m;
    let n = (1usize << m) - 1;
    let cols: Vec<u32> = if m == 3 {
        // bit i = row i
        vec![0b101, 0b111, 0b011, 0b110]
    } else {
        (1u32..(1 << m)).filter(|v| v.count_ones() >= 2).collect()
    };
    let mut h = BitMatrix::zeros(r, n);
    for i in 0..r {
        h.set(i, i, true);
    }
    for (j, &c) in cols.iter().enumerate() {
        for i in 0..r {
            if c >> i & 1 == 1 {
                h.set(i, r + j, true);
            }
        }
    }
    Ok(ClassicalCode::from_h_unchecked(h, CodeKind::Hamming { m }, 3, None))
}

/// Narrow-sense binary BCH code of length `2^m - 1` with design distance `2t+1`.
pub fn bch(m: usize, t: usize) -> Result<ClassicalCode> {
    let field = GaloisField::new(m)?;
    let n = field.order();
    if t == 0 || 2 * t + 1 > n {
        return Err(Error::InvalidParameter(format!(
            "bch: t={t} invalid for length {n} (need 1 ≤ t, 2t+1 ≤ n)"
        )));
    }
    let g = bch_generator(&field, t);
    if g.len() > n {
        return Err(Error::InvalidParameter(format!(
            "bch: t={t} leaves no message bits at length {n}"
        )));
    }
    Ok(ClassicalCode::cyclic(n, g, CodeKind::Bch { m, t }, 2 * t + 1))
}

/// `[23, 12, 7]` Golay code with generator `x¹¹+x¹⁰+x⁶+x⁵+x⁴+x²+1`.
pub fn golay23() -> ClassicalCode {
    let mut g = vec![0u8; 12];
    for e in [0, 2, 4, 5, 6, 10, 11] {
        g[e] = 1;
    }
    ClassicalCode::cyclic(23, g, CodeKind::Golay, 7)
}

/// `[n, 1, n]` repetition code with checks `x_0 ⊕ x_i` for `i = 1..n`.
pub fn repetition(n: usize) -> Result<ClassicalCode> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("repetition: n={n} < 2")));
    }
    let mut h = BitMatrix::zeros(n - 1, n);
    for i in 0..n - 1 {
        h.set(i, 0, true);
        h.set(i, i + 1, true);
    }
    Ok(ClassicalCode::from_h_unchecked(h, CodeKind::Repetition, n, None))
}

/// `[n, n-1, 2]` single parity-check code.
pub fn single_parity_check(n: usize) -> Result<ClassicalCode> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("spc: n={n} < 2")));
    }
    let mut h = BitMatrix::zeros(1, n);
    for j in 0..n {
        h.set(0, j, true);
    }
    Ok(ClassicalCode::from_h_unchecked(h, CodeKind::Spc, 2, None))
}

/// Syndrome → minimum-weight coset leader for every coset of a code.
///
/// Leaders are found by enumerating vectors in order of weight and, within a
/// weight, in lexicographic order of their support, so the first vector to
/// reach a syndrome is its leader.
#[derive(Debug, Clone)]
pub struct StandardArray {
    n: usize,
    r: usize,
    col_syndromes: Vec<u64>,
    start: Vec<u32>,
    supports: Vec<u32>,
}

const MAX_STANDARD_ARRAY_CHECKS: usize = 24;

impl StandardArray {
    pub fn build(code: &ClassicalCode) -> Result<Self> {
        let r = code.r();
        if r > MAX_STANDARD_ARRAY_CHECKS {
            return Err(Error::TableTooLarge {
                estimate: 1u128 << r,
                limit: 1u128 << MAX_STANDARD_ARRAY_CHECKS,
            });
        }
        let n = code.n();
        let col_syndromes: Vec<u64> = (0..n)
            .map(|j| code.parity_check().column(j).to_u64())
            .collect();
        let size = 1usize << r;
        let mut slot = vec![u32::MAX; size];
        let mut leaders: Vec<Vec<u32>> = Vec::with_capacity(size);
        let mut filled = 0;
        'outer: for w in 0..=n {
            for comb in Combinations::new(n, w) {
                let s = comb.iter().fold(0u64, |acc, &j| acc ^ col_syndromes[j]) as usize;
                if slot[s] == u32::MAX {
                    slot[s] = leaders.len() as u32;
                    leaders.push(comb.iter().map(|&j| j as u32).collect());
                    filled += 1;
                    if filled == size {
                        break 'outer;
                    }
                }
            }
        }
        let mut start = vec![0u32; size + 1];
        let mut supports = Vec::new();
        for s in 0..size {
            start[s] = supports.len() as u32;
            supports.extend_from_slice(&leaders[slot[s] as usize]);
        }
        start[size] = supports.len() as u32;
        Ok(Self {
            n,
            r,
            col_syndromes,
            start,
            supports,
        })
    }

    pub fn num_cosets(&self) -> usize {
        1 << self.r
    }

    /// Support of the leader of the coset with the given syndrome.
    pub fn leader_support(&self, syndrome: &BitVector) -> Result<Vec<usize>> {
        if syndrome.len() != self.r {
            return Err(Error::Length {
                op: "standard array lookup",
                expected: self.r,
                actual: syndrome.len(),
            });
        }
        let s = syndrome.to_u64() as usize;
        Ok(self.supports[self.start[s] as usize..self.start[s + 1] as usize]
            .iter()
            .map(|&j| j as usize)
            .collect())
    }

    pub fn leader(&self, syndrome: &BitVector) -> Result<BitVector> {
        Ok(BitVector::from_support(self.n, &self.leader_support(syndrome)?))
    }

    /// Most likely error for a received word: the leader of its coset.
    pub fn decode(&self, received: &BitVector) -> Result<BitVector> {
        if received.len() != self.n {
            return Err(Error::Length {
                op: "standard array decode",
                expected: self.n,
                actual: received.len(),
            });
        }
        let s = received.iter_ones().fold(0u64, |acc, j| acc ^ self.col_syndromes[j]);
        self.leader(&BitVector::from_u64(self.r, s))
    }

    /// Leaders of every coset, indexed by the syndrome read as an integer.
    pub fn leaders(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0..self.num_cosets()).map(move |s| {
            BitVector::from_support(
                self.n,
                &self.supports[self.start[s] as usize..self.start[s + 1] as usize]
                    .iter()
                    .map(|&j| j as usize)
                    .collect::<Vec<_>>(),
            )
        })
    }
}

/// Syndrome computation in `GF(2^m)`, Berlekamp–Massey and Chien search for a
/// narrow-sense BCH code.
#[derive(Debug, Clone)]
pub struct BchDecoder {
    field: GaloisField,
    n_full: usize,
    n: usize,
    t: usize,
    h: BitMatrix,
}

impl BchDecoder {
    pub fn new(code: &ClassicalCode) -> Result<Self> {
        let CodeKind::Bch { m, t } = code.kind() else {
            return Err(Error::Unsupported(format!(
                "Berlekamp–Massey decoding needs a BCH code, got {}",
                code.id()
            )));
        };
        let field = GaloisField::new(m)?;
        Ok(Self {
            n_full: field.order(),
            field,
            n: code.n(),
            t,
            h: code.parity_check().clone(),
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Error support of the unique codeword within distance `t`, or `None`
    /// when the received word lies outside every decoding sphere.
    pub fn decode(&self, received: &BitVector) -> Result<Option<Vec<usize>>> {
        if received.len() != self.n {
            return Err(Error::Length {
                op: "bm_decode",
                expected: self.n,
                actual: received.len(),
            });
        }
        let f = &self.field;
        let ones: Vec<usize> = received.iter_ones().collect();
        let syndromes: Vec<u16> = (1..=2 * self.t)
            .map(|j| ones.iter().fold(0u16, |acc, &p| acc ^ f.alpha_pow(j * p)))
            .collect();
        if syndromes.iter().all(|&s| s == 0) {
            return Ok(Some(Vec::new()));
        }
        let lambda = berlekamp_massey(f, &syndromes);
        let deg = lambda.iter().rposition(|&c| c != 0).unwrap_or(0);
        if deg > self.t {
            return Ok(None);
        }
        let o = f.order();
        let mut roots = Vec::with_capacity(deg);
        for p in 0..self.n_full {
            // Λ(α^{-p})
            let inv = (o - p % o) % o;
            let mut acc = 0u16;
            for (i, &c) in lambda.iter().enumerate().take(deg + 1) {
                acc ^= f.mul(c, f.alpha_pow(i * inv));
            }
            if acc == 0 {
                roots.push(p);
            }
        }
        if roots.len() != deg || roots.iter().any(|&p| p >= self.n) {
            return Ok(None);
        }
        let mut corrected = received.clone();
        for &p in &roots {
            corrected.flip(p);
        }
        if !self.h.mul_vec(&corrected)?.is_zero() {
            return Ok(None);
        }
        Ok(Some(roots))
    }
}

/// Error-locator polynomial from syndromes `S_1..S_2t`.
fn berlekamp_massey(f: &GaloisField, s: &[u16]) -> Vec<u16> {
    let len = s.len() + 1;
    let mut c = vec![0u16; len];
    let mut b = vec![0u16; len];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last = 1u16;
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=l {
            d ^= f.mul(c[i], s[n - i]);
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = f.div(d, last);
        let prev = c.clone();
        for i in 0..len - shift {
            c[i + shift] ^= f.mul(coef, b[i]);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c
}

/// Berlekamp–Massey decoding of a BCH codeword; see [`BchDecoder::decode`].
pub fn bm_decode(code: &ClassicalCode, received: &BitVector) -> Result<Option<Vec<usize>>> {
    BchDecoder::new(code)?.decode(received)
}

/// Number of binary vectors of length `n` with weight at most `t`.
pub fn ball_size(n: usize, t: usize) -> u128 {
    (0..=t.min(n)).map(|w| binomial(n, w)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_code(c: &ClassicalCode) {
        assert_eq!(c.generator().shape(), (c.k(), c.n()));
        assert_eq!(c.parity_check().shape(), (c.r(), c.n()));
        assert!(c
            .generator()
            .mul(&c.parity_check().transpose())
            .unwrap()
            .is_zero());
        assert_eq!(c.generator().rank(), c.k());
        assert_eq!(c.parity_check().rank(), c.r());
        for (row, &p) in c.info_set().iter().enumerate() {
            let col = c.generator().column(p);
            assert_eq!(col.support(), vec![row]);
        }
    }

    /// Nearest codewords to `v` by exhaustive scan: (distance, count at that distance, one error support).
    fn nearest(c: &ClassicalCode, v: &BitVector) -> (usize, usize, Vec<usize>) {
        let mut best = (usize::MAX, 0, Vec::new());
        for mask in 0u64..(1 << c.k()) {
            let msg = BitVector::from_u64(c.k(), mask);
            let cw = c.encode(&msg).unwrap();
            let e = cw.xor(v);
            let w = e.weight();
            if w < best.0 {
                best = (w, 1, e.support());
            } else if w == best.0 {
                best.1 += 1;
            }
        }
        best
    }

    #[test]
    fn hamming3_parameters_and_columns() {
        let c = hamming(3).unwrap();
        check_code(&c);
        assert_eq!((c.n(), c.k(), c.d()), (7, 4, 3));
        assert_eq!(c.minimum_distance(), Some(3));
        let pt = c.parity_transpose().unwrap();
        assert_eq!(pt.column(0).to_string(), "101");
        assert_eq!(pt.column(1).to_string(), "111");
        assert_eq!(pt.column(2).to_string(), "110");
        assert_eq!(pt.column(3).to_string(), "011");
        // [0,0,1,0]·P = [1,1,0]
        let cw = c.encode(&"0010".parse().unwrap()).unwrap();
        assert_eq!(cw.slice(0, 3).to_string(), "110");
        assert_eq!(cw.slice(3, 7).to_string(), "0010");
    }

    #[test]
    fn hamming4_is_15_11_3() {
        let c = hamming(4).unwrap();
        check_code(&c);
        assert_eq!((c.n(), c.k()), (15, 11));
        assert_eq!(c.minimum_distance(), Some(3));
    }

    #[test]
    fn syndrome_of_unit_vector_is_column() {
        let c = hamming(3).unwrap();
        let e3 = BitVector::from_support(7, &[2]);
        assert_eq!(c.syndrome(&e3).unwrap(), c.parity_check().column(2));
        assert!(c.syndrome(&BitVector::zeros(6)).is_err());
    }

    #[test]
    fn bch_parameters() {
        for (m, t, k) in [(4, 1, 11), (4, 2, 7), (4, 3, 5), (5, 3, 16), (6, 5, 36), (7, 6, 85)] {
            let c = bch(m, t).unwrap();
            check_code(&c);
            assert_eq!(c.k(), k, "m={m} t={t}");
            assert_eq!(c.d(), 2 * t + 1);
            assert!(c.k() + m * t >= c.n());
            assert_eq!(bch_generator_degree(m, t), c.r());
        }
        assert_eq!(bch_generator_degree(10, 11), 110);
        assert!(bch(4, 8).is_err());
    }

    #[test]
    fn bch_15_5_7_distance_and_cyclic() {
        let c = bch(4, 3).unwrap();
        assert_eq!(c.minimum_distance(), Some(7));
        // cyclic shift of a codeword is a codeword
        for row in c.generator().row_iter() {
            let n = c.n();
            let shifted = BitVector::from_support(n, &row.iter_ones().map(|i| (i + 1) % n).collect::<Vec<_>>());
            assert!(c.is_codeword(&shifted));
        }
    }

    #[test]
    fn minimal_polynomials_are_binary_and_vanish() {
        let f = GaloisField::new(4).unwrap();
        assert_eq!(f.minimal_polynomial(1), vec![1, 1, 0, 0, 1]);
        for i in 1..15 {
            let p = f.minimal_polynomial(i);
            let root = f.alpha_pow(i);
            let mut acc = 0u16;
            let mut pw = 1u16;
            for &c in &p {
                if c == 1 {
                    acc ^= pw;
                }
                pw = f.mul(pw, root);
            }
            assert_eq!(acc, 0, "α^{i}");
        }
    }

    #[test]
    fn field_tables_invert() {
        for m in 2..=10 {
            let f = GaloisField::new(m).unwrap();
            assert_eq!(f.alpha_pow(f.order()), 1);
            for a in 1..=f.order() as u16 {
                assert_eq!(f.alpha_pow(f.log(a).unwrap()), a);
                assert_eq!(f.mul(a, f.div(1, a)), 1);
            }
        }
    }

    #[test]
    fn golay_parameters() {
        let c = golay23();
        check_code(&c);
        assert_eq!((c.n(), c.k(), c.d()), (23, 12, 7));
        assert_eq!(c.minimum_distance(), Some(7));
        for row in c.parity_check().row_iter() {
            assert!(c.is_codeword(&row), "H row {row} not in the code");
        }
    }

    #[test]
    fn repetition_and_spc() {
        let r = repetition(3).unwrap();
        check_code(&r);
        assert_eq!(r.generator().to_string(), "111");
        assert_eq!(r.parity_check().to_string(), "110\n101");
        assert_eq!(r.minimum_distance(), Some(3));
        let s = single_parity_check(4).unwrap();
        check_code(&s);
        assert_eq!(s.parity_check().to_string(), "1111");
        assert_eq!(s.minimum_distance(), Some(2));
        for j in 0..4 {
            assert_eq!(s.syndrome(&BitVector::from_support(4, &[j])).unwrap().to_string(), "1");
        }
    }

    #[test]
    fn from_parity_check_non_systematic() {
        let mut h = BitMatrix::zeros(3, 7);
        for j in 0..7 {
            for i in 0..3 {
                h.set(i, j, ((j + 1) >> i) & 1 == 1);
            }
        }
        let c = ClassicalCode::from_parity_check(h).unwrap();
        check_code(&c);
        assert_eq!(c.d(), 3);
        assert!(c.parity_transpose().is_err());
        let bad = BitMatrix::from_strs(&["11", "11"]).unwrap();
        assert!(ClassicalCode::from_parity_check(bad).is_err());
    }

    #[test]
    fn macwilliams_agrees_with_enumeration() {
        // golay: k = 12 enumerated directly; compare against the dual route
        let c = golay23();
        let dual = weight_distribution(c.parity_check());
        assert_eq!(macwilliams_min_weight(&dual, 23), Some(7));
        let b = bch(5, 1).unwrap();
        assert_eq!(b.k(), 26);
        assert_eq!(b.minimum_distance(), Some(3));
    }

    #[test]
    fn shorten_removes_message_tail() {
        let c = bch(4, 3).unwrap();
        let s = c.shorten(2).unwrap();
        check_code(&s);
        assert_eq!((s.n(), s.k()), (13, 3));
        assert!(s.minimum_distance().unwrap() >= 7);
        let dec = BchDecoder::new(&s).unwrap();
        let cw = s.encode(&"101".parse().unwrap()).unwrap();
        let mut r = cw.clone();
        r.flip(0);
        r.flip(12);
        assert_eq!(dec.decode(&r).unwrap(), Some(vec![0, 12]));
    }

    #[test]
    fn standard_array_hamming_and_repetition() {
        let sa = StandardArray::build(&hamming(3).unwrap()).unwrap();
        let ws: Vec<usize> = sa.leaders().map(|l| l.weight()).collect();
        assert_eq!(ws.iter().filter(|&&w| w == 0).count(), 1);
        assert_eq!(ws.iter().filter(|&&w| w == 1).count(), 7);
        let rep = StandardArray::build(&repetition(3).unwrap()).unwrap();
        let mut leaders: Vec<String> = rep.leaders().map(|l| l.to_string()).collect();
        leaders.sort();
        assert_eq!(leaders, vec!["000", "001", "010", "100"]);
    }

    #[test]
    fn standard_array_inverts_syndromes_within_radius() {
        for c in [hamming(3).unwrap(), bch(4, 3).unwrap(), golay23(), bch(4, 2).unwrap()] {
            let sa = StandardArray::build(&c).unwrap();
            let mut seen = std::collections::HashSet::new();
            for w in 0..=c.t() {
                for comb in Combinations::new(c.n(), w) {
                    let v = BitVector::from_support(c.n(), &comb);
                    let s = c.syndrome(&v).unwrap();
                    assert!(seen.insert(s.clone()), "syndrome collision in {}", c.id());
                    assert_eq!(sa.leader(&s).unwrap(), v);
                }
            }
        }
        assert!(matches!(
            StandardArray::build(&bch(7, 6).unwrap()),
            Err(Error::TableTooLarge { .. })
        ));
    }

    #[test]
    fn leaders_are_minimum_weight() {
        let c = bch(4, 2).unwrap();
        let sa = StandardArray::build(&c).unwrap();
        for v in (0u64..1 << 15).step_by(7) {
            let r = BitVector::from_u64(15, v);
            let leader = sa.decode(&r).unwrap();
            assert!(c.is_codeword(&leader.xor(&r)));
            assert_eq!(leader.weight(), nearest(&c, &r).0);
        }
    }

    #[test]
    fn bm_exhaustive_on_15_5_7() {
        let c = bch(4, 3).unwrap();
        let dec = BchDecoder::new(&c).unwrap();
        assert_eq!(dec.decode(&BitVector::zeros(15)).unwrap(), Some(vec![]));
        for mask in 0u64..32 {
            let cw = c.encode(&BitVector::from_u64(5, mask)).unwrap();
            for w in 0..=3 {
                for comb in Combinations::new(15, w) {
                    let mut r = cw.clone();
                    for &p in &comb {
                        r.flip(p);
                    }
                    assert_eq!(dec.decode(&r).unwrap(), Some(comb));
                }
            }
        }
    }

    #[test]
    fn bm_weight_four_never_contradicts_oracle() {
        let c = bch(4, 3).unwrap();
        let dec = BchDecoder::new(&c).unwrap();
        let cw = c.encode(&"10110".parse().unwrap()).unwrap();
        let mut failures = 0;
        for comb in Combinations::new(15, 4) {
            let mut r = cw.clone();
            for &p in &comb {
                r.flip(p);
            }
            let (dist, count, support) = nearest(&c, &r);
            match dec.decode(&r).unwrap() {
                None => failures += 1,
                Some(found) => {
                    assert!(dist <= 3 && count == 1);
                    assert_eq!(found, support);
                }
            }
        }
        assert!(failures > 0);
    }

    #[test]
    fn bm_rejects_non_bch() {
        assert!(bm_decode(&hamming(3).unwrap(), &BitVector::zeros(7)).is_err());
    }

    #[test]
    fn encode_distance_property() {
        for c in [hamming(3).unwrap(), bch(4, 3).unwrap(), golay23()] {
            let mut min = usize::MAX;
            for a in 1u64..(1 << c.k()) {
                let w = c.encode(&BitVector::from_u64(c.k(), a)).unwrap().weight();
                min = min.min(w);
            }
            // linearity: distance between codewords = weight of their sum
            assert!(min >= c.d());
        }
        let c = hamming(3).unwrap();
        assert!(c.encode(&BitVector::zeros(4)).unwrap().is_zero());
        assert!(c.encode(&BitVector::zeros(3)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn bm_matches_oracle_on_127(msg_seed in any::<u64>(), errs in proptest::collection::btree_set(0usize..127, 0..=6)) {
            use std::sync::OnceLock;
            static CODE: OnceLock<(ClassicalCode, BchDecoder)> = OnceLock::new();
            let (c, dec) = CODE.get_or_init(|| {
                let c = bch(7, 6).unwrap();
                let d = BchDecoder::new(&c).unwrap();
                (c, d)
            });
            let mut msg = BitVector::zeros(c.k());
            let mut s = msg_seed;
            for i in 0..c.k() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                msg.set(i, s >> 63 == 1);
            }
            let mut r = c.encode(&msg).unwrap();
            for &p in &errs {
                r.flip(p);
            }
            let expect: Vec<usize> = errs.into_iter().collect();
            prop_assert_eq!(dec.decode(&r).unwrap(), Some(expect));
        }
    }
}
