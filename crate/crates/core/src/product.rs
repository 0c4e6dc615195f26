//! Product syndrome extraction `H_C ⊗ H_Q` over a block of `L` logical qubits.
//!
//! An error pattern `ε` is an `n_Q × L` matrix whose column `ℓ` is the error
//! on logical qubit `ℓ`. Data qubit `j` (1-based) sits at row `(j-1) mod n_Q`,
//! column `(j-1) / n_Q`, so `vec(ε)` lists the data qubits in order. The
//! product syndrome is `Ξ = H_Q·ε·H_Cᵀ` and table keys are `vec(Ξᵀ)`, the rows
//! of `Ξ` laid end to end.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::ClassicalCode;
use crate::decoder::BkTree;
use crate::error::{Error, Result};
use crate::gf2::{binomial, BitMatrix, BitVector, Combinations, RowSpace};
use crate::quantum::{CssCode, ErrorType, PauliOp};

/// Upper bound on lookup-table entries.
pub const TABLE_LIMIT: u128 = 100_000_000;

/// How the classical code enters the product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `H_C` is the full parity-check matrix; `L = n`.
    Plain,
    /// `H_C = Pᵀ` of a systematic code; `L = k`. Required for decoding under
    /// syndrome noise and for zero-message localization.
    #[serde(rename = "pt")]
    Systematic,
}

/// An `n_Q × L` error matrix of one Pauli type.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ErrorPattern {
    pub matrix: BitMatrix,
    pub error_type: ErrorType,
}

impl ErrorPattern {
    pub fn zeros(n_q: usize, l: usize, t: ErrorType) -> Self {
        Self {
            matrix: BitMatrix::zeros(n_q, l),
            error_type: t,
        }
    }

    /// Pattern with errors on the given 1-based data qubits.
    pub fn from_data_qubits(n_q: usize, l: usize, t: ErrorType, qubits: &[usize]) -> Result<Self> {
        let mut e = Self::zeros(n_q, l, t);
        for &j in qubits {
            if j == 0 || j > n_q * l {
                return Err(Error::InvalidParameter(format!(
                    "data qubit {j} outside 1..={}",
                    n_q * l
                )));
            }
            e.matrix.flip((j - 1) % n_q, (j - 1) / n_q);
        }
        Ok(e)
    }

    /// Inverse of [`ErrorPattern::vec`].
    pub fn from_vec(v: &BitVector, n_q: usize, l: usize, t: ErrorType) -> Result<Self> {
        Ok(Self {
            matrix: BitMatrix::unvec(v, n_q, l)?,
            error_type: t,
        })
    }

    /// Parse a Pauli string over data qubits, e.g. `X1X10`.
    pub fn parse(s: &str, n_q: usize, l: usize, t: ErrorType) -> Result<Self> {
        let op = PauliOp::parse(s, n_q * l)?;
        let (v, other) = match t {
            ErrorType::X => (&op.x, &op.z),
            ErrorType::Z => (&op.z, &op.x),
        };
        if !other.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "`{s}` mixes Pauli types; expected only {t}"
            )));
        }
        Self::from_vec(v, n_q, l, t)
    }

    pub fn n_q(&self) -> usize {
        self.matrix.rows()
    }

    pub fn l(&self) -> usize {
        self.matrix.cols()
    }

    /// Column stacking, which is the data-qubit ordering.
    pub fn vec(&self) -> BitVector {
        self.matrix.vec()
    }

    pub fn data_qubits(&self) -> Vec<usize> {
        self.vec().iter_ones().map(|i| i + 1).collect()
    }

    pub fn weight(&self) -> usize {
        self.matrix.weight()
    }

    pub fn column(&self, l: usize) -> BitVector {
        self.matrix.column(l)
    }

    pub fn column_weights(&self) -> Vec<usize> {
        (0..self.l()).map(|l| self.column(l).weight()).collect()
    }

    /// Number of nonzero columns, `colwt(ε)`.
    pub fn colwt(&self) -> usize {
        self.column_weights().iter().filter(|&&w| w > 0).count()
    }

    /// 0-based indices of the nonzero columns.
    pub fn nonzero_columns(&self) -> Vec<usize> {
        self.column_weights()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0)
            .map(|(l, _)| l)
            .collect()
    }

    pub fn xor(&self, other: &ErrorPattern) -> ErrorPattern {
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            let r = m.row(i).xor(&other.matrix.row(i));
            m.set_row(i, &r);
        }
        ErrorPattern {
            matrix: m,
            error_type: self.error_type,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn to_pauli(&self) -> PauliOp {
        PauliOp::single(self.error_type, self.vec())
    }
}

/// Pauli string over the data qubits, `I` for the identity.
impl fmt::Display for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_pauli())
    }
}

impl fmt::Debug for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ErrorPattern({self})")
    }
}

/// `Ξ = H_Q·ε·H_Cᵀ`, an `m × R` matrix with one row per quantum check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSyndrome {
    pub matrix: BitMatrix,
}

impl ProductSyndrome {
    /// `vec(Ξᵀ)`: row `i` of `Ξ` occupies bits `i·R .. (i+1)·R`.
    pub fn flattened(&self) -> BitVector {
        self.matrix.flatten_rows()
    }

    /// `vec(Ξ)`, equal to `(H_C ⊗ H_Q)·vec(ε)`.
    pub fn column_stacked(&self) -> BitVector {
        self.matrix.vec()
    }

    pub fn from_flattened(v: &BitVector, m: usize, r: usize) -> Result<Self> {
        Ok(Self {
            matrix: BitMatrix::unflatten_rows(v, m, r)?,
        })
    }

    pub fn row(&self, i: usize) -> BitVector {
        self.matrix.row(i)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// A classical code and a CSS code combined through `H_C ⊗ H_Q`.
#[derive(Debug, Clone)]
pub struct ProductCode {
    c: ClassicalCode,
    q: CssCode,
    mode: Mode,
    error_type: ErrorType,
    t_c: usize,
    t_q: usize,
    t_src: usize,
    h_c: BitMatrix,
    stabilizers: RowSpace,
}

impl ProductCode {
    /// Radii default to the correction radii of the two codes and `t_src = 0`.
    pub fn new(c: ClassicalCode, q: CssCode, mode: Mode, error_type: ErrorType) -> Result<Self> {
        let h_c = match mode {
            Mode::Plain => c.parity_check().clone(),
            Mode::Systematic => c.parity_transpose()?,
        };
        if c.d() > 0 && q.d() > 0 && c.d() < q.d() {
            return Err(Error::InvalidParameter(format!(
                "classical distance {} is below quantum distance {}",
                c.d(),
                q.d()
            )));
        }
        let stabilizers = RowSpace::new(q.stabilizer_matrix(error_type));
        Ok(Self {
            t_c: c.t(),
            t_q: q.t(),
            t_src: 0,
            c,
            q,
            mode,
            error_type,
            h_c,
            stabilizers,
        })
    }

    /// Use a smaller classical radius than the code's `t`.
    pub fn with_t_c(mut self, t_c: usize) -> Result<Self> {
        if t_c > self.c.t() {
            return Err(Error::InvalidParameter(format!(
                "t_C={t_c} exceeds the correction radius {} of {}",
                self.c.t(),
                self.c.id()
            )));
        }
        if self.t_src > t_c {
            return Err(Error::InvalidParameter(format!("t_src={} exceeds t_C={t_c}", self.t_src)));
        }
        self.t_c = t_c;
        Ok(self)
    }

    pub fn with_t_q(mut self, t_q: usize) -> Result<Self> {
        if t_q > self.q.t() {
            return Err(Error::InvalidParameter(format!(
                "t_Q={t_q} exceeds the correction radius {} of {}",
                self.q.t(),
                self.q.id()
            )));
        }
        self.t_q = t_q;
        Ok(self)
    }

    pub fn with_t_src(mut self, t_src: usize) -> Result<Self> {
        if t_src > self.t_c {
            return Err(Error::InvalidParameter(format!("t_src={t_src} exceeds t_C={}", self.t_c)));
        }
        self.t_src = t_src;
        Ok(self)
    }

    /// Column budget of class 𝔼: `t_src` once a source budget is set, so the
    /// remaining `t_C - t_src` of classical radius absorbs syndrome flips,
    /// and `t_C` otherwise.
    pub fn table_columns(&self) -> usize {
        if self.t_src > 0 {
            self.t_src
        } else {
            self.t_c
        }
    }

    pub fn classical(&self) -> &ClassicalCode {
        &self.c
    }

    pub fn quantum(&self) -> &CssCode {
        &self.q
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn error_type(&self) -> ErrorType {
        self.error_type
    }

    pub fn t_c(&self) -> usize {
        self.t_c
    }

    pub fn t_q(&self) -> usize {
        self.t_q
    }

    pub fn t_src(&self) -> usize {
        self.t_src
    }

    /// Logical qubits in the block.
    pub fn l(&self) -> usize {
        self.h_c.cols()
    }

    /// Classical checks, the number of columns of `Ξ`.
    pub fn r(&self) -> usize {
        self.h_c.rows()
    }

    pub fn n_q(&self) -> usize {
        self.q.n()
    }

    /// Quantum checks of the relevant type, the number of rows of `Ξ`.
    pub fn m(&self) -> usize {
        self.h_q().rows()
    }

    pub fn h_c(&self) -> &BitMatrix {
        &self.h_c
    }

    pub fn h_q(&self) -> &BitMatrix {
        self.q.check_matrix(self.error_type)
    }

    pub fn classical_id(&self) -> String {
        match self.mode {
            Mode::Plain => self.c.id(),
            Mode::Systematic => format!("{}/pt", self.c.id()),
        }
    }

    pub fn zero_pattern(&self) -> ErrorPattern {
        ErrorPattern::zeros(self.n_q(), self.l(), self.error_type)
    }

    /// `H_C ⊗ H_Q` for the configured error type.
    pub fn product_parity_check(&self) -> Result<BitMatrix> {
        self.h_c.kron(self.h_q())
    }

    fn check_shape(&self, e: &ErrorPattern) -> Result<()> {
        if e.matrix.shape() != (self.n_q(), self.l()) {
            return Err(Error::dims(
                "error pattern",
                e.matrix.shape(),
                (self.n_q(), self.l()),
            ));
        }
        Ok(())
    }

    pub fn extract_syndrome(&self, e: &ErrorPattern) -> Result<ProductSyndrome> {
        self.check_shape(e)?;
        let left = self.h_q().mul(&e.matrix)?;
        Ok(ProductSyndrome {
            matrix: left.mul(&self.h_c.transpose())?,
        })
    }

    /// Every column has weight ≤ `t_Q` and at most [`table_columns`](Self::table_columns)
    /// columns are nonzero.
    pub fn in_class_e(&self, e: &ErrorPattern) -> bool {
        let w = e.column_weights();
        w.iter().all(|&x| x <= self.t_q) && w.iter().filter(|&&x| x > 0).count() <= self.table_columns()
    }

    /// Every column has weight below `d_Q` and at most `t_C` columns are nonzero.
    pub fn in_class_d(&self, e: &ErrorPattern) -> bool {
        let w = e.column_weights();
        w.iter().all(|&x| x < self.q.d()) && w.iter().filter(|&&x| x > 0).count() <= self.t_c
    }

    /// Rows of `H_Q·ε` are classical codewords and columns of `ε·H_Cᵀ` have
    /// zero quantum syndrome.
    pub fn is_normalizer_element(&self, e: &ErrorPattern) -> Result<bool> {
        self.check_shape(e)?;
        let hq_e = self.h_q().mul(&e.matrix)?;
        let rows_ok = self.h_c.mul(&hq_e.transpose())?.is_zero();
        let e_hc = e.matrix.mul(&self.h_c.transpose())?;
        let cols_ok = self.h_q().mul(&e_hc)?.is_zero();
        Ok(rows_ok && cols_ok)
    }

    /// Every column of `a ⊕ b` is a stabilizer of the quantum code, so the
    /// two patterns act identically on the encoded block.
    pub fn stabilizer_equivalent(&self, a: &ErrorPattern, b: &ErrorPattern) -> bool {
        let d = a.xor(b);
        (0..self.l()).all(|l| self.stabilizers.contains(&d.column(l)))
    }

    /// Column generators `e_ℓ ⊗ η` followed by row generators `g ⊗ E_q`.
    ///
    /// This set spans the normalizer but is not independent.
    pub fn normalizer_generators(&self) -> Vec<ErrorPattern> {
        let mut out = Vec::new();
        let etas = self.h_q().nullspace();
        for l in 0..self.l() {
            for eta in etas.row_iter() {
                let mut e = self.zero_pattern();
                for q in eta.iter_ones() {
                    e.matrix.set(q, l, true);
                }
                out.push(e);
            }
        }
        let gs = self.h_c.nullspace();
        for g in gs.row_iter() {
            for q in 0..self.n_q() {
                let mut e = self.zero_pattern();
                e.matrix.set_row(q, &g);
                out.push(e);
            }
        }
        out
    }

    /// `g ⊗ v`: the outer product `v·g` as an error pattern, for a classical
    /// word `g` of length `L` and a quantum pattern `v` of length `n_Q`.
    pub fn outer_pattern(&self, g: &BitVector, v: &BitVector) -> Result<ErrorPattern> {
        if g.len() != self.l() || v.len() != self.n_q() {
            return Err(Error::dims("outer_pattern", (v.len(), 1), (1, g.len())));
        }
        let mut e = self.zero_pattern();
        for q in v.iter_ones() {
            e.matrix.set_row(q, g);
        }
        Ok(e)
    }

    /// `|𝔼| = Σ_{c ≤ t_C} C(L, c)·(Σ_{1 ≤ w ≤ t_Q} C(n_Q, w))^c`, counting the
    /// zero pattern.
    pub fn class_e_size(&self) -> u128 {
        let per_col: u128 = (1..=self.t_q).map(|w| binomial(self.n_q(), w)).sum();
        (0..=self.table_columns())
            .map(|c| {
                binomial(self.l(), c).saturating_mul(per_col.checked_pow(c as u32).unwrap_or(u128::MAX))
            })
            .fold(0u128, |a, b| a.saturating_add(b))
    }

    /// Flattened key of each single-column pattern at each logical qubit.
    fn column_keys(&self, columns: &[Vec<usize>]) -> Vec<Vec<BitVector>> {
        let r = self.r();
        let key_len = self.m() * r;
        let sigmas: Vec<BitVector> = columns
            .iter()
            .map(|p| {
                self.h_q()
                    .mul_vec(&BitVector::from_support(self.n_q(), p))
                    .expect("length n_Q")
            })
            .collect();
        (0..self.l())
            .map(|l| {
                let theta = self.h_c.column(l);
                sigmas
                    .iter()
                    .map(|s| {
                        let mut key = BitVector::zeros(key_len);
                        for i in s.iter_ones() {
                            for c in theta.iter_ones() {
                                key.set(i * r + c, true);
                            }
                        }
                        key
                    })
                    .collect()
            })
            .collect()
    }

    /// Enumerate 𝔼 and index every pattern by its flattened syndrome.
    ///
    /// Two patterns with one syndrome must differ by a stabilizer on every
    /// logical qubit; anything else is reported as [`Error::Conflict`]. Order
    /// of enumeration: by number of nonzero columns, then column combination,
    /// then per-column pattern (weight, then support), first column slowest.
    pub fn build_lookup_table(&self) -> Result<LookupTable> {
        let estimate = self.class_e_size();
        if estimate > TABLE_LIMIT {
            return Err(Error::TableTooLarge {
                estimate,
                limit: TABLE_LIMIT,
            });
        }
        let columns: Vec<Vec<usize>> = (1..=self.t_q)
            .flat_map(|w| Combinations::new(self.n_q(), w))
            .collect();
        let keys = self.column_keys(&columns);
        let key_len = self.m() * self.r();
        let p = columns.len();

        type Raw = (BitVector, Vec<(u32, u32)>);
        let mut raw: Vec<Raw> = vec![(BitVector::zeros(key_len), Vec::new())];
        for c in 1..=self.table_columns().min(self.l()) {
            let combos: Vec<Vec<usize>> = Combinations::new(self.l(), c).collect();
            let chunk: Vec<Vec<Raw>> = combos
                .par_iter()
                .map(|cols| {
                    let mut out = Vec::with_capacity(p.pow(c as u32));
                    let mut idx = vec![0usize; c];
                    loop {
                        let mut key = BitVector::zeros(key_len);
                        for (&l, &pi) in cols.iter().zip(&idx) {
                            key.xor_assign(&keys[l][pi]);
                        }
                        let cells = cols
                            .iter()
                            .zip(&idx)
                            .map(|(&l, &pi)| (l as u32, pi as u32))
                            .collect();
                        out.push((key, cells));
                        // odometer, last column fastest
                        let mut pos = c;
                        loop {
                            if pos == 0 {
                                return out;
                            }
                            pos -= 1;
                            idx[pos] += 1;
                            if idx[pos] < p {
                                break;
                            }
                            idx[pos] = 0;
                        }
                    }
                })
                .collect();
            raw.extend(chunk.into_iter().flatten());
        }

        let to_pattern = |cells: &[(u32, u32)]| {
            let mut e = self.zero_pattern();
            for &(l, pi) in cells {
                for &q in &columns[pi as usize] {
                    e.matrix.set(q, l as usize, true);
                }
            }
            e
        };

        let mut index: HashMap<BitVector, usize> = HashMap::with_capacity(raw.len());
        let mut kept: Vec<(BitVector, ErrorPattern)> = Vec::new();
        for (key, cells) in raw {
            match index.get(&key) {
                None => {
                    index.insert(key.clone(), kept.len());
                    kept.push((key, to_pattern(&cells)));
                }
                Some(&i) => {
                    let e = to_pattern(&cells);
                    if !self.stabilizer_equivalent(&kept[i].1, &e) {
                        return Err(Error::Conflict {
                            syndrome: key.to_string(),
                            first: kept[i].1.to_string(),
                            second: e.to_string(),
                        });
                    }
                }
            }
        }
        Ok(LookupTable::from_entries(self.table_header(), kept, estimate as usize))
    }

    pub fn table_header(&self) -> TableHeader {
        TableHeader {
            classical: self.classical_id(),
            quantum: self.q.id(),
            error_type: self.error_type,
            t_c: self.t_c,
            t_q: self.t_q,
            t_src: self.t_src,
            n_q: self.n_q(),
            l: self.l(),
            m: self.m(),
            r: self.r(),
        }
    }

    /// `G₁ᵀH_C ⊗ G₂ᵀH_Q`: the product checks re-encoded by two classical
    /// channel codes with `k₁ = R` and `k₂ = m`.
    pub fn channel_encode(&self, g1: &ClassicalCode, g2: &ClassicalCode) -> Result<BitMatrix> {
        self.check_channel_codes(g1, g2)?;
        let left = g1.generator().transpose().mul(&self.h_c)?;
        let right = g2.generator().transpose().mul(self.h_q())?;
        left.kron(&right)
    }

    fn check_channel_codes(&self, g1: &ClassicalCode, g2: &ClassicalCode) -> Result<()> {
        if g1.k() != self.r() {
            return Err(Error::dims("channel code 1", (g1.k(), g1.n()), (self.r(), self.l())));
        }
        if g2.k() != self.m() {
            return Err(Error::dims("channel code 2", (g2.k(), g2.n()), (self.m(), self.n_q())));
        }
        Ok(())
    }

    /// `G₂ᵀ·Ξ·G₁`, an `n₂ × n₁` array. With `G = [P | I]` its blocks are
    /// `[[P₂ᵀΞP₁, P₂ᵀΞ], [ΞP₁, Ξ]]`, the top-left block being the checks on
    /// checks.
    pub fn channel_layout(
        &self,
        xi: &ProductSyndrome,
        g1: &ClassicalCode,
        g2: &ClassicalCode,
    ) -> Result<BitMatrix> {
        self.check_channel_codes(g1, g2)?;
        g2.generator().transpose().mul(&xi.matrix)?.mul(g1.generator())
    }
}

/// Parameters recorded at the top of a lookup-table file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableHeader {
    pub classical: String,
    pub quantum: String,
    pub error_type: ErrorType,
    pub t_c: usize,
    pub t_q: usize,
    pub t_src: usize,
    pub n_q: usize,
    pub l: usize,
    pub m: usize,
    pub r: usize,
}

impl TableHeader {
    pub fn key_bits(&self) -> usize {
        self.m * self.r
    }
}

/// Flattened product syndrome → correction, sorted by key.
#[derive(Debug)]
pub struct LookupTable {
    pub header: TableHeader,
    keys: Vec<BitVector>,
    values: Vec<ErrorPattern>,
    index: HashMap<BitVector, usize>,
    enumerated: usize,
    bk: OnceLock<BkTree>,
}

const TABLE_MAGIC: &str = "qesc-lookup-table 1";

impl LookupTable {
    fn from_entries(header: TableHeader, mut entries: Vec<(BitVector, ErrorPattern)>, enumerated: usize) -> Self {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let (keys, values): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        Self {
            header,
            keys,
            values,
            index,
            enumerated,
            bk: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Patterns visited while building, including stabilizer-equivalent repeats.
    pub fn enumerated(&self) -> usize {
        self.enumerated
    }

    pub fn keys(&self) -> &[BitVector] {
        &self.keys
    }

    pub fn values(&self) -> &[ErrorPattern] {
        &self.values
    }

    pub fn get(&self, key: &BitVector) -> Option<&ErrorPattern> {
        self.index.get(key).map(|&i| &self.values[i])
    }

    pub fn entry(&self, i: usize) -> (&BitVector, &ErrorPattern) {
        (&self.keys[i], &self.values[i])
    }

    /// BK-tree over the keys, built on first use.
    pub fn bk_index(&self) -> &BkTree {
        self.bk.get_or_init(|| BkTree::build(self.keys.clone()))
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        let h = &self.header;
        writeln!(w, "{TABLE_MAGIC}")?;
        writeln!(w, "classical {}", h.classical)?;
        writeln!(w, "quantum {}", h.quantum)?;
        writeln!(w, "error_type {}", h.error_type)?;
        writeln!(w, "t_c {}", h.t_c)?;
        writeln!(w, "t_q {}", h.t_q)?;
        writeln!(w, "t_src {}", h.t_src)?;
        writeln!(w, "shape {} {} {} {}", h.n_q, h.l, h.m, h.r)?;
        writeln!(w, "key_bits {}", h.key_bits())?;
        writeln!(w, "entries {}", self.len())?;
        for (k, v) in self.keys.iter().zip(&self.values) {
            writeln!(w, "{k} {}", v.vec())?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let mut next = |expect: &str| -> Result<(usize, String)> {
            let (i, line) = lines.next().ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("unexpected end of file, wanted {expect}"),
            })?;
            Ok((i + 1, line?))
        };
        let (ln, magic) = next("header")?;
        if magic != TABLE_MAGIC {
            return Err(Error::Parse {
                line: ln,
                msg: format!("expected `{TABLE_MAGIC}`"),
            });
        }
        let mut field = |name: &str| -> Result<(usize, String)> {
            let (ln, line) = next(name)?;
            let rest = line
                .strip_prefix(name)
                .and_then(|s| s.strip_prefix(' '))
                .ok_or_else(|| Error::Parse {
                    line: ln,
                    msg: format!("expected `{name} …`"),
                })?;
            Ok((ln, rest.to_string()))
        };
        let num = |ln: usize, s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("`{s}` is not a count"),
            })
        };
        let classical = field("classical")?.1;
        let quantum = field("quantum")?.1;
        let (ln, et) = field("error_type")?;
        let error_type: ErrorType = et.parse().map_err(|_| Error::Parse {
            line: ln,
            msg: "bad error type".into(),
        })?;
        let (ln, s) = field("t_c")?;
        let t_c = num(ln, &s)?;
        let (ln, s) = field("t_q")?;
        let t_q = num(ln, &s)?;
        let (ln, s) = field("t_src")?;
        let t_src = num(ln, &s)?;
        let (ln, s) = field("shape")?;
        let dims = s.split(' ').map(|x| num(ln, x)).collect::<Result<Vec<_>>>()?;
        if dims.len() != 4 {
            return Err(Error::Parse {
                line: ln,
                msg: "shape needs n_q l m r".into(),
            });
        }
        let (ln, s) = field("key_bits")?;
        let key_bits = num(ln, &s)?;
        if key_bits != dims[2] * dims[3] {
            return Err(Error::Parse {
                line: ln,
                msg: "key_bits disagrees with shape".into(),
            });
        }
        let (ln, s) = field("entries")?;
        let count = num(ln, &s)?;
        let header = TableHeader {
            classical,
            quantum,
            error_type,
            t_c,
            t_q,
            t_src,
            n_q: dims[0],
            l: dims[1],
            m: dims[2],
            r: dims[3],
        };
        let mut entries = Vec::with_capacity(count);
        for _ in 0..count {
            let (ln, line) = next("entry")?;
            let (k, v) = line.split_once(' ').ok_or_else(|| Error::Parse {
                line: ln,
                msg: "entry must be `key value`".into(),
            })?;
            let bad = |msg: &str| Error::Parse {
                line: ln,
                msg: msg.to_string(),
            };
            let key: BitVector = k.parse().map_err(|_| bad("key is not a bit string"))?;
            let val: BitVector = v.parse().map_err(|_| bad("value is not a bit string"))?;
            if key.len() != key_bits || val.len() != header.n_q * header.l {
                return Err(bad("entry length disagrees with header"));
            }
            entries.push((key, ErrorPattern::from_vec(&val, header.n_q, header.l, error_type)?));
        }
        let len = entries.len();
        let table = Self::from_entries(header, entries, len);
        if table.index.len() != len {
            return Err(Error::Parse {
                line: 0,
                msg: "duplicate keys".into(),
            });
        }
        Ok(table)
    }
}
