//! CSS stabilizer codes held as a pair of binary check matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Combinations, RowSpace};

/// Which Pauli component an error pattern carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErrorType {
    X,
    Z,
}

impl ErrorType {
    pub fn letter(self) -> char {
        match self {
            ErrorType::X => 'X',
            ErrorType::Z => 'Z',
        }
    }
}

impl fmt::Display for ErrorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for ErrorType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(ErrorType::X),
            "Z" | "z" => Ok(ErrorType::Z),
            other => Err(Error::InvalidParameter(format!("error type must be X or Z, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantumKind {
    Rep3,
    Steane,
    Color17,
    Golay,
    Custom,
}

/// An `[[n, k, d]]` CSS code. `hz` detects X errors and `hx` detects Z errors.
#[derive(Debug, Clone)]
pub struct CssCode {
    n: usize,
    k: usize,
    d: usize,
    hx: BitMatrix,
    hz: BitMatrix,
    kind: QuantumKind,
}

impl CssCode {
    /// CSS code from its two check matrices. `d` may be 0 when unknown.
    pub fn new(hx: BitMatrix, hz: BitMatrix, d: usize) -> Result<Self> {
        Self::with_kind(hx, hz, d, QuantumKind::Custom)
    }

    fn with_kind(hx: BitMatrix, hz: BitMatrix, d: usize, kind: QuantumKind) -> Result<Self> {
        if hx.cols() != hz.cols() {
            return Err(Error::dims("css", hx.shape(), hz.shape()));
        }
        if !hx.mul(&hz.transpose())?.is_zero() {
            return Err(Error::InvalidParameter(
                "X and Z checks do not commute (HX·HZᵀ ≠ 0)".into(),
            ));
        }
        let n = hx.cols();
        let used = hx.rank() + hz.rank();
        if used > n {
            return Err(Error::InvalidParameter("check matrices exceed n".into()));
        }
        Ok(Self {
            n,
            k: n - used,
            d,
            hx,
            hz,
            kind,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Correction radius `⌊(d-1)/2⌋`.
    pub fn t(&self) -> usize {
        self.d.saturating_sub(1) / 2
    }

    pub fn kind(&self) -> QuantumKind {
        self.kind
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn id(&self) -> String {
        match self.kind {
            QuantumKind::Rep3 => "rep3".into(),
            QuantumKind::Steane => "steane".into(),
            QuantumKind::Color17 => "color17".into(),
            QuantumKind::Golay => "golay".into(),
            QuantumKind::Custom => format!("custom:{}:{}", self.n, self.k),
        }
    }

    /// Checks that see errors of type `t`: `HZ` for X errors, `HX` for Z errors.
    pub fn check_matrix(&self, t: ErrorType) -> &BitMatrix {
        match t {
            ErrorType::X => &self.hz,
            ErrorType::Z => &self.hx,
        }
    }

    /// Stabilizers of the same Pauli type as `t`, i.e. the errors of type `t`
    /// that act trivially on the code space.
    pub fn stabilizer_matrix(&self, t: ErrorType) -> &BitMatrix {
        match t {
            ErrorType::X => &self.hx,
            ErrorType::Z => &self.hz,
        }
    }

    /// Same code with both check matrices in reduced row-echelon form.
    pub fn row_reduced(&self) -> CssCode {
        let strip = |m: &BitMatrix| {
            let r = m.rref();
            r.matrix.select_rows(&(0..r.rank).collect::<Vec<_>>())
        };
        CssCode {
            hx: strip(&self.hx),
            hz: strip(&self.hz),
            ..self.clone()
        }
    }

    /// `(Σ_X, Σ_Z) = (HZ·uᵀ, HX·vᵀ)` for `e = X^u Z^v`.
    pub fn q_syndrome(&self, e: &PauliOp) -> Result<(BitVector, BitVector)> {
        if e.n() != self.n {
            return Err(Error::Length {
                op: "q_syndrome",
                expected: self.n,
                actual: e.n(),
            });
        }
        Ok((self.hz.mul_vec(&e.x)?, self.hx.mul_vec(&e.z)?))
    }

    /// Kernel bases of `HZ` (as X operators) followed by `HX` (as Z operators).
    ///
    /// Each basis comes from the reduced echelon form of the check matrix, so
    /// every non-pivot qubit appears in exactly one generator of its type.
    pub fn normalizer_generators(&self) -> Vec<PauliOp> {
        let mut out = self.normalizer_basis(ErrorType::X);
        out.extend(self.normalizer_basis(ErrorType::Z));
        out
    }

    /// Generators of one error type.
    pub fn normalizer_basis(&self, t: ErrorType) -> Vec<PauliOp> {
        self.check_matrix(t)
            .nullspace()
            .row_iter()
            .map(|v| PauliOp::single(t, v))
            .collect()
    }

    /// Whether an error of type `t` acts as a stabilizer (is in the row space
    /// of the same-type checks).
    pub fn is_stabilizer(&self, t: ErrorType, v: &BitVector) -> bool {
        self.stabilizer_matrix(t).row_space_contains(v)
    }

    /// Smallest weight of an undetectable non-stabilizer error of type `t`,
    /// searched up to `max_weight`.
    pub fn min_logical_weight(&self, t: ErrorType, max_weight: usize) -> Option<usize> {
        let check = self.check_matrix(t);
        let stab = RowSpace::new(self.stabilizer_matrix(t));
        let cols: Vec<BitVector> = (0..self.n).map(|j| check.column(j)).collect();
        for w in 1..=max_weight.min(self.n) {
            let found = Combinations::new(self.n, w).par_bridge().any(|comb| {
                let mut s = BitVector::zeros(check.rows());
                for &j in &comb {
                    s.xor_assign(&cols[j]);
                }
                s.is_zero() && !stab.contains(&BitVector::from_support(self.n, &comb))
            });
            if found {
                return Some(w);
            }
        }
        None
    }

    /// Build the degeneracy-aware table of all type-`t` errors of weight
    /// `1..=max_wt`.
    pub fn build_coset_table(&self, t: ErrorType, max_wt: usize) -> Result<CosetTable> {
        build_coset_table(self, t, max_wt)
    }
}

impl fmt::Display for CssCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d > 0 {
            write!(f, "[[{}, {}, {}]]", self.n, self.k, self.d)
        } else {
            write!(f, "[[{}, {}]]", self.n, self.k)
        }
    }
}

/// Three-qubit bit-flip code, checks `ZZI` and `ZIZ` only.
///
/// The recorded distance 3 is the bit-flip distance; phase flips are not
/// detected at all.
pub fn rep3() -> CssCode {
    let hz = BitMatrix::from_strs(&["110", "101"]).expect("literal");
    CssCode::with_kind(BitMatrix::zeros(0, 3), hz, 3, QuantumKind::Rep3).expect("valid")
}

/// `[[7, 1, 3]]` Steane code, identical X and Z checks.
pub fn steane() -> CssCode {
    let h = BitMatrix::from_strs(&["1001011", "0101101", "0011110"]).expect("literal");
    CssCode::with_kind(h.clone(), h, 3, QuantumKind::Steane).expect("valid")
}

/// `[[17, 1, 5]]` planar color code. Qubits are numbered left to right, top
/// to bottom on the planar layout; seven weight-4 faces and one weight-8 face.
pub fn color17() -> CssCode {
    let h = BitMatrix::from_strs(&[
        "11110000000000000",
        "10101100000000000",
        "00001100110000000",
        "00000011001100000",
        "00000000110011000",
        "00000000001100110",
        "00000001000100011",
        "00110110011001100",
    ])
    .expect("literal");
    CssCode::with_kind(h.clone(), h, 5, QuantumKind::Color17).expect("valid")
}

/// `[[23, 1, 7]]` code with both checks equal to the Golay parity check.
pub fn golay_css() -> CssCode {
    let h = classical::golay23().parity_check().clone();
    CssCode::with_kind(h.clone(), h, 7, QuantumKind::Golay).expect("valid")
}

/// Pauli operator `X^x Z^z` up to phase.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    pub x: BitVector,
    pub z: BitVector,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
        }
    }

    /// Pure X or pure Z operator with the given support vector.
    pub fn single(t: ErrorType, v: BitVector) -> Self {
        let zero = BitVector::zeros(v.len());
        match t {
            ErrorType::X => Self { x: v, z: zero },
            ErrorType::Z => Self { x: zero, z: v },
        }
    }

    /// Pure operator of type `t` on the given 0-based qubits.
    pub fn from_support(t: ErrorType, n: usize, qubits: &[usize]) -> Self {
        Self::single(t, BitVector::from_support(n, qubits))
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn weight(&self) -> usize {
        let mut u = self.x.clone();
        for i in self.z.iter_ones() {
            u.set(i, true);
        }
        u.weight()
    }

    /// Symplectic inner product is zero.
    pub fn commutes_with(&self, other: &PauliOp) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    pub fn mul(&self, other: &PauliOp) -> PauliOp {
        PauliOp {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        }
    }

    /// Parse strings such as `X1X4Z2Y7` (1-based qubits) or `I`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let mut op = PauliOp::identity(n);
        if s == "I" {
            return Ok(op);
        }
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let letter = bytes[i] as char;
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let q: usize = s[start..i].parse().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("expected qubit index after `{letter}` in `{s}`"),
            })?;
            if q == 0 || q > n {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("qubit {q} out of range 1..={n}"),
                });
            }
            match letter {
                'X' => op.x.flip(q - 1),
                'Z' => op.z.flip(q - 1),
                'Y' => {
                    op.x.flip(q - 1);
                    op.z.flip(q - 1);
                }
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        msg: format!("unknown Pauli letter `{other}`"),
                    })
                }
            }
        }
        Ok(op)
    }
}

/// Tensor-factor string with 1-based qubit labels, e.g. `X1X4X6X7`.
impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for i in 0..self.n() {
            let c = match (self.x.get(i), self.z.get(i)) {
                (false, false) => continue,
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}{}", i + 1)?;
            any = true;
        }
        if !any {
            f.write_str("I")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({self})")
    }
}

#[derive(Debug, Clone)]
pub struct CosetEntry {
    /// First member in (weight, lexicographic support) order.
    pub representative: BitVector,
    /// Every enumerated pattern with this syndrome, in enumeration order.
    pub members: Vec<BitVector>,
}

/// Syndrome → correction for all errors of one type up to a weight bound.
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub error_type: ErrorType,
    pub max_weight: usize,
    pub patterns: usize,
    pub entries: BTreeMap<BitVector, CosetEntry>,
}

impl CosetTable {
    pub fn distinct_syndromes(&self) -> usize {
        self.entries.len()
    }

    pub fn correction(&self, syndrome: &BitVector) -> Option<&BitVector> {
        self.entries.get(syndrome).map(|e| &e.representative)
    }
}

pub fn build_coset_table(q: &CssCode, t: ErrorType, max_wt: usize) -> Result<CosetTable> {
    let n = q.n();
    if max_wt > 3 && n > 23 {
        return Err(Error::TableTooLarge {
            estimate: classical::ball_size(n, max_wt),
            limit: classical::ball_size(23, 3),
        });
    }
    let check = q.check_matrix(t);
    let stab = RowSpace::new(q.stabilizer_matrix(t));
    let patterns: Vec<Vec<usize>> = (1..=max_wt.min(n))
        .flat_map(|w| Combinations::new(n, w))
        .collect();
    let keyed: Vec<(BitVector, BitVector)> = patterns
        .par_iter()
        .map(|p| {
            let v = BitVector::from_support(n, p);
            (check.mul_vec(&v).expect("length n"), v)
        })
        .collect();
    let mut entries: BTreeMap<BitVector, CosetEntry> = BTreeMap::new();
    for (syn, v) in keyed {
        match entries.get_mut(&syn) {
            None => {
                entries.insert(
                    syn,
                    CosetEntry {
                        representative: v.clone(),
                        members: vec![v],
                    },
                );
            }
            Some(entry) => {
                if !stab.contains(&entry.representative.xor(&v)) {
                    return Err(Error::Conflict {
                        syndrome: syn.to_string(),
                        first: PauliOp::single(t, entry.representative.clone()).to_string(),
                        second: PauliOp::single(t, v).to_string(),
                    });
                }
                entry.members.push(v);
            }
        }
    }
    Ok(CosetTable {
        error_type: t,
        max_weight: max_wt,
        patterns: patterns.len(),
        entries,
    })
}
