//! CNOT syndrome-extraction circuits and Pauli-frame propagation.
//!
//! Data qubits occupy ids `0..data_qubits`; ancillas follow in block order.
//! A circuit detecting X errors uses data→ancilla CNOTs read out in the Z
//! basis. A circuit detecting Z errors uses ancilla→data CNOTs read out in
//! the X basis.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::product::ProductCode;
use crate::quantum::ErrorType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AncillaKind {
    Bare,
    Bell,
    Cat,
}

impl AncillaKind {
    fn for_size(size: usize) -> Self {
        match size {
            1 => AncillaKind::Bare,
            2 => AncillaKind::Bell,
            _ => AncillaKind::Cat,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncillaBlock {
    pub start: usize,
    pub size: usize,
    pub kind: AncillaKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnot {
    pub control: usize,
    pub target: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combine {
    Single,
    Parity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub ancillas: Vec<usize>,
    pub combine: Combine,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndromeCircuit {
    pub data_qubits: usize,
    pub detects: ErrorType,
    pub ancilla_blocks: Vec<AncillaBlock>,
    pub gates: Vec<Cnot>,
    pub measurements: Vec<Measurement>,
}

/// Accumulated X and Z components on every qubit of a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliFrame {
    pub x_errors: BitVector,
    pub z_errors: BitVector,
}

/// Single-qubit Pauli used for fault injection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    X,
    Y,
    Z,
}

impl PauliFrame {
    pub fn new(qubits: usize) -> Self {
        Self {
            x_errors: BitVector::zeros(qubits),
            z_errors: BitVector::zeros(qubits),
        }
    }

    pub fn len(&self) -> usize {
        self.x_errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn apply(&mut self, qubit: usize, fault: Fault) {
        if matches!(fault, Fault::X | Fault::Y) {
            self.x_errors.flip(qubit);
        }
        if matches!(fault, Fault::Z | Fault::Y) {
            self.z_errors.flip(qubit);
        }
    }

    fn cnot(&mut self, g: Cnot) {
        if self.x_errors.get(g.control) {
            self.x_errors.flip(g.target);
        }
        if self.z_errors.get(g.target) {
            self.z_errors.flip(g.control);
        }
    }
}

impl SyndromeCircuit {
    pub fn num_qubits(&self) -> usize {
        self.data_qubits + self.num_ancillas()
    }

    pub fn num_ancillas(&self) -> usize {
        self.ancilla_blocks.iter().map(|b| b.size).sum()
    }

    /// Frame with the data part set from `e` on the detected component.
    pub fn data_frame(&self, e: &BitVector) -> Result<PauliFrame> {
        if e.len() != self.data_qubits {
            return Err(Error::Length { op: "data frame", expected: self.data_qubits, actual: e.len() });
        }
        let mut f = PauliFrame::new(self.num_qubits());
        let target = match self.detects {
            ErrorType::X => &mut f.x_errors,
            ErrorType::Z => &mut f.z_errors,
        };
        for j in e.iter_ones() {
            target.set(j, true);
        }
        Ok(f)
    }

    /// Push the frame through every gate in order.
    pub fn run(&self, frame: &PauliFrame) -> Result<PauliFrame> {
        if frame.len() != self.num_qubits() {
            return Err(Error::Length { op: "pauli frame", expected: self.num_qubits(), actual: frame.len() });
        }
        let mut f = frame.clone();
        for &g in &self.gates {
            f.cnot(g);
        }
        Ok(f)
    }

    /// Measurement outcomes: parity of the detected component over each
    /// measured ancilla set.
    pub fn propagate(&self, frame: &PauliFrame) -> Result<BitVector> {
        let f = self.run(frame)?;
        let read = match self.detects {
            ErrorType::X => &f.x_errors,
            ErrorType::Z => &f.z_errors,
        };
        Ok(BitVector::from_bools(
            self.measurements
                .iter()
                .map(|m| m.ancillas.iter().filter(|&&a| read.get(a)).count() % 2 == 1),
        ))
    }

    /// Data-qubit residual after a single `fault` on `qubit` before any gate.
    pub fn inject_fault(&self, qubit: usize, fault: Fault) -> Result<PauliFrame> {
        if qubit >= self.num_qubits() {
            return Err(Error::InvalidParameter(format!("qubit {qubit} out of range")));
        }
        let mut f = PauliFrame::new(self.num_qubits());
        f.apply(qubit, fault);
        let out = self.run(&f)?;
        Ok(PauliFrame {
            x_errors: out.x_errors.slice(0, self.data_qubits),
            z_errors: out.z_errors.slice(0, self.data_qubits),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "qubits": self.num_qubits(),
            "data_qubits": self.data_qubits,
            "detects": self.detects.to_string(),
            "ancilla_blocks": self.ancilla_blocks,
            "gates": self.gates.iter().map(|g| serde_json::json!({"cx": [g.control, g.target]})).collect::<Vec<_>>(),
            "measurements": self.measurements,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph syndrome {\n  rankdir=LR;\n");
        for d in 0..self.data_qubits {
            let _ = writeln!(s, "  q{d} [label=\"d{}\", shape=circle];", d + 1);
        }
        for (b, block) in self.ancilla_blocks.iter().enumerate() {
            let _ = writeln!(s, "  subgraph cluster_{b} {{\n    label=\"a{}\";", b + 1);
            for a in block.start..block.start + block.size {
                let _ = writeln!(s, "    q{a} [label=\"a{}.{}\", shape=box];", b + 1, a - block.start + 1);
            }
            s.push_str("  }\n");
        }
        for g in &self.gates {
            let _ = writeln!(s, "  q{} -> q{};", g.control, g.target);
        }
        s.push_str("}\n");
        s
    }
}

fn coupling(detects: ErrorType, data: usize, ancilla: usize) -> Cnot {
    match detects {
        ErrorType::X => Cnot { control: data, target: ancilla },
        ErrorType::Z => Cnot { control: ancilla, target: data },
    }
}

/// One bare ancilla per row of `h`, X-detecting.
pub fn build_circuit(h: &BitMatrix) -> SyndromeCircuit {
    build_circuit_for(h, ErrorType::X)
}

/// One bare ancilla per row of `h` with a CNOT for every nonzero entry,
/// scheduled row by row.
pub fn build_circuit_for(h: &BitMatrix, detects: ErrorType) -> SyndromeCircuit {
    let n = h.cols();
    let mut gates = Vec::with_capacity(h.weight());
    let mut blocks = Vec::with_capacity(h.rows());
    let mut measurements = Vec::with_capacity(h.rows());
    for i in 0..h.rows() {
        let a = n + i;
        blocks.push(AncillaBlock { start: a, size: 1, kind: AncillaKind::Bare });
        measurements.push(Measurement { ancillas: vec![a], combine: Combine::Single });
        gates.extend(h.row(i).iter_ones().map(|j| coupling(detects, j, a)));
    }
    SyndromeCircuit { data_qubits: n, detects, ancilla_blocks: blocks, gates, measurements }
}

fn stabilizer_row(pc: &ProductCode, row: usize) -> Result<BitVector> {
    let hq = pc.h_q();
    if row >= hq.rows() {
        return Err(Error::InvalidParameter(format!(
            "stabilizer row {row} out of range 0..{}",
            hq.rows()
        )));
    }
    let s = hq.row(row);
    if s.is_zero() {
        return Err(Error::InvalidParameter(format!("stabilizer row {row} is empty")));
    }
    Ok(s)
}

/// Bare circuit of `H_C ⊗ s` for one quantum check row `s`.
pub fn build_stabilizer_circuit(pc: &ProductCode, row: usize) -> Result<SyndromeCircuit> {
    let s = stabilizer_row(pc, row)?;
    let h = pc.h_c().kron(&s.as_matrix())?;
    Ok(build_circuit_for(&h, pc.error_type()))
}

/// Bare circuit of the full `H_C ⊗ H_Q`.
pub fn build_product_circuit(pc: &ProductCode) -> Result<SyndromeCircuit> {
    Ok(build_circuit_for(&pc.product_parity_check()?, pc.error_type()))
}

/// Shor-style layout for one quantum check row of weight `w`: each classical
/// parity row gets a `w`-qubit entangled block, the `j`-th qubit of the
/// check's support in every coupled logical qubit talks to block qubit `j`,
/// and the syndrome bit is the block parity.
pub fn build_shor_ft_circuit(pc: &ProductCode, row: usize) -> Result<SyndromeCircuit> {
    let s = stabilizer_row(pc, row)?;
    let support = s.support();
    let w = support.len();
    let (n_q, l) = (pc.n_q(), pc.l());
    let h_c = pc.h_c();
    let detects = pc.error_type();
    let data = n_q * l;
    let mut blocks = Vec::with_capacity(h_c.rows());
    let mut measurements = Vec::with_capacity(h_c.rows());
    let mut gates = Vec::new();
    for i in 0..h_c.rows() {
        let start = data + i * w;
        blocks.push(AncillaBlock { start, size: w, kind: AncillaKind::for_size(w) });
        measurements.push(Measurement {
            ancillas: (start..start + w).collect(),
            combine: if w == 1 { Combine::Single } else { Combine::Parity },
        });
        for ell in h_c.row(i).iter_ones() {
            for (pos, &q) in support.iter().enumerate() {
                gates.push(coupling(detects, ell * n_q + q, start + pos));
            }
        }
    }
    Ok(SyndromeCircuit { data_qubits: data, detects, ancilla_blocks: blocks, gates, measurements })
}

/// Largest residual data weight on any single logical qubit of size `n_q`,
/// counting a qubit once if it carries X, Z or both.
pub fn max_weight_per_logical(frame: &PauliFrame, n_q: usize) -> usize {
    // x | z
    let mut hit = frame.x_errors.xor(&frame.z_errors);
    hit.xor_assign(&frame.x_errors.and(&frame.z_errors));
    let mut best = 0;
    let mut l = 0;
    while l * n_q < hit.len() {
        best = best.max(hit.slice(l * n_q, (l + 1) * n_q).weight());
        l += 1;
    }
    best
}

/// `[1 0 ⋯ 0 1]`, the end-to-end parity check of an `n`-qubit cat state.
pub fn verification_matrix(n: usize) -> Result<BitMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("verification needs n >= 2, got {n}")));
    }
    let mut v = BitMatrix::zeros(1, n);
    v.set(0, 0, true);
    v.set(0, n - 1, true);
    Ok(v)
}
