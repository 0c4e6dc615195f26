//! Closed-form failure probabilities, syndrome-qubit overheads and entropy
//! bounds for product syndrome extraction under independent Pauli noise.

use serde::{Deserialize, Serialize};

use crate::classical::{bch, bch_generator_degree, ClassicalCode};
use crate::error::{Error, Result};
use crate::product::ProductCode;
use crate::quantum::{color17, golay_css, steane, CssCode};

/// Smallest probability reported; anything below prints as this value.
pub const PROBABILITY_FLOOR: f64 = 1e-16;

/// Independent error rates: data qubits (`p`), two-qubit encoding gates
/// (`p_e`) and the measured-syndrome channel (`p_m`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    pub p: f64,
    #[serde(default)]
    pub p_e: f64,
    #[serde(default)]
    pub p_m: f64,
}

impl ErrorModel {
    pub fn new(p: f64, p_e: f64, p_m: f64) -> Result<Self> {
        let m = Self { p, p_e, p_m };
        m.validate()?;
        Ok(m)
    }

    pub fn data_only(p: f64) -> Result<Self> {
        Self::new(p, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("p_e", self.p_e), ("p_m", self.p_m)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name}={v} is not a probability")));
            }
        }
        Ok(())
    }
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// `P(X > t)` for `X ~ Binomial(n, p)`, summed term by term in log space.
pub fn binomial_tail(p: f64, n: usize, t: usize) -> f64 {
    if t >= n || p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let mut sum = 0.0;
    for tau in t + 1..=n {
        sum += (ln_binomial(n, tau) + tau as f64 * lp + (n - tau) as f64 * lq).exp();
    }
    sum.min(1.0)
}

/// Probability that a logical qubit sees more than `t` errors among `n`.
pub fn p_col_exceeds(p: f64, n: usize, t: usize) -> f64 {
    binomial_tail(p, n, t)
}

/// Probability that a logical qubit sees at least `d` errors.
pub fn p_col_exceeds_distance(p: f64, n: usize, d: usize) -> f64 {
    if d == 0 {
        return 1.0;
    }
    binomial_tail(p, n, d - 1)
}

/// `1 - (1-p)^n`, the chance a logical qubit has any error.
pub fn p_logical(p: f64, n: usize) -> f64 {
    -((n as f64) * (-p).ln_1p()).exp_m1()
}

/// Probability that more than `t_c` of `l` logical qubits are hit.
pub fn p_block_exceeds(p_l: f64, l: usize, t_c: usize) -> f64 {
    binomial_tail(p_l, l, t_c)
}

/// Whether failure is counted against correction (`t_Q`) or detection (`d_Q`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureMode {
    Correct,
    Localize,
}

/// `P_F = L·P₁ + P₂ − L·P₁·P₂` with `P₁` the per-logical-qubit excess
/// probability and `P₂` the block excess probability.
pub fn failure_rate(p1: f64, p: f64, n_q: usize, l: usize, t_c: usize) -> f64 {
    let p2 = p_block_exceeds(p_logical(p, n_q), l, t_c);
    let lp1 = l as f64 * p1;
    (lp1 + p2 - lp1 * p2).min(1.0)
}

pub fn failure_probability(model: &ErrorModel, pc: &ProductCode, mode: FailureMode) -> f64 {
    let q = pc.quantum();
    let p1 = match mode {
        FailureMode::Correct => p_col_exceeds(model.p, q.n(), pc.t_q()),
        FailureMode::Localize => p_col_exceeds_distance(model.p, q.n(), q.d()),
    };
    failure_rate(p1, model.p, q.n(), pc.l(), pc.table_columns())
}

/// Render with one significant figure as `2e-05`, flooring at `1e-16`.
pub fn format_probability(x: f64) -> String {
    let x = if x < PROBABILITY_FLOOR { PROBABILITY_FLOOR } else { x };
    let mut e = x.log10().floor() as i32;
    let mut m = (x / 10f64.powi(e)).round() as i64;
    if m == 10 {
        m = 1;
        e += 1;
    }
    let sign = if e < 0 { '-' } else { '+' };
    format!("{m}e{sign}{:02}", e.abs())
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub code: String,
    pub n: usize,
    pub t: usize,
    pub d: usize,
    pub p: f64,
    pub exceeds_t: f64,
    pub exceeds_d: f64,
}

/// Per-logical-qubit excess probabilities for the Steane, 17-qubit color and
/// Golay codes at `p ∈ {1e-3, 1e-4, 1e-5}`.
pub fn table1() -> Vec<Table1Row> {
    let mut rows = Vec::new();
    for q in [steane(), color17(), golay_css()] {
        for p in [1e-3, 1e-4, 1e-5] {
            rows.push(Table1Row {
                code: q.to_string().replace(' ', ""),
                n: q.n(),
                t: q.t(),
                d: q.d(),
                p,
                exceeds_t: p_col_exceeds(p, q.n(), q.t()),
                exceeds_d: p_col_exceeds_distance(p, q.n(), q.d()),
            });
        }
    }
    rows
}

/// Text rendering of [`table1`]: one line per code, three `P(wt > t) (P(wt ≥ d))` cells.
pub fn format_table1(rows: &[Table1Row]) -> String {
    let mut out = String::from("code        p=1e-03            p=1e-04            p=1e-05\n");
    for chunk in rows.chunks(3) {
        out.push_str(&format!("{:<11}", chunk[0].code));
        for r in chunk {
            let cell = format!(
                "{} ({})",
                format_probability(r.exceeds_t),
                format_probability(r.exceeds_d)
            );
            out.push_str(&format!(" {cell:<18}"));
        }
        let trimmed = out.trim_end().len();
        out.truncate(trimmed);
        out.push('\n');
    }
    out
}

/// Outcome of picking a BCH code for a block of `L` logical qubits.
#[derive(Debug, Clone, Serialize)]
pub struct BchChoice {
    pub m: usize,
    pub t_c: usize,
    pub n: usize,
    pub k: usize,
    /// `P₂ / (L·P₁)` at the chosen radius.
    pub ratio: f64,
}

/// Smallest `t_C` for which the block-level excess probability does not
/// exceed the summed per-qubit budget, `P₂ ≤ L·P₁`.
pub fn choose_bch_params(l: usize, p: f64, q: &CssCode, mode: FailureMode) -> Result<BchChoice> {
    if l < 3 || !(l + 1).is_power_of_two() {
        return Err(Error::InvalidParameter(format!("L={l} is not of the form 2^m - 1")));
    }
    let m = (l + 1).trailing_zeros() as usize;
    let p1 = match mode {
        FailureMode::Correct => p_col_exceeds(p, q.n(), q.t()),
        FailureMode::Localize => p_col_exceeds_distance(p, q.n(), q.d()),
    };
    let budget = l as f64 * p1;
    let p_l = p_logical(p, q.n());
    for t in 1..=(l - 1) / 2 {
        let deg = bch_generator_degree(m, t);
        if deg >= l {
            break;
        }
        let p2 = p_block_exceeds(p_l, l, t);
        if p2 <= budget {
            return Ok(BchChoice {
                m,
                t_c: t,
                n: l,
                k: l - deg,
                ratio: if budget > 0.0 { p2 / budget } else { 0.0 },
            });
        }
    }
    Err(Error::InvalidParameter(format!(
        "no BCH code of length {l} meets the block budget at p={p}"
    )))
}

pub fn choose_bch(l: usize, p: f64, q: &CssCode, mode: FailureMode) -> Result<ClassicalCode> {
    let c = choose_bch_params(l, p, q, mode)?;
    bch(c.m, c.t_c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverheadMode {
    Plain,
    ShorFt,
}

#[derive(Debug, Clone, Serialize)]
pub struct OverheadReport {
    pub l: usize,
    pub classical: String,
    pub quantum: String,
    pub t_c: usize,
    pub syndrome_qubits: usize,
    pub failure_prob: Option<f64>,
    pub mode: OverheadMode,
}

/// Syndrome qubits for both X and Z extraction: `R` per quantum check row in
/// plain mode, `R·w` for a weight-`w` check with Shor-style ancilla blocks.
pub fn overhead(pc: &ProductCode, mode: OverheadMode, model: Option<&ErrorModel>) -> OverheadReport {
    let q = pc.quantum();
    let per_r = match mode {
        OverheadMode::Plain => q.hx().rows() + q.hz().rows(),
        OverheadMode::ShorFt => q.hx().weight() + q.hz().weight(),
    };
    OverheadReport {
        l: pc.l(),
        classical: pc.classical_id(),
        quantum: q.id(),
        t_c: pc.t_c(),
        syndrome_qubits: pc.r() * per_r,
        failure_prob: model.map(|m| failure_probability(m, pc, FailureMode::Correct)),
        mode,
    }
}

/// One ancilla per quantum check on every logical qubit.
pub fn baseline_overhead(l: usize, q: &CssCode) -> usize {
    l * (q.hx().rows() + q.hz().rows())
}

/// Probability that a check of density `delta` reports a flipped outcome when
/// each of its two-qubit gates fails independently with `p_e`: the sum over
/// odd numbers of failures.
pub fn syndrome_error_prob(delta: usize, p_e: f64) -> f64 {
    if delta == 0 || p_e <= 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for a in (1..=delta).step_by(2) {
        let ln = ln_binomial(delta, a) + a as f64 * p_e.ln();
        let rest = if p_e < 1.0 {
            (delta - a) as f64 * (-p_e).ln_1p()
        } else if a == delta {
            0.0
        } else {
            f64::NEG_INFINITY
        };
        sum += (ln + rest).exp();
    }
    sum
}

/// `(1 - (1 - 2p_e)^δ) / 2`
pub fn syndrome_error_prob_closed(delta: usize, p_e: f64) -> f64 {
    (1.0 - (1.0 - 2.0 * p_e).powi(delta as i32)) / 2.0
}

/// `P(count > threshold)` for independent Bernoulli trials.
pub fn poisson_binomial_tail(probs: &[f64], threshold: usize) -> f64 {
    if threshold >= probs.len() {
        return 0.0;
    }
    let mut dist = vec![0.0f64; probs.len() + 1];
    dist[0] = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        for c in (0..=i + 1).rev() {
            let stay = dist[c] * (1.0 - p);
            let moved = if c > 0 { dist[c - 1] * p } else { 0.0 };
            dist[c] = stay + moved;
        }
    }
    dist[threshold + 1..].iter().sum()
}

/// Binary entropy in bits.
pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub h2_p: f64,
    /// Check rate `m / n_Q` of one Pauli type.
    pub quantum_rate: f64,
    pub quantum_margin: f64,
    /// Syndrome bits per data qubit, `R·m / (L·n_Q)`.
    pub product_rate: f64,
    pub product_margin: f64,
    pub capacity: Option<f64>,
    /// `R·m / (n₁·n₂)` for a channel product code of size `n₁ × n₂`.
    pub channel_rate: Option<f64>,
    pub channel_margin: Option<f64>,
    pub violations: Vec<String>,
}

/// Compare compression rates with `H₂(p)` and, when a channel code of size
/// `n₁ × n₂` is given, its rate with the capacity `1 − H₂(p_m)`.
pub fn shannon_bounds(model: &ErrorModel, pc: &ProductCode, channel: Option<(usize, usize)>) -> BoundsReport {
    let h = h2(model.p);
    let m = pc.m() as f64;
    let quantum_rate = m / pc.n_q() as f64;
    let product_rate = pc.r() as f64 * m / (pc.l() as f64 * pc.n_q() as f64);
    let (capacity, channel_rate, channel_margin) = match channel {
        Some((n1, n2)) => {
            let cap = 1.0 - h2(model.p_m);
            let rate = pc.r() as f64 * m / (n1 * n2) as f64;
            (Some(cap), Some(rate), Some(cap - rate))
        }
        None => (None, None, None),
    };
    let mut violations = Vec::new();
    if quantum_rate - h <= 0.0 {
        violations.push("quantum".to_string());
    }
    if product_rate - h <= 0.0 {
        violations.push("product".to_string());
    }
    if channel_margin.is_some_and(|c| c <= 0.0) {
        violations.push("channel".to_string());
    }
    BoundsReport {
        h2_p: h,
        quantum_rate,
        quantum_margin: quantum_rate - h,
        product_rate,
        product_margin: product_rate - h,
        capacity,
        channel_rate,
        channel_margin,
        violations,
    }
}
