//! Seeded Monte Carlo runs of the lookup, nearest-key and localization
//! decoders under independent bit-flip noise.

use std::ops::Add;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{failure_probability, syndrome_error_prob, ErrorModel, FailureMode};
use crate::decoder::{default_radius, min_distance_decode, Localizer, Nearest};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::product::{ErrorPattern, LookupTable, ProductCode};
use crate::quantum::ErrorType;
use crate::registry::{self, Radii};

/// SplitMix64: state advances by `0x9E3779B97F4A7C15` and each output is
/// the state passed through the finalizer with multipliers
/// `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB` (shifts 30, 27, 31).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream number `index` under `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        Self::new(mix(seed ^ mix(index.wrapping_add(1).wrapping_mul(GOLDEN))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.next_f64() < p
        }
    }
}

/// Independent Bernoulli(`p`) on every cell, drawn in `vec(ε)` order.
pub fn sample_error(p: f64, n_q: usize, l: usize, t: ErrorType, rng: &mut SplitMix64) -> ErrorPattern {
    let v = BitVector::from_bools((0..n_q * l).map(|_| rng.bernoulli(p)));
    ErrorPattern::from_vec(&v, n_q, l, t).expect("length n_Q·L")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeMode {
    Lookup,
    MinDistance,
    Localize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialConfig {
    pub classical: String,
    pub quantum: String,
    #[serde(default = "default_error_type")]
    pub error_type: ErrorType,
    #[serde(default)]
    pub t_c: Option<usize>,
    #[serde(default)]
    pub t_q: Option<usize>,
    #[serde(default)]
    pub t_src: Option<usize>,
    pub model: ErrorModel,
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub syndrome_noise: bool,
    #[serde(default = "default_mode")]
    pub decode_mode: DecodeMode,
}

fn default_error_type() -> ErrorType {
    ErrorType::X
}

fn default_mode() -> DecodeMode {
    DecodeMode::Lookup
}

impl TrialConfig {
    pub fn product_code(&self) -> Result<ProductCode> {
        registry::product(
            &self.classical,
            &self.quantum,
            self.error_type,
            Radii { t_c: self.t_c, t_q: self.t_q, t_src: self.t_src },
        )
    }
}

/// How the shots split up. Every shot lands in exactly one of
/// `in_class_ok`, `outside_class_ok`, `wrong_correction`, `ambiguous`,
/// `not_found`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Breakdown {
    pub in_class_ok: u64,
    /// Truth outside the decodable class, yet the decoder still succeeded.
    pub outside_class_ok: u64,
    pub wrong_correction: u64,
    pub ambiguous: u64,
    pub not_found: u64,
    /// Shots whose truth lies outside the decodable class.
    pub outside_class: u64,
    /// Failures on shots whose truth is inside the class.
    pub in_class_failures: u64,
}

impl Add for Breakdown {
    type Output = Breakdown;

    fn add(self, o: Breakdown) -> Breakdown {
        Breakdown {
            in_class_ok: self.in_class_ok + o.in_class_ok,
            outside_class_ok: self.outside_class_ok + o.outside_class_ok,
            wrong_correction: self.wrong_correction + o.wrong_correction,
            ambiguous: self.ambiguous + o.ambiguous,
            not_found: self.not_found + o.not_found,
            outside_class: self.outside_class + o.outside_class,
            in_class_failures: self.in_class_failures + o.in_class_failures,
        }
    }
}

impl Breakdown {
    pub fn failures(&self) -> u64 {
        self.wrong_correction + self.ambiguous + self.not_found
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub shots: u64,
    pub failures: u64,
    pub empirical_rate: f64,
    pub wilson_95_interval: (f64, f64),
    /// Fraction of shots whose truth falls outside the decodable class.
    pub class_rate: f64,
    pub class_wilson_95_interval: (f64, f64),
    pub analytic_rate: f64,
    pub breakdown: Breakdown,
    pub seed: u64,
    pub decode_mode: DecodeMode,
    pub syndrome_noise: bool,
}

const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

/// Shots per RNG stream; stream `c` covers shots `c·CHUNK .. (c+1)·CHUNK`.
pub const CHUNK: u64 = 4096;

enum Engine<'a> {
    Table { table: &'a LookupTable, nearest: bool },
    Localize(Localizer<'a>),
}

struct Shot<'a> {
    pc: &'a ProductCode,
    engine: Engine<'a>,
    cell_keys: Vec<BitVector>,
    flip_probs: Vec<f64>,
    model: ErrorModel,
}

impl Shot<'_> {
    fn key(&self, e: &ErrorPattern, rng: &mut SplitMix64) -> BitVector {
        let mut key = BitVector::zeros(self.pc.m() * self.pc.r());
        for j in e.vec().iter_ones() {
            key.xor_assign(&self.cell_keys[j]);
        }
        for (b, &q) in self.flip_probs.iter().enumerate() {
            if rng.bernoulli(q) {
                key.flip(b);
            }
        }
        key
    }

    fn run(&self, rng: &mut SplitMix64) -> Result<Breakdown> {
        let pc = self.pc;
        let e = sample_error(self.model.p, pc.n_q(), pc.l(), pc.error_type(), rng);
        let key = self.key(&e, rng);
        let mut b = Breakdown::default();
        let in_class = match self.engine {
            Engine::Localize(_) => pc.in_class_d(&e),
            Engine::Table { .. } => pc.in_class_e(&e),
        };
        let ok = match &self.engine {
            Engine::Table { table, nearest: false } => match table.get(&key) {
                Some(c) => pc.stabilizer_equivalent(c, &e),
                None => {
                    b.not_found = 1;
                    false
                }
            },
            Engine::Table { table, nearest: true } => {
                match min_distance_decode(table, &key, default_radius(table))? {
                    Nearest::Decoded { correction, .. } => pc.stabilizer_equivalent(&correction, &e),
                    Nearest::Ambiguous { .. } => {
                        b.ambiguous = 1;
                        false
                    }
                    Nearest::NotFound => {
                        b.not_found = 1;
                        false
                    }
                }
            }
            Engine::Localize(loc) => {
                let xi = crate::product::ProductSyndrome::from_flattened(&key, pc.m(), pc.r())?;
                match loc.localize(&xi) {
                    Ok(found) => found.logical_indices == e.nonzero_columns(),
                    Err(Error::RowDecode { .. }) => {
                        b.not_found = 1;
                        false
                    }
                    Err(err) => return Err(err),
                }
            }
        };
        if !ok && b.ambiguous == 0 && b.not_found == 0 {
            b.wrong_correction = 1;
        }
        match (in_class, ok) {
            (true, true) => b.in_class_ok = 1,
            (true, false) => b.in_class_failures = 1,
            (false, true) => b.outside_class_ok = 1,
            (false, false) => {}
        }
        if !in_class {
            b.outside_class = 1;
        }
        Ok(b)
    }
}

/// Per-key-bit flip probability: encoding faults on the `δ = wt(h_r)·wt(s_i)`
/// gates of check `(i, r)` composed with the measurement channel `p_m`.
pub fn syndrome_flip_probs(pc: &ProductCode, model: &ErrorModel) -> Vec<f64> {
    let (m, r) = (pc.m(), pc.r());
    let mut out = vec![0.0; m * r];
    for i in 0..m {
        let wi = pc.h_q().row_weight(i);
        for c in 0..r {
            let pe = syndrome_error_prob(wi * pc.h_c().row_weight(c), model.p_e);
            out[i * r + c] = pe + model.p_m - 2.0 * pe * model.p_m;
        }
    }
    out
}

/// Build the decoder once, then run `cfg.shots` shots.
pub fn run_trials(cfg: &TrialConfig) -> Result<TrialReport> {
    let pc = cfg.product_code()?;
    match cfg.decode_mode {
        DecodeMode::Localize => run_trials_with(&pc, None, cfg),
        _ => {
            let table = pc.build_lookup_table()?;
            run_trials_with(&pc, Some(&table), cfg)
        }
    }
}

pub fn run_trials_with(pc: &ProductCode, table: Option<&LookupTable>, cfg: &TrialConfig) -> Result<TrialReport> {
    cfg.model.validate()?;
    if cfg.shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let engine = match (cfg.decode_mode, table) {
        (DecodeMode::Localize, _) => Engine::Localize(Localizer::new(pc)?),
        (mode, Some(table)) => Engine::Table { table, nearest: mode == DecodeMode::MinDistance },
        (_, None) => return Err(Error::InvalidParameter("table decoding needs a lookup table".into())),
    };
    let n = pc.n_q() * pc.l();
    let cell_keys = (0..n)
        .map(|j| {
            let e = ErrorPattern::from_vec(&BitVector::from_support(n, &[j]), pc.n_q(), pc.l(), pc.error_type())?;
            Ok(pc.extract_syndrome(&e)?.flattened())
        })
        .collect::<Result<Vec<_>>>()?;
    let flip_probs = if cfg.syndrome_noise {
        syndrome_flip_probs(pc, &cfg.model)
    } else {
        vec![0.0; pc.m() * pc.r()]
    };
    let shot = Shot { pc, engine, cell_keys, flip_probs, model: cfg.model };
    let chunks = cfg.shots.div_ceil(CHUNK);
    let breakdown = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = SplitMix64::stream(cfg.seed, c);
            let count = CHUNK.min(cfg.shots - c * CHUNK);
            let mut acc = Breakdown::default();
            for _ in 0..count {
                acc = acc + shot.run(&mut rng)?;
            }
            Ok::<_, Error>(acc)
        })
        .try_reduce(Breakdown::default, |a, b| Ok(a + b))?;
    let failures = breakdown.failures();
    let mode = match cfg.decode_mode {
        DecodeMode::Localize => FailureMode::Localize,
        _ => FailureMode::Correct,
    };
    Ok(TrialReport {
        shots: cfg.shots,
        failures,
        empirical_rate: failures as f64 / cfg.shots as f64,
        wilson_95_interval: wilson_interval(failures, cfg.shots),
        class_rate: breakdown.outside_class as f64 / cfg.shots as f64,
        class_wilson_95_interval: wilson_interval(breakdown.outside_class, cfg.shots),
        analytic_rate: failure_probability(&cfg.model, pc, mode),
        breakdown,
        seed: cfg.seed,
        decode_mode: cfg.decode_mode,
        syndrome_noise: cfg.syndrome_noise,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: f64, shots: u64, mode: DecodeMode) -> TrialConfig {
        TrialConfig {
            classical: "bch:15:3/pt".into(),
            quantum: "steane".into(),
            error_type: ErrorType::X,
            t_c: None,
            t_q: None,
            t_src: None,
            model: ErrorModel::data_only(p).unwrap(),
            shots,
            seed: 7,
            syndrome_noise: false,
            decode_mode: mode,
        }
    }

    #[test]
    fn splitmix_reference_stream() {
        // first outputs for seed 1234567, cross-checked against a Python port
        let mut r = SplitMix64::new(1234567);
        let got: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
        assert_eq!(got, vec![6457827717110365317, 3203168211198807973, 9817491932198370423]);
        let mut r = SplitMix64::new(0);
        for _ in 0..1000 {
            let u = r.next_f64();
            assert!((0.0..1.0).contains(&u));
        }
        assert_ne!(SplitMix64::stream(1, 0).next_u64(), SplitMix64::stream(1, 1).next_u64());
    }

    #[test]
    fn sampling_extremes_and_mean() {
        let mut r = SplitMix64::new(3);
        assert!(sample_error(0.0, 7, 5, ErrorType::X, &mut r).is_zero());
        assert_eq!(sample_error(1.0, 7, 5, ErrorType::X, &mut r).weight(), 35);
        let (shots, p, cells) = (100_000u64, 0.01, 35.0);
        let total: usize = (0..shots).map(|_| sample_error(p, 7, 5, ErrorType::X, &mut r).weight()).sum();
        let mean = total as f64 / shots as f64;
        let sigma = (cells * p * (1.0 - p) / shots as f64).sqrt();
        assert!((mean - cells * p).abs() < 3.0 * sigma, "{mean}");
    }

    #[test]
    fn wilson_contains_point() {
        for (k, n) in [(0, 10), (3, 10), (10, 10), (57, 100_000)] {
            let (lo, hi) = wilson_interval(k, n);
            let p = k as f64 / n as f64;
            assert!(lo <= p && p <= hi);
        }
    }

    #[test]
    fn noiseless_runs() {
        let r = run_trials(&cfg(0.0, 5000, DecodeMode::Lookup)).unwrap();
        assert_eq!(r.failures, 0);
        assert_eq!(r.analytic_rate, 0.0);

        let r = run_trials(&cfg(0.02, 20_000, DecodeMode::Lookup)).unwrap();
        let b = r.breakdown;
        assert_eq!(b.in_class_failures, 0);
        assert_eq!(b.in_class_ok + b.outside_class_ok + b.failures(), r.shots);
        assert_eq!(b.outside_class, b.outside_class_ok + b.failures());
    }

    #[test]
    fn deterministic_under_seed() {
        let c = cfg(0.03, 10_000, DecodeMode::MinDistance);
        let a = run_trials(&c).unwrap();
        let b = run_trials(&c).unwrap();
        assert_eq!(a.breakdown, b.breakdown);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(|| run_trials(&c)).unwrap();
        assert_eq!(a.breakdown, single.breakdown);
    }

    #[test]
    fn noisy_syndrome_within_budget() {
        let mut c = cfg(0.01, 20_000, DecodeMode::MinDistance);
        c.t_src = Some(1);
        c.model.p_m = 0.005;
        c.syndrome_noise = true;
        let pc = c.product_code().unwrap();
        let table = pc.build_lookup_table().unwrap();
        let r = run_trials_with(&pc, Some(&table), &c).unwrap();
        assert!(r.breakdown.in_class_ok > 0);
        assert!(r.failures > 0);
    }

    #[test]
    fn flip_probs_follow_density() {
        let pc = cfg(0.0, 1, DecodeMode::Lookup).product_code().unwrap();
        let model = ErrorModel::new(0.0, 1e-3, 0.0).unwrap();
        let probs = syndrome_flip_probs(&pc, &model);
        let delta = pc.h_q().row_weight(0) * pc.h_c().row_weight(0);
        assert_eq!(probs[0], syndrome_error_prob(delta, 1e-3));
    }

    #[test]
    fn localize_mode_runs() {
        let c = TrialConfig { classical: "bch:15:3".into(), ..cfg(0.005, 4000, DecodeMode::Localize) };
        let r = run_trials(&c).unwrap();
        assert_eq!(r.breakdown.in_class_failures, 0);
    }
}
