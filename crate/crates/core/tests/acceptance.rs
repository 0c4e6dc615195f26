//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are fixed in the criterion bodies below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qesc_core::analytics::{
    baseline_overhead, choose_bch, choose_bch_params, failure_probability, format_probability,
    overhead, poisson_binomial_tail, table1, FailureMode, OverheadMode,
};
use qesc_core::circuit::{
    build_circuit, build_product_circuit, build_shor_ft_circuit, build_stabilizer_circuit,
    max_weight_per_logical, Fault,
};
use qesc_core::classical::{bch, hamming, BchDecoder};
use qesc_core::decoder::{min_distance_decode, BkTree, Localizer, Nearest};
use qesc_core::gf2::{BitMatrix, BitVector, Combinations};
use qesc_core::quantum::{color17, rep3, steane};
use qesc_core::sim::{run_trials_with, DecodeMode, SplitMix64, TrialConfig};
use qesc_core::{ErrorModel, ErrorPattern, ErrorType, Mode, ProductCode};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let took = start.elapsed();
    let in_time = took <= limit;
    let pass = o.pass && in_time;
    println!(
        "{} {:>2} {name}: {}{} [{:.2}s, limit {}s]",
        if pass { "PASS" } else { "FAIL" },
        id,
        o.detail,
        if in_time { "" } else { " (over time limit)" },
        took.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn desk_pt(t_c: usize) -> ProductCode {
    ProductCode::new(bch(4, 3).unwrap(), steane(), Mode::Systematic, ErrorType::X)
        .unwrap()
        .with_t_c(t_c)
        .unwrap()
}

fn table1_check() -> Outcome {
    let want = [
        ("2e-05", "3e-08"),
        ("2e-07", "3e-11"),
        ("2e-09", "3e-14"),
        ("7e-07", "6e-12"),
        ("7e-10", "1e-16"),
        ("7e-13", "1e-16"),
        ("9e-09", "2e-16"),
        ("9e-13", "1e-16"),
        ("1e-16", "1e-16"),
    ];
    let rows = table1();
    let mut matched = 0;
    let mut misses = Vec::new();
    for (r, (a, b)) in rows.iter().zip(want) {
        for (got, w) in [(format_probability(r.exceeds_t), a), (format_probability(r.exceeds_d), b)] {
            if got == w {
                matched += 1;
            } else {
                misses.push(format!("{} p={:e}: {got} != {w}", r.code, r.p));
            }
        }
    }
    outcome(
        matched == 18,
        format!("{matched}/18 excess-probability cells match to the printed digit, floor 1e-16 {misses:?}"),
    )
}

fn overhead_check() -> Outcome {
    let q = color17();
    let c127 = choose_bch(127, 1e-4, &q, FailureMode::Correct).unwrap();
    let t127 = c127.t();
    let pc = ProductCode::new(c127, q.clone(), Mode::Plain, ErrorType::X).unwrap();
    let o127 = overhead(&pc, OverheadMode::Plain, None).syndrome_qubits;
    let c1023 = choose_bch_params(1023, 1e-4, &q, FailureMode::Correct).unwrap();
    let o1023 = (c1023.n - c1023.k) * (q.hx().rows() + q.hz().rows());
    let base = baseline_overhead(127, &q);
    outcome(
        (o127, o1023, base, t127, c1023.t_c) == (672, 1760, 2032, 6, 11),
        format!(
            "L=127 -> t_C={t127}, {o127} qubits; L=1023 -> t_C={}, {o1023} qubits; baseline {base} (exact: 672, 1760, 2032)",
            c1023.t_c
        ),
    )
}

fn failure_anchor() -> Outcome {
    let q = color17();
    let c = choose_bch(127, 1e-4, &q, FailureMode::Correct).unwrap();
    let pc = ProductCode::new(c, q, Mode::Plain, ErrorType::X).unwrap();
    let pf = failure_probability(&ErrorModel::data_only(1e-4).unwrap(), &pc, FailureMode::Correct);
    outcome(
        (1e-7 / 3.0..=3e-7).contains(&pf),
        format!("P_F = {pf:.3e} (tolerance: within a factor 3 of 1e-7)"),
    )
}

/// Table build plus the normalizer-injection test over all of 𝔼.
fn main_result_instance(pc: &ProductCode) -> Result<(usize, usize), String> {
    let table = pc.build_lookup_table().map_err(|e| e.to_string())?;
    let gens = pc.normalizer_generators();
    for g in &gens {
        if !pc.extract_syndrome(g).unwrap().is_zero() {
            return Err("normalizer generator with nonzero syndrome".into());
        }
    }
    let mut injections = 0;
    for e in table.values() {
        for g in &gens {
            let moved = e.xor(g);
            injections += 1;
            if pc.in_class_e(&moved) && !pc.stabilizer_equivalent(&moved, e) {
                return Err(format!("{e} + generator stays in class"));
            }
        }
    }
    Ok((table.len(), injections))
}

fn main_result() -> Outcome {
    let small = ProductCode::new(hamming(3).unwrap(), rep3(), Mode::Systematic, ErrorType::X)
        .unwrap()
        .with_t_c(1)
        .unwrap()
        .with_t_q(1)
        .unwrap();
    let desk = ProductCode::new(bch(4, 3).unwrap(), steane(), Mode::Plain, ErrorType::X)
        .unwrap()
        .with_t_c(2)
        .unwrap()
        .with_t_q(1)
        .unwrap();
    match (main_result_instance(&small), main_result_instance(&desk)) {
        (Ok((a, ia)), Ok((b, ib))) => outcome(
            a == 13 && b == 5251,
            format!(
                "rep3 x hamming3/pt: {} nonzero patterns, steane x [15,5,7] t_C=2: {b} patterns (5251 by direct count), zero conflicts; {} generator injections leave class",
                a - 1,
                ia + ib
            ),
        ),
        (r1, r2) => outcome(false, format!("{:?} {:?}", r1.err(), r2.err())),
    }
}

fn worked_example() -> Outcome {
    let pt = hamming(3).unwrap().parity_transpose().unwrap();
    let zzi = build_circuit(&pt.kron(&BitMatrix::from_strs(&["110"]).unwrap()).unwrap());
    let ziz = build_circuit(&pt.kron(&BitMatrix::from_strs(&["101"]).unwrap()).unwrap());
    let bits = |c: &qesc_core::circuit::SyndromeCircuit, qs: &[usize]| {
        let e = BitVector::from_support(12, &qs.iter().map(|q| q - 1).collect::<Vec<_>>());
        c.propagate(&c.data_frame(&e).unwrap()).unwrap().to_string()
    };
    let got = [bits(&zzi, &[2]), bits(&zzi, &[7]), bits(&zzi, &[1, 10]), bits(&ziz, &[2])];
    outcome(
        got == ["101", "110", "110", "000"],
        format!(
            "ZZI block: X2 -> {}, X7 -> {}, X1X10 -> {}; ZIZ block: X2 -> {} (expected 101, 110, 110, 000)",
            got[0], got[1], got[2], got[3]
        ),
    )
}

fn noisy_syndrome() -> Outcome {
    let pc = desk_pt(3).with_t_src(1).unwrap();
    let table = pc.build_lookup_table().unwrap();
    let bits = pc.m() * pc.r();
    let (mut checked, mut bad) = (0usize, 0usize);
    for (key, want) in table.keys().iter().zip(table.values()) {
        for w in 0..=2 {
            for flips in Combinations::new(bits, w) {
                let mut noisy = key.clone();
                for &b in &flips {
                    noisy.flip(b);
                }
                checked += 1;
                match min_distance_decode(&table, &noisy, 2).unwrap() {
                    Nearest::Decoded { correction, .. } if &correction == want => {}
                    _ => bad += 1,
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!(
            "steane x [15,5,7]/pt, t_src=1: {} keys x all <=2-bit corruptions = {checked} queries, {bad} exceptions",
            table.len()
        ),
    )
}

fn localization() -> Outcome {
    let plain = ProductCode::new(bch(4, 3).unwrap(), steane(), Mode::Plain, ErrorType::X).unwrap();
    let mut e = plain.zero_pattern();
    for (l, q) in [(4, 2), (9, 1), (9, 6), (14, 2), (14, 3)] {
        e.matrix.set(q - 1, l - 1, true);
    }
    let xi = plain.extract_syndrome(&e).unwrap();
    let found: Vec<usize> = Localizer::new(&plain)
        .unwrap()
        .localize(&xi)
        .unwrap()
        .logical_indices
        .iter()
        .map(|l| l + 1)
        .collect();

    let pc = desk_pt(3);
    let loc = Localizer::bm(&pc).unwrap();
    let (l, r, n_q) = (pc.l(), pc.r(), pc.n_q());
    let (mut runs, mut bad) = (0usize, 0usize);
    for size in 0..=2 {
        for set in Combinations::new(l, size) {
            let per_col = size.max(1);
            let combos = n_q.pow(per_col as u32);
            for c in 0..combos {
                let mut truth = pc.zero_pattern();
                let mut code = c;
                for &ell in &set {
                    truth.matrix.set(code % n_q, ell, true);
                    code /= n_q;
                }
                let clean = pc.extract_syndrome(&truth).unwrap();
                // each of the m rows gets no flip or one flip at any of R positions
                let per_row = r + 1;
                for f in 0..per_row.pow(pc.m() as u32) {
                    let mut noisy = clean.clone();
                    let mut code = f;
                    for i in 0..pc.m() {
                        let pos = code % per_row;
                        code /= per_row;
                        if pos > 0 {
                            noisy.matrix.flip(i, pos - 1);
                        }
                    }
                    runs += 1;
                    match loc.localize(&noisy) {
                        Ok(res) if res.logical_indices == set => {}
                        _ => bad += 1,
                    }
                }
                if size == 0 {
                    break;
                }
            }
        }
    }
    outcome(
        found == vec![4, 9, 14] && bad == 0,
        format!("15-Steane example -> L = {found:?}; BM with <=1 flip per row, |L| <= 2: {runs} cases, {bad} misses"),
    )
}

fn circuit_equivalence() -> Outcome {
    let mut frames = 0usize;
    let mut bad = 0usize;
    let instances = [
        ProductCode::new(hamming(3).unwrap(), rep3(), Mode::Systematic, ErrorType::X).unwrap(),
        ProductCode::new(hamming(4).unwrap(), steane(), Mode::Plain, ErrorType::X).unwrap(),
        ProductCode::new(hamming(4).unwrap(), steane(), Mode::Plain, ErrorType::Z).unwrap(),
    ];
    for pc in &instances {
        let c = build_product_circuit(pc).unwrap();
        let n = c.data_qubits;
        for w in 0..=2 {
            for sup in Combinations::new(n, w) {
                let v = BitVector::from_support(n, &sup);
                let bits = c.propagate(&c.data_frame(&v).unwrap()).unwrap();
                let e = ErrorPattern::from_vec(&v, pc.n_q(), pc.l(), pc.error_type()).unwrap();
                frames += 1;
                if bits != pc.extract_syndrome(&e).unwrap().column_stacked() {
                    bad += 1;
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!("rep3 x hamming3/pt, steane x hamming4 (X and Z): {frames} frames of weight <=2, {bad} mismatches"),
    )
}

fn fault_tolerance() -> Outcome {
    let instances = [
        ProductCode::new(hamming(3).unwrap(), rep3(), Mode::Systematic, ErrorType::X).unwrap(),
        ProductCode::new(hamming(4).unwrap(), steane(), Mode::Plain, ErrorType::X).unwrap(),
        ProductCode::new(hamming(4).unwrap(), steane(), Mode::Plain, ErrorType::Z).unwrap(),
        ProductCode::new(bch(4, 3).unwrap(), color17(), Mode::Plain, ErrorType::X).unwrap(),
    ];
    let (mut faults, mut worst) = (0usize, 0usize);
    for pc in &instances {
        for row in 0..pc.h_q().rows() {
            let c = build_shor_ft_circuit(pc, row).unwrap();
            for a in c.data_qubits..c.num_qubits() {
                for f in [Fault::X, Fault::Y, Fault::Z] {
                    faults += 1;
                    worst = worst.max(max_weight_per_logical(&c.inject_fault(a, f).unwrap(), pc.n_q()));
                }
            }
        }
    }
    let h3_rep3 = ProductCode::new(hamming(3).unwrap(), rep3(), Mode::Systematic, ErrorType::X).unwrap();
    let bare = build_stabilizer_circuit(&h3_rep3, 0).unwrap();
    let res = bare.inject_fault(bare.data_qubits, Fault::Y).unwrap();
    let spread: Vec<usize> = res.z_errors.iter_ones().map(|j| j + 1).collect();
    let bare_worst = max_weight_per_logical(&res, 3);
    outcome(
        worst <= 1 && bare_worst == 2 && spread == vec![1, 2, 4, 5, 7, 8],
        format!(
            "Shor layouts: {faults} single ancilla faults, max residual {worst} per logical qubit; bare Y fault on ancilla 1 -> Z on {spread:?} (weight {bare_worst} per logical qubit)"
        ),
    )
}

fn monte_carlo() -> Outcome {
    let pc = desk_pt(3);
    let table = pc.build_lookup_table().unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, seed) in [(1e-2, 2024u64), (3e-3, 2025u64)] {
        let cfg = TrialConfig {
            classical: "bch:15:3/pt".into(),
            quantum: "steane".into(),
            error_type: ErrorType::X,
            t_c: Some(3),
            t_q: None,
            t_src: None,
            model: ErrorModel::data_only(p).unwrap(),
            shots: 1_000_000,
            seed,
            syndrome_noise: false,
            decode_mode: DecodeMode::Lookup,
        };
        let r = run_trials_with(&pc, Some(&table), &cfg).unwrap();
        let (lo, hi) = r.wilson_95_interval;
        let inside = lo <= r.analytic_rate && r.analytic_rate <= hi;
        pass &= inside && r.breakdown.in_class_failures == 0;
        parts.push(format!(
            "p={p:e}: empirical {:.4e} in [{lo:.4e}, {hi:.4e}], analytic {:.4e}, outside-class rate {:.4e}, in-class failures {}",
            r.empirical_rate, r.analytic_rate, r.class_rate, r.breakdown.in_class_failures
        ));
    }
    outcome(pass, format!("steane x [15,5,7]/pt, 10^6 shots each; {}", parts.join("; ")))
}

fn oracles() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    // BM against nearest codeword by enumeration
    let code = bch(4, 3).unwrap();
    let dec = BchDecoder::new(&code).unwrap();
    let words: Vec<BitVector> = (0..1u64 << code.k())
        .map(|m| code.encode(&BitVector::from_u64(code.k(), m)).unwrap())
        .collect();
    let mut bm_bad = 0;
    for r in 0..1u64 << 15 {
        let rv = BitVector::from_u64(15, r);
        let best = words.iter().min_by_key(|w| w.hamming_distance(&rv)).unwrap();
        let d = best.hamming_distance(&rv);
        let got = dec.decode(&rv).unwrap();
        let ok = if d <= code.t() {
            got == Some(best.xor(&rv).support())
        } else {
            got.is_none()
        };
        if !ok {
            bm_bad += 1;
        }
    }
    pass &= bm_bad == 0;
    notes.push(format!("BM vs brute force on 2^15 words: {bm_bad} mismatches"));

    // BK-tree against linear scan
    let mut rng = SplitMix64::new(11);
    let keys: Vec<BitVector> = (0..2000).map(|_| BitVector::from_u64(40, rng.next_u64() & ((1 << 40) - 1))).collect();
    let tree = BkTree::build(keys.clone());
    let mut bk_bad = 0;
    for _ in 0..300 {
        let q = BitVector::from_u64(40, rng.next_u64() & ((1 << 40) - 1));
        let radius = (rng.next_u64() % 16) as usize;
        // the tree stores distinct keys, so compare key sets
        let mut got: Vec<&BitVector> = tree.query(&q, radius).matches.iter().map(|&(i, _)| tree.key(i)).collect();
        got.sort();
        let mut want: Vec<&BitVector> = keys.iter().filter(|k| k.hamming_distance(&q) <= radius).collect();
        want.sort();
        want.dedup();
        if got != want {
            bk_bad += 1;
        }
    }
    pass &= bk_bad == 0;
    notes.push(format!("BK-tree vs linear scan, 300 queries: {bk_bad} mismatches"));

    // Poisson binomial against enumeration at n = 20
    let probs: Vec<f64> = (0..20).map(|_| rng.next_f64()).collect();
    let mut worst: f64 = 0.0;
    let mut dist = [0.0f64; 21];
    for mask in 0u32..1 << 20 {
        let mut pr = 1.0;
        for (i, &p) in probs.iter().enumerate() {
            pr *= if mask >> i & 1 == 1 { p } else { 1.0 - p };
        }
        dist[mask.count_ones() as usize] += pr;
    }
    for t in 0..=20 {
        let brute: f64 = dist[t + 1..].iter().sum();
        worst = worst.max((poisson_binomial_tail(&probs, t) - brute).abs());
    }
    pass &= worst < 1e-12;
    notes.push(format!("Poisson binomial n=20 max error {worst:.1e} (tol 1e-12)"));

    // vec identity on random instances
    let instances = [
        ProductCode::new(hamming(4).unwrap(), steane(), Mode::Plain, ErrorType::X).unwrap(),
        ProductCode::new(bch(4, 3).unwrap(), color17(), Mode::Systematic, ErrorType::Z).unwrap(),
    ];
    let mut eq4_bad = 0;
    for k in 0..1000 {
        let pc = &instances[k % 2];
        let n = pc.n_q() * pc.l();
        let v = BitVector::from_bools((0..n).map(|_| rng.next_u64() & 1 == 1));
        let e = ErrorPattern::from_vec(&v, pc.n_q(), pc.l(), pc.error_type()).unwrap();
        let lhs = pc.product_parity_check().unwrap().mul_vec(&v).unwrap();
        if lhs != pc.extract_syndrome(&e).unwrap().column_stacked() {
            eq4_bad += 1;
        }
    }
    pass &= eq4_bad == 0;
    notes.push(format!("(H_C kron H_Q) vec(e) = vec(H_Q e H_C^T) on 1000 random instances: {eq4_bad} mismatches"));

    outcome(pass, notes.join("; "))
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let results = [
        run(1, "table1", s(1), table1_check),
        run(2, "overhead anchors", s(10), overhead_check),
        run(3, "failure-rate anchor", s(10), failure_anchor),
        run(4, "main result at desk scale", s(30), main_result),
        run(5, "worked circuit example", s(1), worked_example),
        run(6, "noisy-syndrome guarantee", s(300), noisy_syndrome),
        run(7, "localization", s(60), localization),
        run(8, "circuit/matrix equivalence", s(60), circuit_equivalence),
        run(9, "fault tolerance", s(60), fault_tolerance),
        run(10, "Monte Carlo consistency", s(300), monte_carlo),
        run(11, "oracle suites", s(120), oracles),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
