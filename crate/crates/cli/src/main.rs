//! `qesc`: build product-code lookup tables, decode and localize product
//! syndromes, evaluate the analytic failure model and run seeded simulations.

mod manifest;

use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qesc_core::analytics::{
    baseline_overhead, choose_bch_params, failure_probability, format_probability,
    format_table1, overhead, p_block_exceeds, p_col_exceeds, p_col_exceeds_distance, p_logical,
    shannon_bounds, table1, FailureMode, OverheadMode,
};
use qesc_core::classical::bch;
use qesc_core::circuit::{build_product_circuit, build_shor_ft_circuit, build_stabilizer_circuit};
use qesc_core::decoder::{default_radius, min_distance_decode, Localizer, Nearest};
use qesc_core::registry::{self, Radii};
use qesc_core::sim::{run_trials, TrialConfig};
use qesc_core::{BitVector, ErrorModel, ErrorPattern, ErrorType, LookupTable, Mode, ProductCode, ProductSyndrome};

use manifest::write_artifact;

#[derive(Parser)]
#[command(name = "qesc", version, about = "Product syndrome extraction for blocks of CSS logical qubits")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Worker threads for table builds and simulations (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classical codes.
    #[command(subcommand)]
    Codes(CodesCmd),
    /// Quantum CSS codes.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// Product codes and their lookup tables.
    #[command(subcommand)]
    Product(ProductCmd),
    /// Decode a product syndrome with a stored lookup table.
    Decode(DecodeArgs),
    /// Find the logical qubits carrying errors from a product syndrome.
    Localize(LocalizeArgs),
    /// Closed-form probabilities, overheads and entropy bounds.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Monte Carlo run from a JSON trial config.
    Simulate(SimulateArgs),
    /// Syndrome-extraction circuits.
    #[command(subcommand)]
    Circuit(CircuitCmd),
}

#[derive(Subcommand)]
enum CodesCmd {
    /// Parameters of a classical code.
    Info {
        #[arg(long = "c")]
        code: String,
    },
    /// Write a parity-check (or generator) matrix as text.
    Build {
        #[arg(long = "c")]
        code: String,
        #[arg(long)]
        generator: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum QuantumCmd {
    /// Check matrices, normalizer generators and optionally a coset summary.
    Info {
        #[arg(long = "q")]
        code: String,
        /// Enumerate errors up to this weight and group them by syndrome.
        #[arg(long)]
        cosets: Option<usize>,
        #[arg(long = "type", default_value = "X")]
        error_type: ErrorType,
    },
}

#[derive(Args, Clone)]
struct PcArgs {
    /// Classical code id, e.g. `bch:15:3`, `hamming3pt`, `bch:15:3/pt`.
    #[arg(long = "c")]
    classical: String,
    /// Quantum code id: rep3, steane, color17, golay.
    #[arg(long = "q")]
    quantum: String,
    #[arg(long = "type", default_value = "X")]
    error_type: ErrorType,
    #[arg(long)]
    tc: Option<usize>,
    #[arg(long)]
    tq: Option<usize>,
    #[arg(long)]
    tsrc: Option<usize>,
}

impl PcArgs {
    fn build(&self) -> Result<ProductCode> {
        Ok(registry::product(
            &self.classical,
            &self.quantum,
            self.error_type,
            Radii { t_c: self.tc, t_q: self.tq, t_src: self.tsrc },
        )?)
    }
}

#[derive(Subcommand)]
enum ProductCmd {
    /// Enumerate class 𝔼 and write the lookup table.
    BuildTable {
        #[command(flatten)]
        pc: PcArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Block size, syndrome shape and class size.
    Info {
        #[command(flatten)]
        pc: PcArgs,
    },
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["syndrome", "error"])))]
struct DecodeArgs {
    #[arg(long)]
    table: PathBuf,
    /// Flattened product syndrome as a bit string.
    #[arg(long)]
    syndrome: Option<String>,
    /// Data-qubit Pauli string such as `X2`; its syndrome is decoded.
    #[arg(long)]
    error: Option<String>,
    /// Fall back to nearest-key search when the syndrome is not a key.
    #[arg(long)]
    nearest: bool,
    /// Search radius for `--nearest` (default `t_C - t_src`).
    #[arg(long)]
    radius: Option<usize>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["syndrome", "error"])))]
struct LocalizeArgs {
    #[command(flatten)]
    pc: PcArgs,
    #[arg(long)]
    syndrome: Option<String>,
    #[arg(long)]
    error: Option<String>,
    /// Use Berlekamp–Massey row decoding (BCH codes in Pᵀ mode).
    #[arg(long)]
    bm: bool,
    /// Print per-row supports and syndrome flips as well.
    #[arg(long)]
    detail: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OverheadArg {
    Plain,
    ShorFt,
}

#[derive(Clone, Copy, ValueEnum)]
enum FailArg {
    Correct,
    Localize,
}

impl From<FailArg> for FailureMode {
    fn from(f: FailArg) -> Self {
        match f {
            FailArg::Correct => FailureMode::Correct,
            FailArg::Localize => FailureMode::Localize,
        }
    }
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// Per-logical-qubit excess probabilities for Steane, color and Golay qubits.
    Table1 {
        #[arg(long)]
        csv: bool,
    },
    /// Syndrome qubits for `L` logical qubits with a BCH code picked per `p`.
    Overhead {
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "q")]
        quantum: String,
        /// Physical error rates; defaults to a grid from 1e-2 to 1e-5.
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long, value_enum, default_value = "plain")]
        mode: OverheadArg,
        #[arg(long = "fail-mode", value_enum, default_value = "correct")]
        fail_mode: FailArg,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Failure-probability curves `P_F(p)`.
    Failure {
        #[arg(long = "L", default_value_t = 127)]
        l: usize,
        /// Quantum codes to include.
        #[arg(long = "q", value_delimiter = ',', default_value = "steane,color17,golay")]
        quantum: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        /// Fixed classical radius; otherwise picked per point.
        #[arg(long)]
        tc: Option<usize>,
        #[arg(long, value_enum, default_value = "correct")]
        mode: FailArg,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropy and capacity margins for a product code.
    Bounds {
        #[command(flatten)]
        pc: PcArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.0)]
        pe: f64,
        #[arg(long, default_value_t = 0.0)]
        pm: f64,
        /// Channel product code size as `n1x n2`, e.g. `128x4`.
        #[arg(long)]
        channel: Option<String>,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config shot count.
    #[arg(long)]
    shots: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CircuitFormat {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum CircuitCmd {
    /// Emit the circuit for one quantum check row, or the whole product.
    Emit {
        #[command(flatten)]
        pc: PcArgs,
        #[arg(long, default_value_t = 0)]
        row: usize,
        /// Shor-style entangled ancilla blocks.
        #[arg(long)]
        shor: bool,
        /// All quantum check rows at once with bare ancillas.
        #[arg(long, conflicts_with = "shor")]
        full: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: CircuitFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const DEFAULT_GRID: [f64; 10] = [1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4, 5e-5, 2e-5, 1e-5];

fn grid(p: &[f64]) -> Vec<f64> {
    if p.is_empty() {
        DEFAULT_GRID.to_vec()
    } else {
        p.to_vec()
    }
}

/// Write to `out` with a manifest, or print to stdout.
fn emit(out: Option<&Path>, text: &str, command: &str, seeds: Vec<u64>) -> Result<()> {
    match out {
        Some(path) => {
            let m = write_artifact(path, text.as_bytes(), command, seeds)?;
            eprintln!("wrote {} and {}", path.display(), m.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn codes(cmd: CodesCmd) -> Result<()> {
    match cmd {
        CodesCmd::Info { code } => {
            let (c, mode) = registry::classical(&code)?;
            let v = json!({
                "id": c.id(),
                "kind": c.kind(),
                "n": c.n(),
                "k": c.k(),
                "d": c.d(),
                "t": c.t(),
                "pt_mode": mode == Mode::Systematic,
                "shortened": c.shortened(),
                "generator_poly": c.generator_poly(),
            });
            print!("{}", pretty(&v)?);
        }
        CodesCmd::Build { code, generator, out } => {
            let (c, _) = registry::classical(&code)?;
            let m = if generator { c.generator() } else { c.parity_check() };
            emit(out.as_deref(), &m.to_text(), "codes build", vec![])?;
        }
    }
    Ok(())
}

fn quantum(cmd: QuantumCmd) -> Result<()> {
    let QuantumCmd::Info { code, cosets, error_type } = cmd;
    let q = registry::quantum(&code)?;
    let mut v = json!({
        "id": q.id(),
        "n": q.n(),
        "k": q.k(),
        "d": q.d(),
        "hx": q.hx().row_iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "hz": q.hz().row_iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "normalizer_generators": q.normalizer_generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    });
    if let Some(w) = cosets {
        let t = q.build_coset_table(error_type, w)?;
        v["cosets"] = json!({
            "error_type": error_type.to_string(),
            "max_weight": w,
            "patterns": t.patterns,
            "distinct_syndromes": t.distinct_syndromes(),
        });
    }
    print!("{}", pretty(&v)?);
    Ok(())
}

fn product(cmd: ProductCmd) -> Result<()> {
    match cmd {
        ProductCmd::BuildTable { pc, out } => {
            let pc = pc.build()?;
            let table = pc.build_lookup_table()?;
            let mut buf = Vec::new();
            table.write(&mut buf)?;
            let m = write_artifact(&out, &buf, "product build-table", vec![])?;
            eprintln!("{} entries; wrote {} and {}", table.len(), out.display(), m.display());
        }
        ProductCmd::Info { pc } => {
            let pc = pc.build()?;
            let v = json!({
                "classical": pc.classical_id(),
                "quantum": pc.quantum().id(),
                "error_type": pc.error_type().to_string(),
                "L": pc.l(),
                "R": pc.r(),
                "n_q": pc.n_q(),
                "m": pc.m(),
                "t_c": pc.t_c(),
                "t_q": pc.t_q(),
                "t_src": pc.t_src(),
                "key_bits": pc.m() * pc.r(),
                "class_size": pc.class_e_size().to_string(),
            });
            print!("{}", pretty(&v)?);
        }
    }
    Ok(())
}

fn parse_bits(s: &str, len: usize) -> Result<BitVector> {
    let v: BitVector = s.parse().with_context(|| format!("`{s}` is not a bit string"))?;
    if v.len() != len {
        bail!("syndrome has {} bits, expected {len}", v.len());
    }
    Ok(v)
}

fn error_syndrome(pc: &ProductCode, s: &str) -> Result<ProductSyndrome> {
    let e = ErrorPattern::parse(s, pc.n_q(), pc.l(), pc.error_type())?;
    Ok(pc.extract_syndrome(&e)?)
}

fn decode(a: DecodeArgs) -> Result<()> {
    let file = fs::File::open(&a.table).with_context(|| format!("opening {}", a.table.display()))?;
    let table = LookupTable::read(BufReader::new(file))?;
    let h = &table.header;
    let key = match (&a.syndrome, &a.error) {
        (Some(s), _) => parse_bits(s, h.key_bits())?,
        (None, Some(e)) => {
            let pc = registry::product(
                &h.classical,
                &h.quantum,
                h.error_type,
                Radii { t_c: Some(h.t_c), t_q: Some(h.t_q), t_src: Some(h.t_src) },
            )?;
            error_syndrome(&pc, e)?.flattened()
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let v = if let Some(c) = table.get(&key) {
        json!({"correction": c.to_string(), "distance": 0, "status": "exact"})
    } else if a.nearest {
        let radius = a.radius.unwrap_or_else(|| default_radius(&table));
        match min_distance_decode(&table, &key, radius)? {
            Nearest::Decoded { correction, distance } => {
                json!({"correction": correction.to_string(), "distance": distance, "status": "nearest"})
            }
            Nearest::Ambiguous { distance, candidates } => json!({
                "correction": null,
                "distance": distance,
                "status": "ambiguous",
                "candidates": candidates.iter().map(|&i| table.entry(i).1.to_string()).collect::<Vec<_>>(),
            }),
            Nearest::NotFound => json!({"correction": null, "distance": null, "status": "not_found"}),
        }
    } else {
        json!({"correction": null, "distance": null, "status": "not_found"})
    };
    print!("{}", pretty(&v)?);
    Ok(())
}

fn localize(a: LocalizeArgs) -> Result<()> {
    let pc = a.pc.build()?;
    let xi = match (&a.syndrome, &a.error) {
        (Some(s), _) => ProductSyndrome::from_flattened(&parse_bits(s, pc.m() * pc.r())?, pc.m(), pc.r())?,
        (None, Some(e)) => error_syndrome(&pc, e)?,
        (None, None) => unreachable!("clap requires one input"),
    };
    let loc = if a.bm { Localizer::bm(&pc)? } else { Localizer::new(&pc)? };
    let res = loc.localize(&xi)?;
    let v = if a.detail {
        json!({
            "logical_indices": one_based(&res.logical_indices),
            "per_row_supports": res.per_row_supports.iter().map(|r| one_based(r)).collect::<Vec<_>>(),
            "syndrome_flips": res.syndrome_flips.iter().map(|r| one_based(r)).collect::<Vec<_>>(),
            "confidence": res.confidence,
        })
    } else {
        json!(one_based(&res.logical_indices))
    };
    print!("{}", pretty(&v)?);
    Ok(())
}

fn parse_channel(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once('x')
        .with_context(|| format!("channel `{s}` is not of the form n1xn2"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn analyze(cmd: AnalyzeCmd) -> Result<()> {
    match cmd {
        AnalyzeCmd::Table1 { csv } => {
            let rows = table1();
            if csv {
                let mut s = String::from("code,n,t,d,p,p_exceeds_t,p_exceeds_d\n");
                for r in &rows {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{:e},{},{}",
                        r.code,
                        r.n,
                        r.t,
                        r.d,
                        r.p,
                        format_probability(r.exceeds_t),
                        format_probability(r.exceeds_d)
                    );
                }
                print!("{s}");
            } else {
                print!("{}", format_table1(&rows));
            }
        }
        AnalyzeCmd::Overhead { l, quantum, p, mode, fail_mode, csv, out } => {
            let q = registry::quantum(&quantum)?;
            let omode = match mode {
                OverheadArg::Plain => OverheadMode::Plain,
                OverheadArg::ShorFt => OverheadMode::ShorFt,
            };
            let mut rows = Vec::new();
            for p in grid(&p) {
                let choice = choose_bch_params(l, p, &q, fail_mode.into())?;
                let pc = ProductCode::new(bch(choice.m, choice.t_c)?, q.clone(), Mode::Plain, ErrorType::X)?;
                let model = ErrorModel::data_only(p)?;
                let rep = overhead(&pc, omode, Some(&model));
                rows.push((p, choice, rep));
            }
            let text = if csv {
                let mut s = String::from("p,L,t_C,n,k,syndrome_qubits,baseline,failure_prob\n");
                for (p, c, rep) in &rows {
                    let _ = writeln!(
                        s,
                        "{p:e},{l},{},{},{},{},{},{:.6e}",
                        c.t_c,
                        c.n,
                        c.k,
                        rep.syndrome_qubits,
                        baseline_overhead(l, &q),
                        rep.failure_prob.unwrap_or(0.0)
                    );
                }
                s
            } else {
                let v: Vec<_> = rows.iter().map(|(p, _, rep)| json!({"p": p, "report": rep})).collect();
                pretty(&json!(v))?
            };
            emit(out.as_deref(), &text, "analyze overhead", vec![])?;
        }
        AnalyzeCmd::Failure { l, quantum, p, tc, mode, csv, out } => {
            let mode: FailureMode = mode.into();
            let mut rows = Vec::new();
            for id in &quantum {
                let q = registry::quantum(id)?;
                for &p in &grid(&p) {
                    let t_c = match tc {
                        Some(t) => t,
                        None => choose_bch_params(l, p, &q, mode)?.t_c,
                    };
                    let p1 = match mode {
                        FailureMode::Correct => p_col_exceeds(p, q.n(), q.t()),
                        FailureMode::Localize => p_col_exceeds_distance(p, q.n(), q.d()),
                    };
                    let p2 = p_block_exceeds(p_logical(p, q.n()), l, t_c);
                    let pf = qesc_core::analytics::failure_rate(p1, p, q.n(), l, t_c);
                    rows.push(json!({"code": q.id(), "p": p, "L": l, "t_c": t_c, "p1": p1, "p2": p2, "p_f": pf}));
                }
            }
            let text = if csv {
                let mut s = String::from("code,p,L,t_C,P1,P2,P_F\n");
                for r in &rows {
                    let _ = writeln!(
                        s,
                        "{},{:e},{},{},{:.6e},{:.6e},{:.6e}",
                        r["code"].as_str().unwrap_or_default(),
                        r["p"].as_f64().unwrap_or_default(),
                        r["L"],
                        r["t_c"],
                        r["p1"].as_f64().unwrap_or_default(),
                        r["p2"].as_f64().unwrap_or_default(),
                        r["p_f"].as_f64().unwrap_or_default()
                    );
                }
                s
            } else {
                pretty(&json!(rows))?
            };
            emit(out.as_deref(), &text, "analyze failure", vec![])?;
        }
        AnalyzeCmd::Bounds { pc, p, pe, pm, channel } => {
            let pc = pc.build()?;
            let model = ErrorModel::new(p, pe, pm)?;
            let channel = channel.as_deref().map(parse_channel).transpose()?;
            let rep = shannon_bounds(&model, &pc, channel);
            let pf = failure_probability(&model, &pc, FailureMode::Correct);
            print!("{}", pretty(&json!({"bounds": rep, "failure_prob": pf}))?);
        }
    }
    Ok(())
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let text = fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let mut cfg: TrialConfig = serde_json::from_str(&text).context("parsing trial config")?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(s) = a.shots {
        cfg.shots = s;
    }
    let report = run_trials(&cfg)?;
    let out = pretty(&json!({"config": cfg, "report": report}))?;
    emit(a.out.as_deref(), &out, "simulate", vec![cfg.seed])
}

fn circuit(cmd: CircuitCmd) -> Result<()> {
    let CircuitCmd::Emit { pc, row, shor, full, format, out } = cmd;
    let pc = pc.build()?;
    let c = if full {
        build_product_circuit(&pc)?
    } else if shor {
        build_shor_ft_circuit(&pc, row)?
    } else {
        build_stabilizer_circuit(&pc, row)?
    };
    let text = match format {
        CircuitFormat::Json => pretty(&c.to_json())?,
        CircuitFormat::Dot => c.to_dot(),
    };
    emit(out.as_deref(), &text, "circuit emit", vec![])
}

fn dispatch(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match cli.cmd {
        Cmd::Codes(c) => codes(c),
        Cmd::Quantum(c) => quantum(c),
        Cmd::Product(c) => product(c),
        Cmd::Decode(a) => decode(a),
        Cmd::Localize(a) => localize(a),
        Cmd::Analyze(c) => analyze(c),
        Cmd::Simulate(a) => simulate(a),
        Cmd::Circuit(c) => circuit(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
