//! `cws` command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::counts::{checked_clustered_count, checked_ratio_check, checked_sphere_count, RatioCheck};
use crate::decoder::{DecodeOptions, DecodeReport, Decoder, Strategy};
use crate::error::{Error, Result};
use crate::graph_code::{enumerate_errors, CwsCode};
use crate::oracle::{self, OracleConfig};
use crate::pauli::PauliOperator;
use crate::sim::{self, random_error, random_logical_state, run_trial, seeded_rng, Backend, RandomCodeSpec, Trial};
use crate::ust::cws_gate_bound;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DECODE_FAILURE: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_SIZE_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "cws",
    version,
    about = "Clustered error correction for codeword-stabilized quantum codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a code file and compute its distance with the dense simulator.
    Verify(VerifyArgs),
    /// Inject an error, decode it and check the recovery.
    Decode(DecodeArgs),
    /// Sweep errors over one or more codes and tabulate costs.
    Benchmark(BenchmarkArgs),
    /// Compare exhaustive and clustered measurement counts.
    Counts(CountsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Exhaustive,
    Clustered,
    Both,
}

impl StrategyArg {
    fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyArg::Exhaustive => vec![Strategy::Exhaustive],
            StrategyArg::Clustered => vec![Strategy::Clustered],
            StrategyArg::Both => vec![Strategy::Exhaustive, Strategy::Clustered],
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum, default_value = "on")]
    pub oracle: Switch,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Error weight to correct; defaults to floor((d-1)/2).
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value = "clustered")]
    pub strategy: StrategyArg,
    /// Pauli error such as "X1 Z3" (1-indexed).
    #[arg(long, allow_hyphen_values = true)]
    pub error: Option<String>,
    /// Seed for random errors, logical states and measurement outcomes.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random-error trials (needs --seed).
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, value_enum, default_value = "on")]
    pub oracle: Switch,
    /// Fold the code's own period group into every cluster measurement.
    #[arg(long)]
    pub ust_acceleration: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub code: Vec<PathBuf>,
    /// Also search for this many random codes.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    /// Length of random codes.
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Dimension of random codes.
    #[arg(long = "dimension", default_value_t = 2)]
    pub dimension: usize,
    /// Minimum distance of random codes.
    #[arg(long, default_value_t = 3)]
    pub min_distance: usize,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value = "both")]
    pub strategy: StrategyArg,
    /// Sample this many errors per code instead of sweeping all of them.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "on")]
    pub oracle: Switch,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CountsArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Tabulate lengths n..=n-max.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Tabulate weights t..=t-max.
    #[arg(long)]
    pub t_max: Option<usize>,
    /// Take n and t from a code file.
    #[arg(long)]
    pub code: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Uncorrectable(_) | Error::Inconsistent(_) | Error::CostBound { .. } => EXIT_DECODE_FAILURE,
            Error::SizeCap { .. } => EXIT_SIZE_CAP,
            _ => EXIT_INVALID_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: i32, message: impl Into<String>) -> CliError {
    CliError {
        code,
        message: message.into(),
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// Runs a parsed command; `Ok` carries a non-fatal exit code.
pub fn execute(cli: &Cli) -> std::result::Result<i32, CliError> {
    match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Benchmark(a) => cmd_benchmark(a),
        Command::Counts(a) => cmd_counts(a),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::result::Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| fail(EXIT_INVALID_INPUT, format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> std::result::Result<String, CliError> {
    // round-trip through Value so object keys come out sorted
    let v = serde_json::to_value(value).map_err(|e| fail(EXIT_INVALID_INPUT, e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| fail(EXIT_INVALID_INPUT, e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn load_code(path: &Path) -> std::result::Result<CwsCode, CliError> {
    CwsCode::load(path).map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

fn code_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn backend(oracle: Switch, n: usize, config: &OracleConfig) -> std::result::Result<Backend, CliError> {
    match oracle {
        Switch::Off => Ok(Backend::GraphBasis),
        Switch::On => {
            config.check_state(n).map_err(|_| {
                fail(
                    EXIT_SIZE_CAP,
                    format!(
                        "n = {n} exceeds the dense simulator cap of {} qubits; rerun with --oracle off",
                        config.max_qubits
                    ),
                )
            })?;
            Ok(Backend::Dense)
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    #[serde(rename = "K")]
    dimension: usize,
    declared_distance: Option<usize>,
    oracle_distance: Option<usize>,
    d: Option<usize>,
    t: Option<usize>,
    additive: bool,
    valid: bool,
    notes: Vec<String>,
}

pub fn cmd_verify(args: &VerifyArgs) -> std::result::Result<i32, CliError> {
    let code = load_code(&args.code)?;
    let config = OracleConfig::default();
    let n = code.num_qubits();
    let declared = code.declared_distance();
    let mut notes = Vec::new();
    let mut valid = true;
    let mut oracle_distance = None;
    match args.oracle {
        Switch::Off => notes.push("distance check skipped (--oracle off)".to_string()),
        Switch::On => {
            if config.check_state(n).is_err() {
                return Err(fail(
                    EXIT_SIZE_CAP,
                    format!(
                        "n = {n} exceeds the dense simulator cap of {} qubits; rerun with --oracle off to skip the distance check",
                        config.max_qubits
                    ),
                ));
            }
            if config.check_matrix(n).is_ok() {
                let p = oracle::code_projector(&code, &config)?;
                if (p.trace() - code.dimension() as f64).abs() > config.state_tol {
                    valid = false;
                    notes.push(format!("code projector has trace {:.6}", p.trace()));
                }
            }
            let search = declared.unwrap_or(n);
            oracle_distance = oracle::verify_distance(&code, search, &config)?;
            match (declared, oracle_distance) {
                (Some(d), Some(found)) if found != d => {
                    valid = false;
                    notes.push(format!(
                        "declared d={d} but an error of weight {found} is not detectable"
                    ));
                }
                (Some(d), None) => {
                    valid = false;
                    notes.push(format!("declared d={d} but every error of weight <= {d} is detectable"));
                }
                (None, None) => notes.push("no undetectable error of any weight".to_string()),
                _ => {}
            }
        }
    }
    let d = declared.or(oracle_distance);
    let report = VerifyReport {
        n,
        dimension: code.dimension(),
        declared_distance: declared,
        oracle_distance,
        d,
        t: d.map(|d| (d - 1) / 2),
        additive: code.is_additive(),
        valid,
        notes,
    };
    let text = match args.output.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
            format!(
                "n,K,d,t,additive,valid\n{},{},{},{},{},{}\n",
                report.n,
                report.dimension,
                opt(report.d),
                opt(report.t),
                report.additive,
                report.valid
            )
        }
        Format::Human => {
            let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_else(|| "?".into());
            let mut s = format!(
                "n={} K={} d={} t={} {}\n",
                report.n,
                report.dimension,
                opt(report.d),
                opt(report.t),
                if report.valid { "valid" } else { "invalid" }
            );
            for note in &report.notes {
                let _ = writeln!(s, "note: {note}");
            }
            s
        }
    };
    emit(&args.output.out, &text)?;
    Ok(if valid { EXIT_OK } else { EXIT_INVALID_INPUT })
}

fn resolve_t(code: &CwsCode, t: Option<usize>) -> std::result::Result<usize, CliError> {
    t.or(code.correctable_weight())
        .ok_or_else(|| fail(EXIT_INVALID_INPUT, "the code file declares no distance; pass --t"))
}

fn trial_json(trial: &Trial) -> Value {
    let mut v = serde_json::to_value(&trial.report).unwrap_or(Value::Null);
    if let Value::Object(map) = &mut v {
        map.insert("fidelity".into(), json!(trial.fidelity));
        map.insert("fidelity_ok".into(), json!(trial.fidelity_ok()));
    }
    v
}

struct DecodeRun {
    error: PauliOperator,
    results: Vec<(Strategy, std::result::Result<Trial, Error>)>,
}

impl DecodeRun {
    fn ok(&self) -> bool {
        self.results
            .iter()
            .all(|(_, r)| r.as_ref().is_ok_and(Trial::fidelity_ok))
            && self.classes_agree() != Some(false)
    }

    fn classes_agree(&self) -> Option<bool> {
        let classes: Vec<_> = self
            .results
            .iter()
            .filter_map(|(_, r)| r.as_ref().ok().map(|t| &t.report.identified_class))
            .collect();
        (classes.len() >= 2).then(|| classes.windows(2).all(|w| w[0] == w[1]))
    }

    fn to_json(&self) -> Value {
        let mut results = serde_json::Map::new();
        for (s, r) in &self.results {
            let v = match r {
                Ok(trial) => trial_json(trial),
                Err(e) => json!({ "failure": e.to_string(), "fidelity_ok": false }),
            };
            results.insert(s.to_string(), v);
        }
        let mut v = json!({ "error": self.error.to_string(), "results": results });
        if let Some(agree) = self.classes_agree() {
            v["classes_agree"] = json!(agree);
        }
        v
    }
}

pub fn cmd_decode(args: &DecodeArgs) -> std::result::Result<i32, CliError> {
    let code = load_code(&args.code)?;
    let n = code.num_qubits();
    let t = resolve_t(&code, args.t)?;
    let config = OracleConfig::default();
    let backend = backend(args.oracle, n, &config)?;
    let decoder = Decoder::new(
        &code,
        t,
        DecodeOptions {
            ust_acceleration: args.ust_acceleration,
        },
    )?;
    let seed = args.seed.unwrap_or(0);
    let errors: Vec<PauliOperator> = match (&args.error, args.seed) {
        (Some(text), _) => vec![PauliOperator::parse(text, n)?],
        (None, Some(_)) => {
            let mut rng = seeded_rng(seed);
            (0..args.trials)
                .map(|_| random_error(n, t, &mut rng).unwrap_or_else(|| PauliOperator::identity(n)))
                .collect()
        }
        (None, None) => return Err(fail(EXIT_INVALID_INPUT, "decode needs --error or --seed")),
    };
    let strategies = args.strategy.strategies();
    let runs: Vec<DecodeRun> = errors
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let trial_seed = seed.wrapping_add(i as u64);
            let logical = random_logical_state(code.dimension(), &mut seeded_rng(trial_seed ^ 0x5eed));
            let results = strategies
                .iter()
                .map(|&s| (s, run_trial(&decoder, s, e, &logical, trial_seed, backend, &config)))
                .collect();
            DecodeRun {
                error: e.clone(),
                results,
            }
        })
        .collect();

    // configuration errors are not decoding failures
    for run in &runs {
        for (_, r) in &run.results {
            if let Err(e) = r {
                if !matches!(e, Error::Uncorrectable(_) | Error::Inconsistent(_)) {
                    return Err(CliError::from(e.clone()));
                }
            }
        }
    }

    let all_ok = runs.iter().all(DecodeRun::ok);
    let bound = cws_gate_bound(n, code.dimension());
    let (b, c) = checked_sphere_count(n, t)
        .zip(checked_clustered_count(n, t))
        .ok_or_else(|| fail(EXIT_INVALID_INPUT, "measurement counts overflow 128 bits"))?;
    let text = match args.output.format {
        Format::Json => {
            let mut v = json!({
                "code": code_name(&args.code),
                "n": n,
                "K": code.dimension(),
                "t": t,
                "sphere_count": u64::try_from(b).map_or_else(|_| json!(b.to_string()), |v| json!(v)),
                "clustered_count": u64::try_from(c).map_or_else(|_| json!(c.to_string()), |v| json!(v)),
                "ratio": if c == 0 { Value::Null } else { json!(b as f64 / c as f64) },
                "cws_gate_bound": bound,
                "backend": if backend == Backend::Dense { "dense" } else { "graph-basis" },
            });
            if runs.len() == 1 {
                let run = runs[0].to_json();
                v["error"] = run["error"].clone();
                v["results"] = run["results"].clone();
                if let Some(a) = run.get("classes_agree") {
                    v["classes_agree"] = a.clone();
                }
            } else {
                v["trials"] = Value::Array(runs.iter().map(DecodeRun::to_json).collect());
                v["summary"] = json!({
                    "trials": runs.len(),
                    "fidelity_ok": runs.iter().filter(|r| r.ok()).count(),
                });
            }
            to_json(&v)?
        }
        Format::Csv => {
            let name = code_name(&args.code);
            let mut rows = Vec::new();
            for run in &runs {
                for (s, r) in &run.results {
                    rows.push(bench_row(&name, &code, t, &run.error, *s, r));
                }
            }
            write_bench_csv(&rows)?
        }
        Format::Human => {
            let mut s = format!(
                "code {} n={n} K={} t={t}  B={b} N={c}  per-measurement bound 2K(n-1)(n+3)={bound}\n",
                code_name(&args.code),
                code.dimension()
            );
            let _ = writeln!(
                s,
                "{:<12} {:<12} {:<14} {:<14} {:>6} {:>6} {:>8} {:>10} {:>9}",
                "error", "strategy", "class", "recovery", "meas", "bound", "gates", "max/meas", "fidelity"
            );
            for run in &runs {
                for (strategy, r) in &run.results {
                    match r {
                        Ok(trial) => {
                            let rep = &trial.report;
                            let _ = writeln!(
                                s,
                                "{:<12} {:<12} {:<14} {:<14} {:>6} {:>6} {:>8} {:>10} {:>9.6}",
                                run.error.to_string(),
                                strategy.to_string(),
                                rep.identified_class.to_string(),
                                rep.recovery.to_string(),
                                rep.measurements_used,
                                rep.measurement_bound,
                                rep.gate_total,
                                rep.max_measurement_gates,
                                trial.fidelity
                            );
                        }
                        Err(e) => {
                            let _ = writeln!(
                                s,
                                "{:<12} {:<12} FAILED: {e}",
                                run.error.to_string(),
                                strategy.to_string()
                            );
                        }
                    }
                }
                if run.classes_agree() == Some(false) {
                    let _ = writeln!(
                        s,
                        "{:<12} strategies disagree on the error class",
                        run.error.to_string()
                    );
                }
            }
            if runs.len() > 1 {
                let _ = writeln!(
                    s,
                    "{}/{} trials recovered with fidelity 1",
                    runs.iter().filter(|r| r.ok()).count(),
                    runs.len()
                );
            }
            s
        }
    };
    emit(&args.output.out, &text)?;
    Ok(if all_ok { EXIT_OK } else { EXIT_DECODE_FAILURE })
}

#[derive(Serialize, Clone, Debug)]
struct BenchRow {
    code: String,
    n: usize,
    #[serde(rename = "K")]
    dimension: usize,
    t: usize,
    error: String,
    strat: String,
    measurements: Option<usize>,
    two_qubit_gates: Option<u64>,
    class: String,
    fidelity_ok: bool,
    #[serde(skip)]
    report: Option<DecodeReport>,
}

fn bench_row(
    name: &str,
    code: &CwsCode,
    t: usize,
    error: &PauliOperator,
    strategy: Strategy,
    result: &std::result::Result<Trial, Error>,
) -> BenchRow {
    let (measurements, gates, class, ok, report) = match result {
        Ok(trial) => (
            Some(trial.report.measurements_used),
            Some(trial.report.gate_total),
            trial.report.identified_class.to_string(),
            trial.fidelity_ok(),
            Some(trial.report.clone()),
        ),
        Err(e) => (None, None, format!("FAILED: {e}"), false, None),
    };
    BenchRow {
        code: name.to_string(),
        n: code.num_qubits(),
        dimension: code.dimension(),
        t,
        error: error.to_string(),
        strat: strategy.to_string(),
        measurements,
        two_qubit_gates: gates,
        class,
        fidelity_ok: ok,
        report,
    }
}

const BENCH_HEADER: [&str; 10] = [
    "code",
    "n",
    "K",
    "t",
    "error",
    "strat",
    "measurements",
    "two_qubit_gates",
    "class",
    "fidelity_ok",
];

fn write_bench_csv(rows: &[BenchRow]) -> std::result::Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let io = |e: csv::Error| fail(EXIT_INVALID_INPUT, e.to_string());
    w.write_record(BENCH_HEADER).map_err(io)?;
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| fail(EXIT_INVALID_INPUT, e.to_string()))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

#[derive(Serialize, Clone, Debug)]
struct BenchSummary {
    code: String,
    strat: String,
    errors: usize,
    failures: usize,
    worst_measurements: usize,
    mean_measurements: f64,
    measurement_bound: u64,
    worst_gates: u64,
    mean_gates: f64,
    max_measurement_gates: u64,
    cws_gate_bound: u64,
}

fn summarize(rows: &[BenchRow], bounds: &[(String, u64)]) -> Vec<BenchSummary> {
    let mut keys: Vec<(String, String)> = Vec::new();
    for r in rows {
        let k = (r.code.clone(), r.strat.clone());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(code, strat)| {
            let group: Vec<&BenchRow> = rows.iter().filter(|r| r.code == code && r.strat == strat).collect();
            let done: Vec<&DecodeReport> = group.iter().filter_map(|r| r.report.as_ref()).collect();
            let count = done.len().max(1) as f64;
            BenchSummary {
                errors: group.len(),
                failures: group.iter().filter(|r| !r.fidelity_ok).count(),
                worst_measurements: done.iter().map(|r| r.measurements_used).max().unwrap_or(0),
                mean_measurements: done.iter().map(|r| r.measurements_used as f64).sum::<f64>() / count,
                measurement_bound: done.first().map(|r| r.measurement_bound).unwrap_or(0),
                worst_gates: done.iter().map(|r| r.gate_total).max().unwrap_or(0),
                mean_gates: done.iter().map(|r| r.gate_total as f64).sum::<f64>() / count,
                max_measurement_gates: done.iter().map(|r| r.max_measurement_gates).max().unwrap_or(0),
                cws_gate_bound: bounds.iter().find(|(c, _)| *c == code).map(|(_, b)| *b).unwrap_or(0),
                code,
                strat,
            }
        })
        .collect()
}

pub fn cmd_benchmark(args: &BenchmarkArgs) -> std::result::Result<i32, CliError> {
    let config = OracleConfig::default();
    let mut codes: Vec<(String, CwsCode)> = Vec::new();
    for path in &args.code {
        codes.push((code_name(path), load_code(path)?));
    }
    if args.random > 0 {
        let spec = RandomCodeSpec::new(args.n, args.dimension, args.min_distance);
        let found: Vec<CwsCode> = (0..args.random)
            .into_par_iter()
            .map(|i| sim::search_random_code(&spec, &mut seeded_rng(args.seed.wrapping_add(1000 + i as u64)), &config))
            .collect::<Result<_>>()?;
        for (i, code) in found.into_iter().enumerate() {
            codes.push((format!("random-n{}-K{}-{}", args.n, args.dimension, i), code));
        }
    }
    if codes.is_empty() {
        return Err(fail(EXIT_INVALID_INPUT, "benchmark needs --code or --random"));
    }

    let strategies = args.strategy.strategies();
    let mut jobs = Vec::new();
    let mut decoders = Vec::new();
    let mut bounds = Vec::new();
    for (ci, (name, code)) in codes.iter().enumerate() {
        let t = resolve_t(code, args.t)?;
        let backend = backend(args.oracle, code.num_qubits(), &config)?;
        let n = code.num_qubits();
        let errors: Vec<PauliOperator> = match args.samples {
            Some(count) => {
                let mut rng = seeded_rng(args.seed.wrapping_add(ci as u64));
                (0..count).filter_map(|_| random_error(n, t, &mut rng)).collect()
            }
            None => enumerate_errors(n, t).collect(),
        };
        for (ei, e) in errors.into_iter().enumerate() {
            for &s in &strategies {
                jobs.push((ci, ei, e.clone(), s, backend));
            }
        }
        decoders.push(Decoder::new(code, t, DecodeOptions::default())?);
        bounds.push((name.clone(), cws_gate_bound(n, code.dimension())));
    }

    let rows: Vec<BenchRow> = jobs
        .par_iter()
        .map(|(ci, ei, e, s, backend)| {
            let (name, code) = &codes[*ci];
            let decoder = &decoders[*ci];
            let seed = args.seed.wrapping_add(((*ci as u64) << 32) | *ei as u64);
            let logical = random_logical_state(code.dimension(), &mut seeded_rng(seed));
            let result = run_trial(decoder, *s, e, &logical, seed, *backend, &config);
            bench_row(name, code, decoder.t(), e, *s, &result)
        })
        .collect();

    let failures = rows.iter().filter(|r| !r.fidelity_ok).count();
    let text = match args.format {
        Format::Csv => write_bench_csv(&rows)?,
        Format::Json => to_json(&json!({
            "rows": rows,
            "summary": summarize(&rows, &bounds),
        }))?,
        Format::Human => {
            let mut s = format!(
                "{:<22} {:<11} {:>6} {:>8} {:>10} {:>6} {:>10} {:>10} {:>9}\n",
                "code", "strategy", "errors", "failures", "worst_meas", "bound", "mean_meas", "worst_gates", "max/meas"
            );
            for r in summarize(&rows, &bounds) {
                let _ = writeln!(
                    s,
                    "{:<22} {:<11} {:>6} {:>8} {:>10} {:>6} {:>10.3} {:>10} {:>9}",
                    r.code,
                    r.strat,
                    r.errors,
                    r.failures,
                    r.worst_measurements,
                    r.measurement_bound,
                    r.mean_measurements,
                    r.worst_gates,
                    r.max_measurement_gates
                );
            }
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_DECODE_FAILURE })
}

pub fn cmd_counts(args: &CountsArgs) -> std::result::Result<i32, CliError> {
    let (mut n, mut t) = (args.n, args.t);
    if let Some(path) = &args.code {
        let code = load_code(path)?;
        n = n.or(Some(code.num_qubits()));
        t = t.or(code.correctable_weight());
    }
    let n = n.ok_or_else(|| fail(EXIT_INVALID_INPUT, "counts needs --n or --code"))?;
    let t = t.ok_or_else(|| {
        fail(
            EXIT_INVALID_INPUT,
            "counts needs --t or a code with a declared distance",
        )
    })?;
    let n_max = args.n_max.unwrap_or(n);
    let t_max = args.t_max.unwrap_or(t);
    let rows: Vec<RatioCheck> = (n..=n_max)
        .flat_map(|n| (t..=t_max).map(move |t| checked_ratio_check(n, t)))
        .collect::<Option<_>>()
        .ok_or_else(|| fail(EXIT_INVALID_INPUT, "counts overflow 128 bits for this range"))?;
    let text = match args.output.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut s = String::from("n,t,B,N,ratio,lower_bound,meets_bound,note\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{:.6},{:.6},{},{}",
                    r.n,
                    r.t,
                    r.sphere_count,
                    r.clustered_count,
                    r.ratio,
                    r.lower_bound,
                    r.meets_bound,
                    r.note.clone().unwrap_or_default()
                );
            }
            s
        }
        Format::Human => {
            let mut s = format!(
                "{:>4} {:>3} {:>12} {:>10} {:>10} {:>10} {:>6}\n",
                "n", "t", "B(n,t)", "N(n,t)", "B/N", "bound", "ok"
            );
            for r in &rows {
                let _ = write!(
                    s,
                    "{:>4} {:>3} {:>12} {:>10} {:>10.3} {:>10.3} {:>6}",
                    r.n,
                    r.t,
                    r.sphere_count,
                    r.clustered_count,
                    r.ratio,
                    r.lower_bound,
                    if r.meets_bound { "yes" } else { "NO" }
                );
                if let Some(note) = &r.note {
                    let _ = write!(s, "  {note}");
                }
                s.push('\n');
            }
            s
        }
    };
    emit(&args.output.out, &text)?;
    Ok(EXIT_OK)
}
