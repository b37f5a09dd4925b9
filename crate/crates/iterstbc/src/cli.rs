//! Command-line front end.
//!
//! Every subcommand produces a JSON envelope `{tool, version, input_digest,
//! run, result}`. The `run` block holds the fully resolved arguments, and
//! `--rerun FILE` replays the `run` block of a saved envelope.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use iterstbc_core::certificates::{certify, Consistency};
use iterstbc_core::channel::{ChannelConfig, DecoderKind};
use iterstbc_core::codebook::{CodeSpec, Constellation, ConstellationKind, SurveyEntry, SurveyMode, SurveyStats};
use iterstbc_core::decodability::{self, basis_matrices, complexity_exponent, report_from_pattern};
use iterstbc_core::{channel, presets, TowerSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::checks;
use crate::config::{load_tower_config, read_file, read_json, select_algebra, select_code, TowerConfig};
use crate::error::{CliError, CliResult, EXIT_INCONSISTENT, EXIT_OK, EXIT_VALIDATION};
use crate::json::{complex_matrix_json, is_integer, matrix_json, rational_to_string, CycloJson};
use crate::parallel::{self, ParallelSearcher};
use crate::report;

pub const TOOL: &str = "iterstbc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = TOOL, version, about = "Iterated algebras over cyclotomic towers and the space-time block codes built from them")]
struct Cli {
    /// Replay the `run` block of a saved JSON output.
    #[arg(long, value_name = "FILE")]
    rerun: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "args", rename_all = "kebab-case")]
pub enum Command {
    /// Build a tower and print its configuration, bases and automorphisms.
    Tower(TowerArgs),
    /// Randomized exact identity checks for one algebra.
    AlgebraCheck(AlgebraCheckArgs),
    /// Division certificates with a zero-divisor cross-check.
    Certify(CertifyArgs),
    /// Encode sampled codewords and report their determinants.
    Codebook(CodebookArgs),
    /// Minimum determinant survey and diversity evidence.
    Mindet(MindetArgs),
    /// Group decodability and the ML-decoding complexity exponent.
    Decodability(DecodabilityArgs),
    /// Monte Carlo error rates on a Rayleigh fading channel.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerArgs {
    /// Tower preset: 6x3, 8x4 or 4x2.
    #[arg(long)]
    pub preset: Option<String>,
    /// Tower configuration JSON.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraArgs {
    /// Code preset (6x3-right, 6x3-left, 8x4-right) or tower preset.
    #[arg(long)]
    pub preset: Option<String>,
    /// Tower configuration JSON.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// left, middle or right.
    #[arg(long)]
    pub variant: Option<String>,
    /// 1, omega, theta, i, e, a comma list of rationals on the power basis,
    /// or `;`-separated lists for the coordinates of 1, e, ...
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraCheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub algebra: AlgebraArgs,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Coordinate bound of random elements.
    #[arg(long, default_value_t = 2)]
    pub bound: i64,
    /// JSON output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub algebra: AlgebraArgs,
    /// Coordinate bound of the searches.
    #[arg(long = "box", default_value_t = 1)]
    #[serde(rename = "box")]
    pub bound: u32,
    /// A saved certify output to re-verify against a fresh run.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// JSON output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodebookArgs {
    /// Code preset: 6x3-right, 6x3-left or 8x4-right.
    #[arg(long)]
    pub preset: String,
    /// hex4, qam4, qam16, ...; defaults to the 4-point constellation of the code.
    #[arg(long)]
    pub constellation: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub sample: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write every codeword (symbols, exact and complex matrices, determinant).
    #[arg(long)]
    pub emit: Option<PathBuf>,
    /// JSON output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MindetArgs {
    /// Code preset: 6x3-right, 6x3-left or 8x4-right.
    #[arg(long)]
    pub preset: String,
    /// Defaults to the 4-point constellation of the code.
    #[arg(long)]
    pub constellation: Option<String>,
    /// Number of seeded random codewords.
    #[arg(long, conflicts_with = "exhaustive_layer")]
    pub sample: Option<u64>,
    /// Every codeword supported on the first layer.
    #[arg(long)]
    pub exhaustive_layer: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random codeword differences to test for singularity, plus the slot sweep; 0 skips.
    #[arg(long, default_value_t = 0)]
    pub diversity: u64,
    /// JSON output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// One-row CSV summary.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodabilityArgs {
    /// Code preset: 6x3-right, 6x3-left or 8x4-right.
    #[arg(long)]
    pub preset: String,
    /// diagonal or all.
    #[arg(long, default_value = "diagonal")]
    pub subcode: String,
    /// JSON output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Code preset: 6x3-right, 6x3-left or 8x4-right.
    #[arg(long)]
    pub preset: String,
    /// Layers carrying symbols; the rest are zero.
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    /// Defaults to the 4-point constellation of the code.
    #[arg(long)]
    pub constellation: Option<String>,
    /// start:step:stop, a comma list, or one value.
    #[arg(long, default_value = "0:5:20", allow_hyphen_values = true)]
    pub snr_db: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// sphere or exhaustive.
    #[arg(long, default_value = "sphere")]
    pub decoder: String,
    /// Receive antennas; defaults to the number of transmit antennas.
    #[arg(long)]
    pub receive: Option<usize>,
    /// CSV with columns snr_db, trials, errors, rate.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON envelope; stdout when absent.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

impl Command {
    fn json_out(&self) -> Option<&Path> {
        match self {
            Command::Tower(a) => a.out.as_deref(),
            Command::AlgebraCheck(a) => a.out.as_deref(),
            Command::Certify(a) => a.out.as_deref(),
            Command::Codebook(a) => a.out.as_deref(),
            Command::Mindet(a) => a.out.as_deref(),
            Command::Decodability(a) => a.out.as_deref(),
            Command::Simulate(a) => a.json.as_deref(),
        }
    }

    /// Files whose contents determine the result.
    fn input_files(&self) -> Vec<&Path> {
        match self {
            Command::Tower(a) => a.config.as_deref().into_iter().collect(),
            Command::AlgebraCheck(a) => a.algebra.config.as_deref().into_iter().collect(),
            Command::Certify(a) => a.algebra.config.as_deref().into_iter().chain(a.report.as_deref()).collect(),
            _ => Vec::new(),
        }
    }
}

/// A result and, when present, the contradiction that makes the run exit 2.
struct Outcome {
    result: Value,
    inconsistency: Option<String>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Self { result, inconsistency: None }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parallel::init_threads();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
            let _ = e.print();
            return code;
        }
    };
    let command = match (cli.rerun, cli.command) {
        (None, None) => {
            let _ = writeln!(std::io::stderr(), "{}", Cli::command().render_help());
            return EXIT_VALIDATION;
        }
        (Some(_), Some(_)) => {
            eprintln!("error: --rerun cannot be combined with a subcommand");
            return EXIT_VALIDATION;
        }
        (None, Some(c)) => c,
        (Some(path), None) => match load_rerun(&path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return e.exit_code();
            }
        },
    };
    match execute(&command) {
        Ok(None) => EXIT_OK,
        Ok(Some(msg)) => {
            eprintln!("inconsistency: {msg}");
            EXIT_INCONSISTENT
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Reads the `run` block of a saved envelope.
pub fn load_rerun(path: &Path) -> CliResult<Command> {
    let value = read_json(path)?;
    let block = value
        .get("run")
        .cloned()
        .ok_or_else(|| CliError::Validation(format!("{} has no run block", path.display())))?;
    serde_json::from_value(block).map_err(|source| CliError::Json { path: path.into(), source })
}

fn input_digest(command: &Command) -> CliResult<String> {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(command).expect("arguments serialize"));
    for path in command.input_files() {
        h.update(read_file(path)?);
    }
    Ok(hex::encode(h.finalize()))
}

fn write_json(path: Option<&Path>, value: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("values serialize") + "\n";
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn envelope(command: &Command, digest: &str, result: Value) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "input_digest": digest,
        "run": command,
        "result": result,
    })
}

/// Runs a command and writes its outputs; returns the inconsistency, if any.
pub fn execute(command: &Command) -> CliResult<Option<String>> {
    let digest = input_digest(command)?;
    let outcome = match command {
        Command::Tower(a) => tower(a)?,
        Command::AlgebraCheck(a) => algebra_check(a)?,
        Command::Certify(a) => certify_cmd(a)?,
        Command::Codebook(a) => codebook(a, command, &digest)?,
        Command::Mindet(a) => mindet(a)?,
        Command::Decodability(a) => decodability_cmd(a)?,
        Command::Simulate(a) => simulate(a)?,
    };
    let mut result = outcome.result;
    if let (Value::Object(o), Some(msg)) = (&mut result, &outcome.inconsistency) {
        o.insert("inconsistency".into(), json!(msg));
    }
    write_json(command.json_out(), &envelope(command, &digest, result))?;
    Ok(outcome.inconsistency)
}

fn cyclo_list(xs: &[iterstbc_core::CycloElement]) -> Vec<CycloJson> {
    xs.iter().map(CycloJson::from_element).collect()
}

fn tower(a: &TowerArgs) -> CliResult<Outcome> {
    let (cfg, t): (TowerConfig, TowerSpec) = match (&a.preset, &a.config) {
        (Some(_), Some(_)) => return Err(CliError::Validation("--preset and --config are mutually exclusive".into())),
        (None, None) => return Err(CliError::Validation("one of --preset or --config is required".into())),
        (Some(name), None) => {
            let t = presets::tower_by_name(name).ok_or_else(|| {
                CliError::Validation(format!("unknown tower {name:?}; expected one of {}", presets::TOWER_NAMES.join(", ")))
            })?;
            (TowerConfig::from_tower(&t), t)
        }
        (None, Some(path)) => {
            let cfg = load_tower_config(path)?;
            let t = cfg.build()?;
            (cfg, t)
        }
    };
    let quaternions = cfg.algebra()?;
    Ok(Outcome::ok(json!({
        "config": cfg,
        "degrees": { "k": t.k_basis().len(), "f": t.f_basis().len(), "l": t.l_basis().len(), "m": t.m(), "n": t.n() },
        "sigma": { "exponent": t.sigma().exponent(), "order_on_zeta": t.sigma().order() },
        "tau": { "exponent": t.tau().exponent(), "order_on_zeta": t.tau().order() },
        "bases": { "k": cyclo_list(t.k_basis()), "f": cyclo_list(t.f_basis()), "l": cyclo_list(t.l_basis()) },
        "quaternions": {
            "c": CycloJson::from_element(quaternions.c()),
            "definite_division": quaternions.is_division_quaternion_definite(),
        },
    })))
}

fn algebra_check(a: &AlgebraCheckArgs) -> CliResult<Outcome> {
    let alg = &a.algebra;
    let sel = select_algebra(alg.preset.as_deref(), alg.config.as_deref(), alg.variant.as_deref(), alg.d.as_deref())?;
    if a.bound < 1 {
        return Err(CliError::Validation("--bound must be at least 1".into()));
    }
    let outcomes = checks::run_all(&sel.algebra, a.samples, a.seed, a.bound)?;
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.check).collect();
    let result = json!({
        "algebra": sel.source,
        "samples": a.samples,
        "seed": a.seed,
        "bound": a.bound,
        "checks": outcomes,
        "all_passed": failed.is_empty(),
    });
    let inconsistency = (!failed.is_empty()).then(|| format!("identity checks failed: {}", failed.join(", ")));
    Ok(Outcome { result, inconsistency })
}

/// Overall reading of a certificate report.
fn division_verdict(kinds: &[&str]) -> &'static str {
    if kinds.contains(&"disproved") {
        "disproved"
    } else if kinds.contains(&"proved") {
        "proved"
    } else if kinds.contains(&"proved-assuming") {
        "proved-assuming"
    } else {
        "unknown"
    }
}

fn certify_cmd(a: &CertifyArgs) -> CliResult<Outcome> {
    let alg = &a.algebra;
    let sel = select_algebra(alg.preset.as_deref(), alg.config.as_deref(), alg.variant.as_deref(), alg.d.as_deref())?;
    let cited = presets::cited_non_norms(sel.algebra.d_algebra().tower());
    let rep = certify(&sel.algebra, a.bound, &cited, &ParallelSearcher)?;
    let kinds: Vec<&str> = rep.entries.iter().map(|e| e.verdict.kind()).collect();
    let mut inconsistency = match &rep.consistency {
        Consistency::Consistent => None,
        Consistency::Inconsistent(msg) => Some(msg.clone()),
    };
    let mut reverify = Value::Null;
    if let Some(path) = &a.report {
        let (status, problem) = compare_saved(&read_json(path)?, &rep, path)?;
        reverify = json!({ "report": path.display().to_string(), "status": status, "problem": problem });
        inconsistency = inconsistency.or(problem);
    }
    Ok(Outcome {
        result: json!({
            "algebra": sel.source,
            "box": a.bound,
            "division_verdict": division_verdict(&kinds),
            "certificates": report::certificates(&rep),
            "provenance": {
                "cited_non_norms": cited.iter().map(|c| json!({ "value": CycloJson::from_element(&c.value), "citation": c.citation })).collect::<Vec<_>>(),
                "factor_search_box": a.bound,
                "cross_check_box": 1,
                "code_preset": sel.code.as_ref().map(|c| c.name().to_owned()),
            },
            "reverify": reverify,
        }),
        inconsistency,
    })
}

/// Compares a saved certify output with a fresh report.
fn compare_saved(saved: &Value, fresh: &iterstbc_core::certificates::CertificateReport, path: &Path) -> CliResult<(&'static str, Option<String>)> {
    let entries = saved
        .pointer("/result/certificates/entries")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Validation(format!("{} is not a certify output", path.display())))?;
    let fresh_disproof = fresh.entries.iter().any(|e| e.verdict.kind() == "disproved");
    for e in entries {
        let name = e.get("name").and_then(Value::as_str).unwrap_or("?");
        let kind = e.pointer("/verdict/kind").and_then(Value::as_str).unwrap_or("?");
        let claims = kind == "proved" || kind == "proved-assuming";
        if claims && fresh.cross_check.witness().is_some() {
            return Ok(("inconsistent", Some(format!("saved entry {name} claims division but a zero divisor exists"))));
        }
        if claims && fresh_disproof {
            return Ok(("inconsistent", Some(format!("saved entry {name} claims division but a factor of t^n - d exists"))));
        }
        match fresh.entry(name) {
            Some(f) if f.verdict.kind() == kind => {}
            Some(f) => {
                return Ok(("mismatch", Some(format!("saved entry {name} is {kind} but a fresh run gives {}", f.verdict.kind()))));
            }
            None => return Ok(("mismatch", Some(format!("saved entry {name} has no fresh counterpart")))),
        }
    }
    Ok(("verified", None))
}

fn constellation_for(spec: &CodeSpec, name: Option<&str>) -> CliResult<Constellation> {
    let name = name.unwrap_or(match spec.ring() {
        ConstellationKind::Hex => "hex4",
        ConstellationKind::Qam => "qam4",
    });
    let c = Constellation::parse(name)?;
    if c.kind() != spec.ring() {
        return Err(CliError::Validation(format!("{} codes take {} constellations, not {name}", spec.name(), spec.ring().name())));
    }
    Ok(c)
}

fn codebook(a: &CodebookArgs, command: &Command, digest: &str) -> CliResult<Outcome> {
    let spec = select_code(&a.preset)?;
    let c = constellation_for(&spec, a.constellation.as_deref())?;
    let mode = SurveyMode::Sample { count: a.sample, seed: a.seed };
    spec.survey_len(&c, &mode)?;
    let words = (0..a.sample)
        .into_par_iter()
        .map(|i| {
            let symbols = spec.survey_symbols(&c, &mode, i);
            let w = spec.encode(&symbols, &c)?;
            let r = spec.det_report(&w)?;
            Ok((i, w, r))
        })
        .collect::<iterstbc_core::Result<Vec<_>>>()?;
    let mut stats = SurveyStats::default();
    for (i, w, r) in &words {
        stats.push(&SurveyEntry { index: *i, symbols: w.symbols.clone(), report: r.clone() });
    }
    if let Some(path) = &a.emit {
        let list: Vec<Value> = words
            .iter()
            .map(|(i, w, r)| {
                json!({
                    "index": i,
                    "symbols": w.symbols,
                    "exact_matrix": matrix_json(&w.exact),
                    "complex_matrix": complex_matrix_json(&w.complex),
                    "det": report::det_report(r),
                })
            })
            .collect();
        write_json(Some(path), &envelope(command, digest, json!({ "code": spec.name(), "constellation": c.name(), "codewords": list })))?;
    }
    Ok(Outcome::ok(json!({
        "code": spec.name(),
        "constellation": c.name(),
        "seed": a.seed,
        "symbols_per_codeword": spec.symbol_count(),
        "matrix_size": spec.matrix_size(),
        "det_field": match spec.det_field() { iterstbc_core::codebook::DetField::F => "F", iterstbc_core::codebook::DetField::L => "L" },
        "survey": report::survey(&spec, &c, &stats),
        "emitted": a.emit.as_ref().map(|p| p.display().to_string()),
    })))
}

#[derive(Serialize)]
struct MindetRow {
    preset: String,
    constellation: String,
    mode: String,
    seed: u64,
    codewords: u64,
    min_abs_sq: String,
    min_abs_sq_f64: f64,
    argmin: Option<u64>,
    zero_dets: u64,
    field_violations: u64,
    integrality_violations: u64,
    normalized_min_det: String,
}

fn mindet(a: &MindetArgs) -> CliResult<Outcome> {
    let spec = select_code(&a.preset)?;
    let c = constellation_for(&spec, a.constellation.as_deref())?;
    let mode = match (a.sample, a.exhaustive_layer) {
        (Some(count), false) => SurveyMode::Sample { count, seed: a.seed },
        (None, true) => SurveyMode::ExhaustiveLayer,
        _ => return Err(CliError::Validation("give exactly one of --sample N or --exhaustive-layer".into())),
    };
    let stats = parallel::survey(&spec, &c, &mode)?;
    let diversity = if a.diversity > 0 { Some(parallel::diversity(&spec, &c, a.diversity, a.seed)?) } else { None };
    let mut problems = Vec::new();
    if stats.zero_dets > 0 {
        problems.push(format!("{} sampled nonzero codewords are singular", stats.zero_dets));
    }
    if stats.field_violations > 0 {
        problems.push(format!("{} determinants lie outside the claimed field", stats.field_violations));
    }
    if stats.integrality_violations > 0 {
        problems.push(format!("{} determinants are not integral", stats.integrality_violations));
    }
    if let Some(d) = &diversity {
        if !d.violations.is_empty() {
            problems.push(format!("{} codeword differences are singular", d.violations.len()));
        }
    }
    let mode_name = match mode {
        SurveyMode::Sample { .. } => "sample",
        SurveyMode::ExhaustiveLayer => "exhaustive-layer",
    };
    let survey = report::survey(&spec, &c, &stats);
    if let Some(path) = &a.csv {
        let text = |v: &Value| v.as_str().unwrap_or("").to_owned();
        let row = MindetRow {
            preset: spec.name().to_owned(),
            constellation: c.name(),
            mode: mode_name.to_owned(),
            seed: a.seed,
            codewords: stats.codewords,
            min_abs_sq: text(&survey["min_abs_sq"]["rational"]),
            min_abs_sq_f64: stats.min_abs_sq_f64,
            argmin: stats.argmin,
            zero_dets: stats.zero_dets,
            field_violations: stats.field_violations,
            integrality_violations: stats.integrality_violations,
            normalized_min_det: text(&survey["normalized_min_det"]),
        };
        let mut w = csv::Writer::from_path(path)?;
        w.serialize(row)?;
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    Ok(Outcome {
        result: json!({
            "code": spec.name(),
            "constellation": c.name(),
            "mode": mode_name,
            "seed": a.seed,
            "survey": survey,
            "diversity": diversity.map(|d| json!({
                "sampled": d.sampled,
                "swept": d.swept,
                "violations": d.violations.len(),
                "first_violations": d.violations.iter().take(5).collect::<Vec<_>>(),
            })),
        }),
        inconsistency: (!problems.is_empty()).then(|| problems.join("; ")),
    })
}

fn decodability_cmd(a: &DecodabilityArgs) -> CliResult<Outcome> {
    let spec = select_code(&a.preset)?;
    let subcode = decodability::Subcode::parse(&a.subcode)
        .ok_or_else(|| CliError::Validation(format!("unknown subcode {:?} (diagonal or all)", a.subcode)))?;
    let matrices = basis_matrices(&spec, subcode)?;
    let pattern = parallel::sparsity_pattern(&matrices)?;
    let rep = report_from_pattern(&spec, subcode, pattern)?;
    let alg = spec.algebra();
    let rows: Vec<String> = rep.pattern.iter().map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect()).collect();
    let symbols: Vec<Value> = matrices.iter().map(|b| json!({ "index": b.index, "slot": b.slot, "part": b.part })).collect();
    let exponent = (subcode == decodability::Subcode::DiagonalBlock).then(|| {
        json!({
            "value": rational_to_string(&rep.exponent),
            "integer": is_integer(&rep.exponent),
            "full_search": alg.m() * alg.n() * alg.n(),
        })
    });
    Ok(Outcome::ok(json!({
        "code": spec.name(),
        "subcode": subcode.name(),
        "symbol_ring": spec.ring().name(),
        "real_symbols": rep.real_symbols,
        "symbols": symbols,
        "nonzero_pattern": rows,
        "groups": rep.partition.groups,
        "group_count": rep.partition.len(),
        "exponent": exponent,
        "closed_form_check": complexity_exponent(alg.m(), alg.n(), rep.partition.len()).map(|r| rational_to_string(&r)).ok(),
    })))
}

/// `start:step:stop`, a comma list, or one value.
pub fn parse_snr(text: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Validation(format!("malformed SNR list {text:?}"));
    let num = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    let parts: Vec<&str> = text.split(':').collect();
    let values = match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step <= 0.0 || stop < start {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|k| start + step * k as f64).collect()
        }
        [one] => one.split(',').map(num).collect::<CliResult<Vec<_>>>()?,
        _ => return Err(bad()),
    };
    if values.is_empty() {
        return Err(bad());
    }
    Ok(values)
}

#[derive(Serialize)]
struct SnrRow {
    snr_db: f64,
    trials: u64,
    errors: u64,
    rate: f64,
}

fn simulate(a: &SimulateArgs) -> CliResult<Outcome> {
    let spec = select_code(&a.preset)?;
    let c = constellation_for(&spec, a.constellation.as_deref())?;
    let sub = channel::Subcode::new(&spec, &c, a.layers)?;
    let kind = DecoderKind::parse(&a.decoder)
        .ok_or_else(|| CliError::Validation(format!("unknown decoder {:?} (sphere or exhaustive)", a.decoder)))?;
    let snrs = parse_snr(&a.snr_db)?;
    let receive = a.receive.unwrap_or(sub.transmit_antennas());
    let mut rows = Vec::with_capacity(snrs.len());
    for snr in &snrs {
        let cfg = ChannelConfig { receive_antennas: receive, rho: 10f64.powf(snr / 10.0), trials: a.trials, seed: a.seed, noise_scale: 1.0 };
        let r = parallel::simulate(&sub, &cfg, kind)?;
        rows.push(SnrRow { snr_db: *snr, trials: r.trials, errors: r.errors, rate: r.error_rate() });
    }
    if let Some(path) = &a.out {
        let mut w = csv::Writer::from_path(path)?;
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    Ok(Outcome::ok(json!({
        "code": spec.name(),
        "constellation": c.name(),
        "layers": a.layers,
        "decoder": kind.name(),
        "transmit_antennas": sub.transmit_antennas(),
        "receive_antennas": receive,
        "codebook_size": sub.codebook_size(),
        "power_normalization": sub.kappa(),
        "seed": a.seed,
        "rows": rows,
        "csv": a.out.as_ref().map(|p| p.display().to_string()),
    })))
}
