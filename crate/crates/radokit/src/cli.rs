//! Command-line entry point: subcommand dispatch, file I/O, deterministic
//! JSON reports, and the exit-code contract.
//!
//! Exit codes: 0 found/determined, 1 not found/refuted (window-relative
//! where applicable), 2 input error, 3 budget exhausted. Stdout carries one
//! machine-readable JSON report per run (the `smod` subcommand prints bare
//! residue lines instead); human-readable summaries and diagnostics go to
//! stderr, including wall time, which is deliberately kept out of the JSON
//! so reports stay byte-identical across runs.

use std::time::Instant;

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::certificate_extractor::{extract_certificate, ExtractionOutcome};
use crate::colorings::{smod, ColoringRef};
use crate::condition_checker::{
    check_columns_condition, check_k_columns_condition, CheckOutcome, SearchLimits,
};
use crate::error::Error;
use crate::exact_linalg::{is_prime, primes_up_to, Int, Rational};
use crate::solution_search::{
    falsify_semi_regularity, find_semi_mono_solution, semi_rado_number, SearchResult,
    DEFAULT_ENUMERATION_CAP,
};
use crate::system_model::{parse_coloring, parse_system, solution_to_json};

const EXIT_OK: i32 = 0;
const EXIT_NEGATIVE: i32 = 1;
const EXIT_INPUT: i32 = 2;
const EXIT_BUDGET: i32 = 3;

const USAGE: &str = "\
radokit <subcommand> [options]

subcommands:
  check-columns FILE
  check-kcolumns FILE [--max-t T] [--node-budget N]
  find-solution FILE --coloring smod:P|file:PATH --window R [--budget N]
  falsify FILE --primes-up-to P --window R
  extract-cert FILE --primes-up-to P --window R [--report PATH]
  semi-rado FILE --colors r --max-window R
  smod P N...

global options:
  --jobs N    cap the worker thread count (1 reproduces parallel runs)

exit codes: 0 found/determined, 1 not found/refuted, 2 input error,
3 budget exhausted. RADOKIT_NODE_BUDGET overrides the default budgets.";

pub fn run(args: &[String]) -> i32 {
    let started = Instant::now();
    let mut args: Vec<String> = args.to_vec();
    match take_value_flag(&mut args, "--jobs") {
        Ok(Some(jobs)) => {
            let Ok(jobs) = jobs.parse::<usize>() else {
                eprintln!("error: --jobs expects a positive integer");
                return EXIT_INPUT;
            };
            if jobs == 0 {
                eprintln!("error: --jobs expects a positive integer");
                return EXIT_INPUT;
            }
            // Ignore failure: the global pool can only be set once.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global();
        }
        Ok(None) => {}
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    }
    let Some(subcommand) = args.first().cloned() else {
        eprintln!("{USAGE}");
        return EXIT_INPUT;
    };
    let rest = &args[1..];
    let result = match subcommand.as_str() {
        "check-columns" => cmd_check_columns(rest),
        "check-kcolumns" => cmd_check_kcolumns(rest),
        "find-solution" => cmd_find_solution(rest),
        "falsify" => cmd_falsify(rest),
        "extract-cert" => cmd_extract_cert(rest),
        "semi-rado" => cmd_semi_rado(rest),
        "smod" => cmd_smod(rest),
        other => {
            eprintln!("error: unknown subcommand `{other}`\n{USAGE}");
            return EXIT_INPUT;
        }
    };
    match result {
        Ok(code) => {
            eprintln!(
                "{subcommand}: done in {} ms (exit {code})",
                started.elapsed().as_millis()
            );
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

// ---- argument plumbing -----------------------------------------------------

fn take_value_flag(args: &mut Vec<String>, name: &str) -> Result<Option<String>, String> {
    if let Some(pos) = args.iter().position(|a| a == name) {
        if pos + 1 >= args.len() {
            return Err(format!("{name} expects a value"));
        }
        let value = args.remove(pos + 1);
        args.remove(pos);
        return Ok(Some(value));
    }
    Ok(None)
}

struct Parsed {
    file: String,
    flags: Vec<(String, String)>,
}

fn parse_args(args: &[String], allowed: &[&str]) -> Result<Parsed, Error> {
    let mut file = None;
    let mut flags = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if let Some(name) = a.strip_prefix("--") {
            if !allowed.contains(&name) {
                return Err(Error::Input(format!("unknown flag --{name}\n{USAGE}")));
            }
            let value = it
                .next()
                .ok_or_else(|| Error::Input(format!("--{name} expects a value")))?;
            flags.push((name.to_string(), value.clone()));
        } else if file.is_none() {
            file = Some(a.clone());
        } else {
            return Err(Error::Input(format!("unexpected argument `{a}`\n{USAGE}")));
        }
    }
    Ok(Parsed {
        file: file.ok_or_else(|| Error::Input(format!("missing input file\n{USAGE}")))?,
        flags,
    })
}

impl Parsed {
    fn flag(&self, name: &str) -> Option<&str> {
        self.flags
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    fn numeric_flag<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>, Error> {
        match self.flag(name) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::Input(format!("--{name}: invalid value `{v}`"))),
        }
    }
}

fn read_input(path: &str) -> Result<(Vec<u8>, String), Error> {
    let bytes =
        std::fs::read(path).map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
    let digest = format!("sha256:{:x}", Sha256::digest(&bytes));
    Ok((bytes, digest))
}

fn env_node_budget() -> Option<u64> {
    std::env::var("RADOKIT_NODE_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
}

// ---- report assembly --------------------------------------------------------

fn emit_report(subcommand: &str, digest: &str, parameters: Value, outcome: Value) {
    let mut obj = Map::new();
    obj.insert("subcommand".into(), Value::from(subcommand));
    obj.insert("input_digest".into(), Value::from(digest));
    obj.insert("parameters".into(), parameters);
    obj.insert("outcome".into(), outcome);
    obj.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
    println!("{}", Value::Object(obj));
}

fn params(entries: &[(&str, Value)]) -> Value {
    let mut obj = Map::new();
    for (k, v) in entries {
        obj.insert((*k).to_string(), v.clone());
    }
    Value::Object(obj)
}

fn outcome_status(status: &str, extra: &[(&str, Value)]) -> Value {
    let mut obj = Map::new();
    obj.insert("status".into(), Value::from(status));
    for (k, v) in extra {
        obj.insert((*k).to_string(), v.clone());
    }
    Value::Object(obj)
}

// ---- subcommands -------------------------------------------------------------

fn cmd_check_columns(args: &[String]) -> Result<i32, Error> {
    let parsed = parse_args(args, &[])?;
    let (bytes, digest) = read_input(&parsed.file)?;
    let sys = parse_system(&bytes)?;
    let matrix = sys.column_matrix();
    match check_columns_condition(&matrix) {
        Some(cert) => {
            emit_report(
                "check-columns",
                &digest,
                params(&[]),
                outcome_status("certificate", &[("certificate", cert.to_json())]),
            );
            eprintln!("columns condition holds (t = {})", cert.t());
            Ok(EXIT_OK)
        }
        None => {
            emit_report(
                "check-columns",
                &digest,
                params(&[]),
                outcome_status("refuted", &[]),
            );
            eprintln!("columns condition refuted exhaustively");
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cmd_check_kcolumns(args: &[String]) -> Result<i32, Error> {
    let parsed = parse_args(args, &["max-t", "node-budget"])?;
    let (bytes, digest) = read_input(&parsed.file)?;
    let sys = parse_system(&bytes)?;
    let max_t: Option<usize> = parsed.numeric_flag("max-t")?;
    let node_budget: Option<u64> = parsed.numeric_flag("node-budget")?;
    let limits = SearchLimits {
        max_t,
        node_budget: node_budget.or_else(env_node_budget),
    };
    let parameters = params(&[
        (
            "max_t",
            max_t.map(|t| Value::from(t as u64)).unwrap_or(Value::Null),
        ),
        (
            "node_budget",
            limits.node_budget.map(Value::from).unwrap_or(Value::Null),
        ),
    ]);
    match check_k_columns_condition(&sys, &limits)? {
        CheckOutcome::Found(cert) => {
            emit_report(
                "check-kcolumns",
                &digest,
                parameters,
                outcome_status("certificate", &[("certificate", cert.to_json())]),
            );
            eprintln!("k-columns condition holds (t = {})", cert.partition.t());
            Ok(EXIT_OK)
        }
        CheckOutcome::Refuted => {
            emit_report(
                "check-kcolumns",
                &digest,
                parameters,
                outcome_status("refuted", &[]),
            );
            eprintln!("k-columns condition refuted exhaustively");
            Ok(EXIT_NEGATIVE)
        }
        CheckOutcome::Exhausted => {
            emit_report(
                "check-kcolumns",
                &digest,
                parameters,
                outcome_status("exhausted", &[]),
            );
            eprintln!("node budget exhausted before the search completed");
            Ok(EXIT_BUDGET)
        }
    }
}

fn parse_coloring_arg(spec: &str, window: i64) -> Result<ColoringRef, Error> {
    if let Some(p) = spec.strip_prefix("smod:") {
        let p: u64 = p
            .parse()
            .map_err(|_| Error::Input(format!("--coloring smod:P expects a prime, got `{p}`")))?;
        return ColoringRef::smod(p);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let (bytes, _) = read_input(path)?;
        let table = parse_coloring(&bytes)?;
        let coloring = ColoringRef::table(table);
        if !coloring.covers_window(window) {
            if let ColoringRef::Table(t) = &coloring {
                let (lo, hi) = t.window();
                return Err(Error::ColoringNotTotal {
                    needed: window,
                    lo,
                    hi,
                });
            }
        }
        return Ok(coloring);
    }
    Err(Error::Input(format!(
        "--coloring expects smod:P or file:PATH, got `{spec}`"
    )))
}

fn cmd_find_solution(args: &[String]) -> Result<i32, Error> {
    let parsed = parse_args(args, &["coloring", "window", "budget"])?;
    let (bytes, digest) = read_input(&parsed.file)?;
    let sys = parse_system(&bytes)?;
    let window: i64 = parsed
        .numeric_flag("window")?
        .ok_or_else(|| Error::Input("--window is required".into()))?;
    let coloring_spec = parsed
        .flag("coloring")
        .ok_or_else(|| Error::Input("--coloring is required".into()))?;
    let coloring = parse_coloring_arg(coloring_spec, window)?;
    let budget: Option<u64> = parsed.numeric_flag("budget")?.or_else(env_node_budget);
    let parameters = params(&[
        ("coloring", Value::from(coloring_spec)),
        ("window", Value::from(window)),
        ("budget", budget.map(Value::from).unwrap_or(Value::Null)),
    ]);
    match find_semi_mono_solution(&sys, &coloring, window, budget)? {
        SearchResult::Found { assignment, colors } => {
            emit_report(
                "find-solution",
                &digest,
                parameters,
                outcome_status(
                    "found",
                    &[("solution", solution_to_json(&assignment, &colors))],
                ),
            );
            eprintln!("semi-monochromatic witness found");
            Ok(EXIT_OK)
        }
        SearchResult::NotFound { window, .. } => {
            emit_report(
                "find-solution",
                &digest,
                parameters,
                outcome_status(
                    "not_found",
                    &[
                        ("window", Value::from(window)),
                        (
                            "note",
                            Value::from(
                                "exhaustive for this window only; not a proof for all of Z",
                            ),
                        ),
                    ],
                ),
            );
            eprintln!("no witness inside the window (window-relative result)");
            Ok(EXIT_NEGATIVE)
        }
        SearchResult::BudgetExhausted => {
            emit_report(
                "find-solution",
                &digest,
                parameters,
                outcome_status("budget_exhausted", &[]),
            );
            eprintln!("search budget exhausted");
            Ok(EXIT_BUDGET)
        }
    }
}

fn cmd_falsify(args: &[String]) -> Result<i32, Error> {
    let parsed = parse_args(args, &["primes-up-to", "window"])?;
    let (bytes, digest) = read_input(&parsed.file)?;
    let sys = parse_system(&bytes)?;
    let limit: u64 = parsed
        .numeric_flag("primes-up-to")?
        .ok_or_else(|| Error::Input("--primes-up-to is required".into()))?;
    let window: i64 = parsed
        .numeric_flag("window")?
        .ok_or_else(|| Error::Input("--window is required".into()))?;
    let primes = primes_up_to(limit);
    let report = falsify_semi_regularity(&sys, &primes, window, env_node_budget())?;
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let mut o = Map::new();
            o.insert("prime".into(), Value::from(e.prime));
            match &e.result {
                SearchResult::Found { assignment, colors } => {
                    o.insert("status".into(), Value::from("witness"));
                    o.insert("solution".into(), solution_to_json(assignment, colors));
                }
                SearchResult::NotFound { .. } => {
                    o.insert("status".into(), Value::from("no_solution_in_window"));
                }
                SearchResult::BudgetExhausted => {
                    o.insert("status".into(), Value::from("budget_exhausted"));
                }
            }
            Value::Object(o)
        })
        .collect();
    let unsolved = report.unsolved_primes();
    let parameters = params(&[
        ("primes_up_to", Value::from(limit)),
        ("window", Value::from(window)),
    ]);
    emit_report(
        "falsify",
        &digest,
        parameters,
        outcome_status(
            "report",
            &[
                ("window", Value::from(window)),
                ("entries", Value::Array(entries)),
                (
                    "unsolved_primes",
                    Value::Array(unsolved.iter().map(|&p| Value::from(p)).collect()),
                ),
                (
                    "note",
                    Value::from("window-bounded evidence only; absence in a window is not a proof"),
                ),
            ],
        ),
    );
    if unsolved.is_empty() {
        eprintln!("witnesses found for every prime");
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "no witness inside the window for {} prime(s): {:?}",
            unsolved.len(),
            unsolved
        );
        Ok(EXIT_NEGATIVE)
    }
}

fn cmd_extract_cert(args: &[String]) -> Result<i32, Error> {
    let parsed = parse_args(args, &["primes-up-to", "window", "report"])?;
    let (bytes, digest) = read_input(&parsed.file)?;
    let sys = parse_system(&bytes)?;
    let limit: u64 = parsed
        .numeric_flag("primes-up-to")?
        .ok_or_else(|| Error::Input("--primes-up-to is required".into()))?;
    let window: i64 = parsed
        .numeric_flag("window")?
        .ok_or_else(|| Error::Input("--window is required".into()))?;
    let primes = primes_up_to(limit);
    let extraction = extract_certificate(&sys, &primes, window)?;
    let provenance = extraction.report.to_json();
    if let Some(path) = parsed.flag("report") {
        std::fs::write(path, format!("{provenance}\n"))
            .map_err(|e| Error::Input(format!("cannot write {path}: {e}")))?;
    }
    let parameters = params(&[
        ("primes_up_to", Value::from(limit)),
        ("window", Value::from(window)),
    ]);
    match &extraction.outcome {
        ExtractionOutcome::Certificate(cert) => {
            emit_report(
                "extract-cert",
                &digest,
                parameters,
                outcome_status(
                    "certificate",
                    &[("certificate", cert.to_json()), ("provenance", provenance)],
                ),
            );
            eprintln!("certificate extracted and verified");
            Ok(EXIT_OK)
        }
        ExtractionOutcome::Failed { diagnostic } => {
            emit_report(
                "extract-cert",
                &digest,
                parameters,
                outcome_status(
                    "failed",
                    &[
                        ("diagnostic", Value::from(diagnostic.as_str())),
                        ("provenance", provenance),
                    ],
                ),
            );
            eprintln!("extraction failed: {diagnostic}");
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cmd_semi_rado(args: &[String]) -> Result<i32, Error> {
    let parsed = parse_args(args, &["colors", "max-window"])?;
    let (bytes, digest) = read_input(&parsed.file)?;
    let sys = parse_system(&bytes)?;
    let colors: u32 = parsed
        .numeric_flag("colors")?
        .ok_or_else(|| Error::Input("--colors is required".into()))?;
    let max_window: i64 = parsed
        .numeric_flag("max-window")?
        .ok_or_else(|| Error::Input("--max-window is required".into()))?;
    let parameters = params(&[
        ("colors", Value::from(colors)),
        ("max_window", Value::from(max_window)),
    ]);
    match semi_rado_number(&sys, colors, max_window, DEFAULT_ENUMERATION_CAP)? {
        Some(radius) => {
            emit_report(
                "semi-rado",
                &digest,
                parameters,
                outcome_status("determined", &[("semi_rado_number", Value::from(radius))]),
            );
            eprintln!("semi-Rado number: {radius}");
            Ok(EXIT_OK)
        }
        None => {
            emit_report(
                "semi-rado",
                &digest,
                parameters,
                outcome_status("none_up_to", &[("max_window", Value::from(max_window))]),
            );
            eprintln!("no qualifying window radius up to {max_window}");
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cmd_smod(args: &[String]) -> Result<i32, Error> {
    let Some((p_arg, values)) = args.split_first() else {
        return Err(Error::Input("usage: smod P N...".into()));
    };
    let p: Int = p_arg
        .parse()
        .map_err(|_| Error::Input(format!("invalid prime `{p_arg}`")))?;
    if !is_prime(&p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if values.is_empty() {
        return Err(Error::Input("smod expects at least one value".into()));
    }
    let mut lines = Vec::with_capacity(values.len());
    for v in values {
        let q = parse_rational_arg(v)?;
        lines.push(smod(&q, &p)?.to_string());
    }
    println!("{}", lines.join("\n"));
    Ok(EXIT_OK)
}

/// Accepts decimal integers and a/b fractions.
fn parse_rational_arg(s: &str) -> Result<Rational, Error> {
    let bad = || Error::Input(format!("invalid integer or fraction `{s}`"));
    match s.split_once('/') {
        Some((num, den)) => {
            let n: Int = num.parse().map_err(|_| bad())?;
            let d: Int = den.parse().map_err(|_| bad())?;
            if d == Int::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: Int = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}
