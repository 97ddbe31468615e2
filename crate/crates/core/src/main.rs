//! convexcheck: certify convexity of a small DAG ReLU network on a box.
//!
//! Subcommands:
//!   check <file>   certify a network JSON file (exit 0 convex, 1 not
//!                  convex, 2 inconclusive, >= 64 errors)
//!   demo           walk through the bundled convex-but-not-ICNN example
//!   experiment     sampling experiment over architectures, CSV output
//!
//! The worker pool size is capped by CONVEXCHECK_THREADS.

use std::process::ExitCode;

use convexcheck::checker::{check_convexity_full, check_necessary, CheckOptions, Status};
use convexcheck::experiment::{run_experiment, to_csv, ExperimentConfig};
use convexcheck::network::Network;
use convexcheck::oracle::{cpwl_convex_oracle, sample_convex_oracle};
use convexcheck::regions::DomainBox;
use convexcheck::{demo, AnalysisError};

const EXIT_USAGE: u8 = 64;
const EXIT_INPUT: u8 = 65;
const EXIT_INTERNAL: u8 = 66;

const USAGE: &str = "\
convexcheck: convexity certification for small DAG ReLU networks

USAGE:
  convexcheck check <file.json> [--box R] [--cross-check] [--necessary-only]
                    [--zero-tol T] [--margin-tol T] [--seed S] [--json OUT]
  convexcheck demo [--json OUT]
  convexcheck experiment [--widths A..B] [--draws N] [--seed S] [--box R]
                         [--d D] [--skip] [--out CSV]

check exit codes: 0 convex, 1 not convex, 2 inconclusive, 64+ errors.
Set CONVEXCHECK_THREADS to cap the worker pool.";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(String::as_str) {
        Some("check") => cmd_check(&args[1..]),
        Some("demo") => cmd_demo(&args[1..]),
        Some("experiment") => cmd_experiment(&args[1..]),
        Some("--help") | Some("-h") | Some("help") => {
            println!("{USAGE}");
            ExitCode::SUCCESS
        }
        _ => {
            eprintln!("{USAGE}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

struct Flags {
    positional: Vec<String>,
    named: Vec<(String, Option<String>)>,
}

/// Flags that take a value; everything else is boolean.
const VALUED: &[&str] = &[
    "--box", "--zero-tol", "--margin-tol", "--seed", "--json", "--widths", "--draws", "--out",
    "--d",
];

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut flags = Flags { positional: Vec::new(), named: Vec::new() };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        if let Some(name) = arg.strip_prefix("--").map(|_| arg.clone()) {
            if VALUED.contains(&name.as_str()) {
                let value = it.next().ok_or_else(|| format!("{name} needs a value"))?;
                flags.named.push((name, Some(value.clone())));
            } else {
                flags.named.push((name, None));
            }
        } else {
            flags.positional.push(arg.clone());
        }
    }
    Ok(flags)
}

impl Flags {
    fn has(&self, name: &str) -> bool {
        self.named.iter().any(|(n, _)| n == name)
    }

    fn value(&self, name: &str) -> Option<&str> {
        self.named.iter().find(|(n, _)| n == name).and_then(|(_, v)| v.as_deref())
    }

    fn parsed<T: std::str::FromStr>(&self, name: &str, default: T) -> Result<T, String> {
        match self.value(name) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| format!("invalid value for {name}: {v}")),
        }
    }

    fn unknown(&self, allowed: &[&str]) -> Option<&str> {
        self.named.iter().map(|(n, _)| n.as_str()).find(|n| !allowed.contains(n))
    }
}

fn analysis_exit(err: &AnalysisError) -> u8 {
    match err {
        AnalysisError::Network(_) | AnalysisError::Domain(_) => EXIT_INPUT,
        _ => EXIT_INTERNAL,
    }
}

fn cmd_check(args: &[String]) -> ExitCode {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    if let Some(bad) = flags.unknown(&[
        "--box",
        "--cross-check",
        "--necessary-only",
        "--zero-tol",
        "--margin-tol",
        "--seed",
        "--json",
    ]) {
        return usage_error(&format!("unknown flag {bad}"));
    }
    let [path] = flags.positional.as_slice() else {
        return usage_error("check expects exactly one network file");
    };
    let net = match Network::load_path(path) {
        Ok(net) => net,
        Err(e) => {
            eprintln!("error: cannot load {path}: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };

    let mut opts = CheckOptions::default();
    let halfwidth = match flags.parsed("--box", 3.0) {
        Ok(v) => v,
        Err(e) => return usage_error(&e),
    };
    match flags.parsed("--zero-tol", opts.tol.zero_tol) {
        Ok(v) => opts.tol.zero_tol = v,
        Err(e) => return usage_error(&e),
    }
    match flags.parsed("--margin-tol", opts.tol.margin_tol) {
        Ok(v) => opts.tol.margin_tol = v,
        Err(e) => return usage_error(&e),
    }
    match flags.parsed("--seed", opts.seed) {
        Ok(v) => opts.seed = v,
        Err(e) => return usage_error(&e),
    }
    let box_ = DomainBox::centered(net.input_dim(), halfwidth);

    if flags.has("--necessary-only") {
        let records = match check_necessary(&net, &box_, &opts) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(analysis_exit(&e));
            }
        };
        let all_ok = records.iter().all(|c| c.satisfied);
        let rows: Vec<serde_json::Value> = records
            .iter()
            .map(|c| {
                serde_json::json!({
                    "neuron": net.name(c.neuron),
                    "value": c.value,
                    "satisfied": c.satisfied,
                })
            })
            .collect();
        let doc = serde_json::json!({ "necessary_conditions": rows, "all_satisfied": all_ok });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        return if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
    }

    let outcome = match check_convexity_full(&net, &box_, &opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(analysis_exit(&e));
        }
    };
    let mut doc = outcome.report.to_json(&net);
    if flags.has("--cross-check") {
        let exact = match cpwl_convex_oracle(&outcome.regions, &outcome.frontiers) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(analysis_exit(&e));
            }
        };
        let sampled = match sample_convex_oracle(&net, &box_, 100_000, opts.seed ^ 0xacc) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(analysis_exit(&e));
            }
        };
        let status_convex = outcome.report.status == Status::Convex;
        doc["cross_check"] = serde_json::json!({
            "exact_oracle_convex": exact.convex,
            "sampling_oracle_convex": sampled.convex,
            "agree_with_status": outcome.report.status == Status::Inconclusive
                || (exact.convex == status_convex && (sampled.convex || !status_convex)),
        });
    }
    let rendered = serde_json::to_string_pretty(&doc).unwrap();
    println!("{rendered}");
    if let Some(out) = flags.value("--json") {
        if let Err(e) = std::fs::write(out, rendered + "\n") {
            eprintln!("error: cannot write {out}: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match outcome.report.status {
        Status::Convex => ExitCode::SUCCESS,
        Status::NotConvex => ExitCode::from(1),
        Status::Inconclusive => ExitCode::from(2),
    }
}

fn cmd_demo(args: &[String]) -> ExitCode {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    if let Some(bad) = flags.unknown(&["--json"]) {
        return usage_error(&format!("unknown flag {bad}"));
    }
    let demo = match demo::run() {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(analysis_exit(&e));
        }
    };
    print!("{}", demo.render());
    if let Some(out) = flags.value("--json") {
        let doc = serde_json::to_string_pretty(&demo.to_json()).unwrap();
        if let Err(e) = std::fs::write(out, doc + "\n") {
            eprintln!("error: cannot write {out}: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match demo.report.status {
        Status::Convex => ExitCode::SUCCESS,
        Status::NotConvex => ExitCode::from(1),
        Status::Inconclusive => ExitCode::from(2),
    }
}

fn cmd_experiment(args: &[String]) -> ExitCode {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    if let Some(bad) =
        flags.unknown(&["--widths", "--draws", "--seed", "--box", "--d", "--skip", "--out"])
    {
        return usage_error(&format!("unknown flag {bad}"));
    }
    let mut cfg = ExperimentConfig::default();
    if let Some(widths) = flags.value("--widths") {
        let Some((a, b)) = widths.split_once("..") else {
            return usage_error("--widths expects MIN..MAX");
        };
        match (a.parse(), b.parse()) {
            (Ok(lo), Ok(hi)) => {
                cfg.width_min = lo;
                cfg.width_max = hi;
            }
            _ => return usage_error("--widths expects MIN..MAX"),
        }
    }
    match flags.parsed("--draws", cfg.draws) {
        Ok(v) => cfg.draws = v,
        Err(e) => return usage_error(&e),
    }
    match flags.parsed("--seed", cfg.seed) {
        Ok(v) => cfg.seed = v,
        Err(e) => return usage_error(&e),
    }
    match flags.parsed("--box", cfg.box_halfwidth) {
        Ok(v) => cfg.box_halfwidth = v,
        Err(e) => return usage_error(&e),
    }
    match flags.parsed("--d", cfg.d) {
        Ok(v) => cfg.d = v,
        Err(e) => return usage_error(&e),
    }
    cfg.skip = flags.has("--skip");

    let cells = match run_experiment(&cfg) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(analysis_exit(&e));
        }
    };
    let csv = to_csv(&cells);
    match flags.value("--out") {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &csv) {
                eprintln!("error: cannot write {path}: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
        }
        None => print!("{csv}"),
    }
    ExitCode::SUCCESS
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}\n\n{USAGE}");
    ExitCode::from(EXIT_USAGE)
}
