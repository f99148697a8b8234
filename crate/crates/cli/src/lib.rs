//! Command-line front end: symbol parsing, dispatch and JSON reports.

pub mod dsl;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hardy_na::harness::{self, ExampleConfig, SuiteConfig};
use hardy_na::par::Execution;
use hardy_na::theory::{decide, NumericConfig};
use hardy_na::Verdict;
use serde_json::json;

use crate::dsl::{inner_from_text, parse_symbol, symbol_from_text, DslError, SymbolExpr};
use crate::report::{write_atomic, Payload, ReportEnvelope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

pub const SEED_ENV: &str = "HARDY_NA_SEED";

#[derive(Parser, Debug)]
#[command(name = "hardy-na", version, about = "Norm attainment of dual truncated Toeplitz operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = ExecArg::Parallel)]
    execution: ExecArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExecArg {
    Sequential,
    Parallel,
}

impl From<ExecArg> for Execution {
    fn from(e: ExecArg) -> Self {
        match e {
            ExecArg::Sequential => Execution::Sequential,
            ExecArg::Parallel => Execution::Parallel,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide norm attainment of D_phi on K_u^perp.
    Decide {
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        inner: String,
        /// Finite-section sizes for the numeric evidence.
        #[arg(long = "N", value_delimiter = ',')]
        n: Vec<usize>,
        /// Exit 3 on an Undecided verdict.
        #[arg(long)]
        strict: bool,
        /// Skip the finite-section evidence.
        #[arg(long)]
        no_evidence: bool,
    },
    /// Run a seeded identity suite.
    Suite {
        id: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long = "N", default_value_t = 64)]
        n: usize,
    },
    /// Reproduce a named example.
    Example {
        id: String,
        /// Zero `a` of the nontrivial example.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Zero `b` of the nontrivial example.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Arc set of the chi-e example, e.g. "arc([0, pi])".
        #[arg(long)]
        arcs: Option<String>,
        #[arg(long = "N-list", value_delimiter = ',')]
        n_list: Vec<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// sigma_max of the block section over a range of N.
    Spectrum {
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        inner: String,
        #[arg(long = "N-list", value_delimiter = ',', default_value = "16,32,64,128")]
        n_list: Vec<usize>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("--{flag}: {source}")]
    Dsl { flag: &'static str, source: DslError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] hardy_na::Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

fn dsl(flag: &'static str) -> impl Fn(DslError) -> CliError {
    move |source| CliError::Dsl { flag, source }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn complex_arg(flag: &'static str, text: &str) -> Result<hardy_na::C64, CliError> {
    match parse_symbol(text).map_err(dsl(flag))? {
        SymbolExpr::Number(c) => Ok(c),
        _ => Err(CliError::Usage(format!("--{flag} expects a complex number, got {text:?}"))),
    }
}

struct Outcome {
    envelope: ReportEnvelope,
    summary: String,
    code: i32,
}

fn execute(cli: Cli) -> Result<Outcome, CliError> {
    let execution: Execution = cli.execution.into();
    let (command, config, payload, summary, code) = match cli.command {
        Command::Decide { symbol, inner, n, strict, no_evidence } => {
            let phi = symbol_from_text(&symbol).map_err(dsl("symbol"))?;
            let u = inner_from_text(&inner).map_err(dsl("inner"))?;
            let mut cfg = if n.is_empty() { NumericConfig::default() } else { NumericConfig::with_n(n) };
            cfg.execution = execution;
            cfg.evidence = !no_evidence;
            let report = decide(&phi, &u, &cfg);
            let code = if strict && report.verdict == Verdict::Undecided { EXIT_UNDECIDED } else { EXIT_OK };
            let mut summary = format!("decide: {}", report.verdict.as_str());
            if let Some(a) = &report.analytic {
                summary.push_str(&format!(", analytic extremals {} H^2", a.extremal_generator));
            }
            let config = json!({ "symbol": symbol, "inner": inner, "numeric": cfg, "strict": strict });
            ("decide", config, Payload::Decision(Box::new(report)), summary, code)
        }
        Command::Suite { id, seed, count, n } => {
            let cfg = SuiteConfig { seed: resolve_seed(seed)?, count, n, execution };
            let cases = harness::run_suite(&id, &cfg)?;
            let passed = cases.iter().filter(|c| c.pass).count();
            let mut summary = format!("suite {id}: {passed}/{} passed", cases.len());
            for c in cases.iter().filter(|c| !c.pass) {
                summary.push_str(&format!("\n  case {}: {}", c.index, c.failures().join(", ")));
            }
            let code = if passed == cases.len() { EXIT_OK } else { EXIT_FAILURE };
            let config = json!({ "suite": id, "seed": cfg.seed, "count": count, "n": n });
            ("suite", config, Payload::Suite(cases), summary, code)
        }
        Command::Example { id, a, b, arcs, n_list, seed } => {
            let mut cfg = ExampleConfig { seed: resolve_seed(seed)?, execution, ..ExampleConfig::default() };
            if let Some(a) = &a {
                cfg.a = complex_arg("a", a)?;
            }
            if let Some(b) = &b {
                cfg.b = complex_arg("b", b)?;
            }
            if let Some(arcs) = &arcs {
                match parse_symbol(arcs).map_err(dsl("arcs"))? {
                    SymbolExpr::Arc(list) => cfg.arcs = list,
                    _ => return Err(CliError::Usage("--arcs expects arc([t1, t2], ...)".into())),
                }
            }
            if !n_list.is_empty() {
                cfg.n_values = Some(n_list);
            }
            let out = harness::reproduce_example(&id, &cfg)?;
            let verdict = out.report.as_ref().map(|r| format!(", verdict {}", r.verdict.as_str())).unwrap_or_default();
            let summary = format!("example {id}: {}{verdict}", if out.case.pass { "pass" } else { "FAIL" });
            let code = if out.case.pass { EXIT_OK } else { EXIT_FAILURE };
            let config = json!({ "example": id, "params": cfg });
            ("example", config, Payload::Example(Box::new(out)), summary, code)
        }
        Command::Spectrum { symbol, inner, n_list } => {
            let phi = symbol_from_text(&symbol).map_err(dsl("symbol"))?;
            let u = inner_from_text(&inner).map_err(dsl("inner"))?;
            if n_list.is_empty() {
                return Err(CliError::Usage("--N-list is empty".into()));
            }
            let trace = harness::spectrum(&phi, &u, &n_list, execution);
            let values: Vec<String> = trace
                .n_values
                .iter()
                .zip(&trace.sigma_max)
                .map(|(n, s)| format!("N={n}: {:.12}", s.unwrap_or(f64::NAN)))
                .collect();
            let summary = format!("spectrum: {}", values.join(", "));
            let config = json!({ "symbol": symbol, "inner": inner, "n_list": n_list });
            ("spectrum", config, Payload::Spectrum(trace), summary, EXIT_OK)
        }
    };
    Ok(Outcome { envelope: ReportEnvelope::new(command, config, payload), summary, code })
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let out = cli.out.clone();
    let outcome = match execute(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let json = outcome.envelope.to_json();
    match out {
        Some(path) => {
            if let Err(e) = write_atomic(&path, &json) {
                eprintln!("error: {}", CliError::Io(e));
                return EXIT_USAGE;
            }
        }
        None => println!("{json}"),
    }
    eprintln!("{}", outcome.summary);
    outcome.code
}
