//! Command-line interface: `simulate`, `theory`, `oracle`, `enumerate` and
//! `verify`.
//!
//! Exit status is 0 on success, 1 when `verify` finds a failing criterion,
//! 2 on configuration errors (including exceeded caps) and 3 on I/O errors.

mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::combinatorics::{card_a2ps, count, h_pk, EnumerationCaps, Family};
use crate::error::{LabError, Result};
use crate::experiments::report::{fmt_human, to_json, write_atomic, write_reports_csv, write_reports_json};
use crate::experiments::{
    export_paths, run_covariance_experiment, run_joint_moment_experiment, run_verify, VerifyScale,
};
use crate::limit_theory::{
    exact_finite_n_cov_with, limit_cov, oracle_limit, CovQuery, OracleCaps, TheoryMode,
};
use crate::MatrixKind;

pub use config::{OutputFormat, RunConfig, SimulateKind};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CIRCLAB_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "circlab", version, about = "Trace fluctuations of Brownian circulant matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment and write CSV/JSON reports.
    Simulate(Box<SimulateArgs>),
    /// Evaluate a limit covariance.
    Theory(TheoryArgs),
    /// Exact finite-n covariance from Gaussian moments.
    Oracle(OracleArgs),
    /// Count constrained index tuples.
    Enumerate(EnumerateArgs),
    /// Run the full acceptance sweep.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Default)]
pub struct SimulateArgs {
    /// Flat TOML configuration; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// covariance, joint or paths.
    #[arg(long)]
    pub experiment: Option<String>,
    #[arg(long)]
    pub kind: Option<String>,
    /// Comma-separated orders.
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<u32>>,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub replicas: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub centering: Option<String>,
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// csv, json or both.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
struct TheoryArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    t1: f64,
    #[arg(long)]
    t2: f64,
    #[arg(long, default_value = "reconciled")]
    mode: String,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    t1: f64,
    #[arg(long)]
    t2: f64,
    /// Dimension; omit to extrapolate over small odd n.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    max_n: Option<u32>,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    /// a2p, a2ps, aksc, atilde or apk.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: u32,
    /// Order; tuples have length 2p for a2p/a2ps and p otherwise.
    #[arg(long)]
    p: u32,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
    #[arg(long)]
    k: Option<u32>,
    /// Print the closed form (card_A2ps or h_p(k)) next to the count.
    #[arg(long)]
    closed_form: bool,
    #[arg(long)]
    max_work: Option<u128>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Small n and R; much weaker Monte Carlo checks.
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Runs the CLI on `argv` (program name first) and returns the exit status.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = std::io::stdout();
    let mut out = out.lock();
    let result = match cli.command {
        Command::Simulate(a) => simulate(*a, &mut out).map(|_| 0),
        Command::Theory(a) => theory(a, &mut out).map(|_| 0),
        Command::Oracle(a) => oracle(a, &mut out).map(|_| 0),
        Command::Enumerate(a) => enumerate(a, &mut out).map(|_| 0),
        Command::Verify(a) => verify(a, &mut out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_configuration() {
                2
            } else {
                3
            }
        }
    }
}

fn emit(out: &mut impl Write, line: impl AsRef<str>) -> Result<()> {
    writeln!(out, "{}", line.as_ref()).map_err(|e| LabError::io("<stdout>", e))
}

fn resolve_out_dir(explicit: Option<PathBuf>) -> PathBuf {
    explicit
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("circlab-out"))
}

fn simulate(args: SimulateArgs, out: &mut impl Write) -> Result<()> {
    let run = RunConfig::resolve(&args)?;
    let cfg = run.experiment_config()?;
    cfg.validate()?;
    let dir = resolve_out_dir(run.out_dir.clone());
    match run.experiment {
        SimulateKind::Covariance => {
            let rep = run_covariance_experiment(&cfg)?;
            let stem = dir.join(&rep.experiment_id);
            let reports = std::slice::from_ref(&rep);
            if run.format.csv() {
                write_reports_csv(&stem.with_extension("csv"), reports)?;
            }
            if run.format.json() {
                write_reports_json(&stem.with_extension("json"), reports)?;
            }
            emit(
                out,
                format!(
                    "{} cov={} se={} reconciled={} oracle={} verdict={}",
                    rep.experiment_id,
                    fmt_human(rep.empirical),
                    fmt_human(rep.se),
                    opt_human(rep.theory_reconciled),
                    opt_human(rep.oracle),
                    rep.verdict
                ),
            )?;
        }
        SimulateKind::Joint => {
            let rep = run_joint_moment_experiment(&cfg)?;
            write_atomic(&dir.join(format!("{}.json", rep.experiment_id)), &to_json(&rep)?)?;
            emit(
                out,
                format!(
                    "{} moment={} se={} isserlis={} verdict={}",
                    rep.experiment_id,
                    fmt_human(rep.empirical.value),
                    fmt_human(rep.empirical.se),
                    opt_human(rep.reference_theory.or(rep.reference_oracle)),
                    rep.verdict
                ),
            )?;
        }
        SimulateKind::Paths => {
            let path = dir.join(format!("paths-{}-{}.csv", cfg.kind, cfg.hash()));
            export_paths(&cfg, &path)?;
            emit(out, path.display().to_string())?;
        }
    }
    Ok(())
}

fn opt_human(x: Option<f64>) -> String {
    x.map(fmt_human).unwrap_or_else(|| "n/a".into())
}

fn theory(a: TheoryArgs, out: &mut impl Write) -> Result<()> {
    let kind: MatrixKind = a.kind.parse()?;
    let mode = TheoryMode::parse(&a.mode)?;
    let v = limit_cov(&CovQuery::new(kind, a.p, a.q, a.t1, a.t2)?, mode)?;
    emit(out, fmt_human(v))
}

fn oracle(a: OracleArgs, out: &mut impl Write) -> Result<()> {
    let kind: MatrixKind = a.kind.parse()?;
    match a.n {
        Some(n) => {
            let mut caps = OracleCaps::default();
            if let Some(m) = a.max_n {
                caps.cov_max_n = m;
            }
            let v = exact_finite_n_cov_with(kind, a.p, a.q, a.t1, a.t2, n, &caps)?;
            emit(out, fmt_human(v))
        }
        None => {
            let (seq, ex) = oracle_limit(kind, a.p, a.q, a.t1, a.t2)?;
            for (n, v) in seq {
                emit(out, format!("n={n} {}", fmt_human(v)))?;
            }
            emit(out, format!("limit {}", fmt_human(ex.limit)))
        }
    }
}

fn parse_family(a: &EnumerateArgs) -> Result<(Family, usize)> {
    let p = a.p as usize;
    let need = |name: &str, v: Option<i64>| {
        v.ok_or_else(|| LabError::Config(format!("family {} needs --{name}", a.family)))
    };
    Ok(match a.family.as_str() {
        "a2p" => (Family::A2p, 2 * p),
        "a2ps" => (Family::A2ps { s: need("s", a.s)? }, 2 * p),
        "aksc" | "ak" => (Family::AkSc, p),
        "atilde" | "atilde-k" | "aksc-tilde" => (Family::AtildeSc, p),
        "apk" => (Family::Apk { k: need("k", a.k.map(i64::from))? as usize }, p),
        other => {
            return Err(LabError::Config(format!(
                "unknown family {other:?} (expected a2p, a2ps, aksc, atilde or apk)"
            )))
        }
    })
}

fn enumerate(a: EnumerateArgs, out: &mut impl Write) -> Result<()> {
    let (family, len) = parse_family(&a)?;
    let mut caps = EnumerationCaps::default();
    if let Some(m) = a.max_work {
        caps.max_work = m;
    }
    let c = count(family, a.n, len, &caps)?;
    emit(out, c.to_string())?;
    if a.closed_form {
        match family {
            Family::A2ps { s } => emit(out, format!("closed form {}", card_a2ps(a.n as u64, a.p as u64, s)?))?,
            Family::Apk { k } => emit(out, format!("h_p(k) {}", h_pk(a.p, k as u32)?))?,
            _ => {}
        }
    }
    Ok(())
}

fn verify(a: VerifyArgs, out: &mut impl Write) -> Result<i32> {
    let mut scale = if a.quick { VerifyScale::quick() } else { VerifyScale::desk() };
    if let Some(s) = a.seed {
        scale.seed = s;
    }
    if let Some(w) = a.workers {
        scale.workers = w;
    }
    let dir = resolve_out_dir(a.out_dir);
    let report = run_verify(scale)?;
    write_reports_csv(&dir.join("verify-covariances.csv"), &report.covariances)?;
    write_atomic(&dir.join("verify.json"), &to_json(&report)?)?;
    for c in &report.checks {
        emit(out, format!("[{:>2}] {:<14} {}  ({})", c.criterion, c.verdict.name(), c.name, c.detail))?;
    }
    for d in &report.discrepancies {
        emit(
            out,
            format!(
                "discrepancy {}: paper-literal={} reconciled={} oracle={} verdict={}",
                d.quantity,
                fmt_human(d.paper_literal),
                fmt_human(d.reconciled),
                fmt_human(d.oracle),
                d.verdict
            ),
        )?;
    }
    Ok(if report.all_pass() { 0 } else { 1 })
}
