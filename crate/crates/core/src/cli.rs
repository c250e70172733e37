//! Command line driver. Configuration comes from one JSON document; every
//! command writes deterministic output.
//!
//! Exit codes: 0 success, 1 a suite or check failed, 2 bad configuration or
//! input, 3 a computation exceeded a capacity or depth limit.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Error;
use crate::field::FieldSpec;
use crate::growth::{hilbert_csv, hilbert_rows, nil_check};
use crate::power::WordSet;
use crate::schedule::{build_schedule, verify_schedule, AlphaSpec, Grade, SparseSchedule, ToyOverrides};
use crate::suites::{self, NamedTowerSpec, PowerCase, SuiteReport};
use crate::tower::{ProjectionTower, SlotSpec, TowerSpec};
use crate::vector::FreeVector;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

/// Schedule section of the configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct ScheduleConfig {
    pub grade: Grade,
    pub alpha: AlphaSpec,
    pub i_max: usize,
    /// Sampled `n` for the chain check.
    pub samples: usize,
    /// Toy grade only.
    pub f: Vec<u64>,
    pub g: Vec<u64>,
    pub sets: Vec<WordSet>,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig { grade: Grade::Theorem, alpha: AlphaSpec::Log2Log2, i_max: 3, samples: 10, f: vec![], g: vec![], sets: vec![] }
    }
}

/// The whole run configuration. Every field has a default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct RunConfig {
    /// Field characteristic for single-tower commands.
    pub p: u64,
    /// Highest tower level built.
    pub max_level: u32,
    /// Largest degree at which dense bases are formed; at most 16.
    pub dense_cap: u32,
    /// Tower for `hilbert`, `nil` and `tower`.
    pub tower: TowerSpec,
    /// Towers swept by the suites.
    pub towers: Vec<NamedTowerSpec>,
    /// Characteristics the suites sweep.
    pub suite_primes: Vec<u64>,
    /// Level the tower suites build to.
    pub suite_level: u32,
    pub power_cases: Vec<PowerCase>,
    pub schedule: ScheduleConfig,
    /// Suites run by `verify` when none is named.
    pub suites: Vec<String>,
    pub out_dir: Option<PathBuf>,
    /// Worker threads; the machine's core count when absent.
    pub threads: Option<usize>,
    /// Required by sampling suites.
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 2,
            max_level: 5,
            dense_cap: 16,
            tower: TowerSpec {
                f: vec![2u32.into()],
                g: vec![1u32.into()],
                slots: vec![SlotSpec::Words(vec!["xxxx".parse().expect("word")])],
            },
            towers: suites::default_tower_specs(),
            suite_primes: vec![2, 3],
            suite_level: 6,
            power_cases: suites::default_power_cases(),
            schedule: ScheduleConfig::default(),
            suites: suites::SUITES.iter().map(|s| s.to_string()).collect(),
            out_dir: None,
            threads: None,
            seed: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.dense_cap > 16 {
            return Err(Error::InvalidParams(format!("denseCap {} exceeds 16", self.dense_cap)));
        }
        for s in &self.suites {
            if !suites::SUITES.contains(&s.as_str()) {
                return Err(Error::InvalidParams(format!("unknown suite {s}")));
            }
        }
        FieldSpec::new(self.p)?;
        self.schedule.alpha.validate()
    }

    fn field(&self) -> crate::Result<FieldSpec> {
        FieldSpec::new(self.p)
    }

    fn build_tower(&self) -> crate::Result<ProjectionTower> {
        ProjectionTower::build(&self.tower.to_params(self.max_level, self.field()?)?)
    }
}

#[derive(Debug, Parser)]
#[command(name = "nilalg", version, about = "Nil algebras of subexponential growth over prime fields")]
pub struct Cli {
    /// JSON run configuration. Defaults: p=2, maxLevel=5, denseCap=16,
    /// tower f=(2), g=(1), W=span{xxxx}; suites sweep four toy towers over
    /// p=2,3 at level 6; theorem-grade schedule with alpha=log2log2, iMax=3,
    /// 10 chain samples; no seed.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and write one JSON report per suite.
    Verify(VerifyArgs),
    /// Emit the Hilbert series CSV.
    Hilbert(HilbertArgs),
    /// Decide whether a power of an element lies in the ideal.
    Nil(NilArgs),
    /// Build or check a sparse schedule.
    #[command(subcommand)]
    Schedule(ScheduleCommand),
    /// Build the configured tower.
    #[command(subcommand)]
    Tower(TowerCommand),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run, repeatable; all configured suites when absent.
    #[arg(long = "suite")]
    pub suites: Vec<String>,
    /// Word set for a single power-containment case.
    #[arg(long = "S", requires = "n")]
    pub s: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Characteristic for the single case.
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    /// Sampled coefficient vectors for the single case; exhaustive when absent.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct HilbertArgs {
    #[arg(long, default_value_t = 12)]
    pub n_max: u32,
    /// Largest n with an exact quotient dimension.
    #[arg(long, default_value_t = 12)]
    pub exact_max: u32,
    /// Growth function: log2log2, log2, sqrt-log or table:n=v,...; the
    /// configured schedule's when absent.
    #[arg(long)]
    pub alpha: Option<AlphaSpec>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NilArgs {
    /// Homogeneous element, e.g. "x + 2*y".
    #[arg(long)]
    pub element: String,
    #[arg(long)]
    pub exponent: u32,
}

#[derive(Debug, Subcommand)]
pub enum ScheduleCommand {
    /// Build the configured schedule and print it as JSON.
    Build {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the inequality chain on a schedule file, or on the configured one.
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TowerCommand {
    /// Print a per-level summary.
    Build,
    /// Print the full tower as JSON.
    Dump {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capacity { .. } | Error::Depth { .. } | Error::WordTooLong(_) => EXIT_CAPACITY,
            Error::Internal(_) => EXIT_FAILED,
            _ => EXIT_CONFIG,
        };
        Failure { code, message: e.to_string() }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_CONFIG, message: message.into() }
}

fn io_error(e: std::io::Error) -> Failure {
    Failure { code: EXIT_FAILED, message: e.to_string() }
}

pub fn load_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    let config = match path {
        None => RunConfig::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| config_error(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", p.display())))?
        }
    };
    config.validate()?;
    Ok(config)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(io_error),
        None => out.write_all(text.as_bytes()).map_err(io_error),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    // Results are buffered and written from this thread once the workers finish.
    let mut buf = Vec::new();
    let result = execute(&cli, &mut buf);
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, out: &mut Vec<u8>) -> Result<i32, Failure> {
    let mut config = load_config(cli.config.as_deref())?;
    if cli.seed.is_some() {
        config.seed = cli.seed;
    }
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = config.threads {
            b = b.num_threads(t);
        }
        b.build().map_err(|e| config_error(e.to_string()))?
    };
    pool.install(|| match &cli.command {
        Command::Verify(a) => cmd_verify(&config, a, out),
        Command::Hilbert(a) => cmd_hilbert(&config, a, out),
        Command::Nil(a) => cmd_nil(&config, a, out),
        Command::Schedule(c) => cmd_schedule(&config, c, out),
        Command::Tower(c) => cmd_tower(&config, c, out),
    })
}

/// Runs one suite by name under `config`.
pub fn run_suite(config: &RunConfig, name: &str) -> crate::Result<SuiteReport> {
    let tower_suite = matches!(name, "prop31" | "equivalence" | "lemma33" | "ideal" | "prop36");
    let towers = if tower_suite { suites::build_towers(&config.towers, &config.suite_primes, config.suite_level)? } else { vec![] };
    let extended = config.dense_cap > crate::tower::oracle::ORACLE_DEFAULT_DEGREE;
    match name {
        "prop31" => suites::suite_tower_conditions(&towers, config.suite_level, extended),
        "equivalence" => suites::suite_projection_oracle(&towers, 3),
        "lemma33" => suites::suite_chain_span(&towers, 12),
        "lemma41" => suites::suite_power_containment(&config.power_cases, config.seed),
        "ideal" => suites::suite_ideal(&towers, 7),
        "nil" => suites::suite_nil(config.field()?, 7),
        "prop36" => suites::suite_chain_estimate(&towers),
        "schedule" => suites::suite_schedule(&config.schedule.alpha, config.schedule.samples),
        other => Err(Error::InvalidParams(format!("unknown suite {other}"))),
    }
}

fn cmd_verify(config: &RunConfig, a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut config = config.clone();
    let mut names = if a.suites.is_empty() { config.suites.clone() } else { a.suites.clone() };
    if let Some(s) = &a.s {
        let n = a.n.ok_or_else(|| config_error("--S needs --n"))?;
        config.power_cases = vec![PowerCase { s: s.clone(), n, p: a.p, samples: a.samples }];
        if a.suites.is_empty() {
            names = vec!["lemma41".into()];
        }
    }
    for n in &names {
        if !suites::SUITES.contains(&n.as_str()) {
            return Err(config_error(format!("unknown suite {n}")));
        }
    }
    if names.iter().any(|n| n == "lemma41") && config.seed.is_none() && suites::power_cases_need_seed(&config.power_cases) {
        return Err(config_error("the lemma41 suite samples coefficients and needs a seed (--seed or \"seed\")"));
    }
    if let Some(dir) = &config.out_dir {
        std::fs::create_dir_all(dir).map_err(io_error)?;
    }
    let mut all = true;
    let mut summary = Vec::new();
    for name in &names {
        let report = run_suite(&config, name)?;
        all &= report.passed;
        let status = if report.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {name} ({} checks, {} failures)", report.checks, report.failures.len()).map_err(io_error)?;
        for f in &report.failures {
            writeln!(out, "  {f}").map_err(io_error)?;
        }
        if let Some(dir) = &config.out_dir {
            std::fs::write(dir.join(format!("{name}.json")), pretty(&report)).map_err(io_error)?;
        }
        summary.push(json!({"suite": name, "passed": report.passed, "checks": report.checks}));
    }
    if let Some(dir) = &config.out_dir {
        std::fs::write(dir.join("summary.json"), pretty(&summary)).map_err(io_error)?;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_hilbert(config: &RunConfig, a: &HilbertArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let tower = config.build_tower()?;
    let alpha = a.alpha.clone().unwrap_or_else(|| config.schedule.alpha.clone());
    alpha.validate()?;
    let rows = hilbert_rows(&tower, a.n_max, a.exact_max, &alpha)?;
    emit(out, a.out.as_deref(), &hilbert_csv(&rows))?;
    Ok(if rows.iter().all(|r| r.within_bound) { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_nil(config: &RunConfig, a: &NilArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let field = config.field()?;
    let y = FreeVector::parse(&a.element, &field, None)?;
    let tower = config.build_tower()?;
    let verdict = nil_check(&tower, &y, a.exponent)?;
    writeln!(out, "{}", verdict.nil).map_err(io_error)?;
    emit(out, None, &pretty(&verdict))?;
    Ok(EXIT_OK)
}

fn configured_schedule(config: &RunConfig) -> crate::Result<SparseSchedule> {
    let s = &config.schedule;
    let overrides = match s.grade {
        Grade::Theorem => None,
        Grade::Toy => Some(ToyOverrides {
            f: s.f.iter().map(|&x| BigUint::from(x)).collect(),
            g: s.g.iter().map(|&x| BigUint::from(x)).collect(),
            sets: s.sets.clone(),
            field: config.field()?,
        }),
    };
    build_schedule(&s.alpha, s.i_max, s.grade, overrides.as_ref())
}

fn cmd_schedule(config: &RunConfig, c: &ScheduleCommand, out: &mut dyn Write) -> Result<i32, Failure> {
    match c {
        ScheduleCommand::Build { out: path } => {
            emit(out, path.as_deref(), &pretty(&configured_schedule(config)?))?;
            Ok(EXIT_OK)
        }
        ScheduleCommand::Verify { input, out: path } => {
            let sched = match input {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| config_error(format!("{}: {e}", p.display())))?;
                    serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", p.display())))?
                }
                None => configured_schedule(config)?,
            };
            let report = verify_schedule(&sched, &sched.alpha, config.schedule.samples);
            emit(out, path.as_deref(), &pretty(&report))?;
            Ok(if report.chain_holds { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn cmd_tower(config: &RunConfig, c: &TowerCommand, out: &mut dyn Write) -> Result<i32, Failure> {
    let tower = config.build_tower()?;
    match c {
        TowerCommand::Build => {
            let levels: Vec<_> =
                tower.levels().iter().map(|l| json!({"level": l.level(), "case": format!("{:?}", l.case()), "dim": l.dim()})).collect();
            let summary = json!({"p": config.p, "maxLevel": tower.max_level(), "tLevels": tower.t_levels(), "levels": levels});
            emit(out, None, &pretty(&summary))?;
        }
        TowerCommand::Dump { out: path } => emit(out, path.as_deref(), &pretty(&tower.to_dump()))?,
    }
    Ok(EXIT_OK)
}
