//! The `dodeca` command line.
//!
//! Exit codes: 0 when every check passes, 1 on a verification mismatch, 2
//! when caps ran out and left items unresolved, 64 on bad usage.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::census::{
    closure_audit, dfs_audit, parse_plan, run_plan, shipped_plan, verify_knot_generator_sets,
    verify_main_lemma, CensusConfig, CensusError, CensusRow, ClosureReport, DfsOutcome, DfsSummary,
    ExpectedIndex, PlanRow, RowStatus,
};
use crate::coset::{enumerate_cosets, EnumerationOptions, Strategy, DEFAULT_MAX_COSETS};
use crate::fp::catalog;
use crate::representation::{
    verify_representation, Check, RepError, Report, DEFAULT_TORSION_DEPTH,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_UNRESOLVED: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot start thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Hlt,
    Felsch,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Hlt => Strategy::Hlt,
            StrategyArg::Felsch => Strategy::Felsch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Largest coset table any enumeration may build.
    #[arg(long, global = true, env = "DODECA_MAX_COSETS", default_value_t = DEFAULT_MAX_COSETS, value_parser = positive)]
    pub max_cosets: usize,
    /// Longest product searched for torsion.
    #[arg(long, global = true, env = "DODECA_TORSION_DEPTH", default_value_t = DEFAULT_TORSION_DEPTH, value_parser = positive)]
    pub torsion_depth: usize,
    /// Coset enumeration strategy.
    #[arg(long, global = true, env = "DODECA_STRATEGY", value_enum, default_value_t = StrategyArg::Hlt)]
    pub strategy: StrategyArg,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "DODECA_JOBS", value_parser = positive)]
    pub jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Report format; `census run` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Parser)]
#[command(
    name = "dodeca",
    version,
    about = "Exact verification of the dodecahedral knot-group census"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the matrix representations.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Replay or audit the meridian census.
    Census {
        #[command(subcommand)]
        what: CensusCommand,
    },
    /// Check the three-class statement and the Γ_s generating set.
    Lemma {
        /// Plan file (tab separated); the shipped plan by default.
        #[arg(long)]
        plan: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum VerifyCommand {
    /// Relators, meridians, fixed points, embedding and symmetries.
    Rep,
}

#[derive(Debug, Clone, Subcommand)]
pub enum CensusCommand {
    /// Replay a plan row by row.
    Run {
        /// Plan file (tab separated); the shipped plan by default.
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Closure audit of the plan's knot rows and an independent search.
    Audit {
        /// Plan file (tab separated); the shipped plan by default.
        #[arg(long)]
        plan: Option<PathBuf>,
    },
}

/// Everything a run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub census: CensusConfig,
    pub jobs: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Self {
        let c = cli.common;
        let default_format = match cli.command {
            Command::Census {
                what: CensusCommand::Run { .. },
            } => Format::Csv,
            _ => Format::Json,
        };
        Self {
            command: cli.command,
            census: CensusConfig {
                enumeration: EnumerationOptions {
                    strategy: c.strategy.into(),
                    max_cosets: c.max_cosets,
                },
                torsion_depth: c.torsion_depth,
            },
            jobs: c
                .jobs
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            output: c.output,
            format: c.format.unwrap_or(default_format),
        }
    }
}

/// A finished run: its exit code, the report and a one-line summary.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit: u8,
    pub document: String,
    pub summary: String,
}

fn load_plan(path: &Option<PathBuf>) -> Result<Vec<PlanRow>, CliError> {
    match path {
        None => Ok(shipped_plan()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Read {
                path: p.clone(),
                source,
            })?;
            Ok(parse_plan(&text)?)
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_of<R: AsRef<[String]>>(header: &[&str], rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r.as_ref()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Renders a list of checks.
pub fn emit_checks(checks: &[Check], format: Format) -> String {
    match format {
        Format::Json => to_json(&checks),
        Format::Csv => csv_of(
            &["name", "expected", "computed", "pass"],
            checks.iter().map(|c| {
                vec![
                    c.name.clone(),
                    c.expected.clone(),
                    c.computed.clone(),
                    c.pass.to_string(),
                ]
            }),
        ),
    }
}

/// Renders census rows.
pub fn emit_rows(rows: &[CensusRow], format: Format) -> String {
    match format {
        Format::Json => to_json(&rows),
        Format::Csv => crate::census::census_csv(rows),
    }
}

// a row the caps kept from deciding, as opposed to one decided wrongly
fn capped(r: &CensusRow) -> bool {
    r.status != RowStatus::Resolved
        || (r.index.is_none() && matches!(r.plan.expected_index, ExpectedIndex::Index(_)))
}

fn row_exit(rows: &[CensusRow]) -> u8 {
    if rows.iter().any(|r| !r.matches() && !capped(r)) {
        EXIT_MISMATCH
    } else if rows.iter().any(|r| !r.matches()) {
        EXIT_UNRESOLVED
    } else {
        EXIT_OK
    }
}

#[derive(Serialize)]
struct CheckDocument<'a> {
    pass: bool,
    checks: &'a [Check],
}

#[derive(Serialize)]
struct AuditDocument<'a> {
    pass: bool,
    closure: &'a [ClosureReport],
    dfs: &'a DfsSummary,
}

#[derive(Serialize)]
struct LemmaDocument<'a> {
    pass: bool,
    classes: crate::census::ClassCounts,
    checks: &'a [Check],
    knot_generator_sets: &'a [Check],
    rows: &'a [CensusRow],
}

fn verify_rep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let r: Report = verify_representation(cfg.census.enumeration)?;
    let failed = r.failures().count();
    Ok(Outcome {
        exit: if r.pass() { EXIT_OK } else { EXIT_MISMATCH },
        document: match cfg.format {
            Format::Json => to_json(&CheckDocument {
                pass: r.pass(),
                checks: &r.checks,
            }),
            Format::Csv => emit_checks(&r.checks, Format::Csv),
        },
        summary: format!("verify rep: {} checks, {failed} failed", r.checks.len()),
    })
}

fn census_run(cfg: &RunConfig, plan: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let rows = run_plan(&load_plan(plan)?, &cfg.census)?;
    let matched = rows.iter().filter(|r| r.matches()).count();
    let open = rows
        .iter()
        .filter(|r| r.status != RowStatus::Resolved)
        .count();
    Ok(Outcome {
        exit: row_exit(&rows),
        document: emit_rows(&rows, cfg.format),
        summary: format!(
            "census run: {matched}/{} rows match, {open} unresolved",
            rows.len()
        ),
    })
}

fn census_audit(cfg: &RunConfig, plan: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let rows = run_plan(&load_plan(plan)?, &cfg.census)?;
    let g = catalog()
        .presentation("gamma53333")
        .map_err(CensusError::from)?;
    let mut closure = Vec::new();
    for r in rows.iter().filter(|r| r.is_knot) {
        let t = enumerate_cosets(g, &r.plan.generators(), cfg.census.enumeration)
            .map_err(CensusError::from)?;
        closure.push(closure_audit(&r.plan, &t, &cfg.census)?);
    }
    let dfs = dfs_audit(&cfg.census)?;
    let closure_pass = closure.iter().all(|c| c.pass);
    let exceeded = closure.iter().any(|c| {
        c.entries
            .iter()
            .any(|e| e.outcome == crate::census::ClosureOutcome::Exceeded)
    });
    let pass = closure_pass && dfs.pass;
    let exit = if pass {
        EXIT_OK
    } else if !dfs.unresolved.is_empty() || exceeded {
        EXIT_UNRESOLVED
    } else {
        EXIT_MISMATCH
    };
    let document = match cfg.format {
        Format::Json => to_json(&AuditDocument {
            pass,
            closure: &closure,
            dfs: &dfs,
        }),
        Format::Csv => {
            let mut recs: Vec<Vec<String>> = Vec::new();
            for c in &closure {
                for e in &c.entries {
                    recs.push(vec![
                        "closure".into(),
                        c.pattern.clone(),
                        e.meridian.key(),
                        format!("{:?}", e.outcome),
                    ]);
                }
            }
            for n in &dfs.leaves {
                let outcome = match &n.outcome {
                    DfsOutcome::IndexOne => "IndexOne".to_string(),
                    DfsOutcome::Torsion(w) => format!("Torsion {w}"),
                    DfsOutcome::Knot(c) => {
                        format!("Knot {}", c.map_or("unlabeled".into(), |c| c.to_string()))
                    }
                    DfsOutcome::Unresolved(why) => format!("UNRESOLVED {why}"),
                };
                recs.push(vec![
                    "dfs".into(),
                    n.pattern.clone(),
                    String::new(),
                    outcome,
                ]);
            }
            csv_of(&["kind", "pattern", "meridian", "outcome"], recs)
        }
    };
    Ok(Outcome {
        exit,
        document,
        summary: format!(
            "census audit: closure {}/{} pass; dfs found {} knot groups in classes {:?}, {} unresolved",
            closure.iter().filter(|c| c.pass).count(),
            closure.len(),
            dfs.knot_groups.len(),
            dfs.classes,
            dfs.unresolved.len()
        ),
    })
}

fn lemma(cfg: &RunConfig, plan: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let l = verify_main_lemma(&load_plan(plan)?, &cfg.census)?;
    let k = verify_knot_generator_sets(&cfg.census)?;
    let pass = l.pass && k.pass();
    let only_rows_fail = k.pass()
        && l.checks
            .iter()
            .filter(|c| !c.pass)
            .all(|c| c.name.starts_with("plan"));
    let exit = if pass {
        EXIT_OK
    } else if only_rows_fail && row_exit(&l.rows) == EXIT_UNRESOLVED {
        EXIT_UNRESOLVED
    } else {
        EXIT_MISMATCH
    };
    let document = match cfg.format {
        Format::Json => to_json(&LemmaDocument {
            pass,
            classes: l.classes,
            checks: &l.checks,
            knot_generator_sets: &k.checks,
            rows: &l.rows,
        }),
        Format::Csv => {
            let all: Vec<Check> = l.checks.iter().chain(&k.checks).cloned().collect();
            emit_checks(&all, Format::Csv)
        }
    };
    Ok(Outcome {
        exit,
        document,
        summary: format!(
            "lemma: {} classes in gamma53333, {} in gamma522623; {}",
            l.classes.gamma,
            l.classes.gamma_prime,
            if pass {
                "all checks pass"
            } else {
                "some checks fail"
            }
        ),
    })
}

/// Runs one command on a pool of `cfg.jobs` threads.
pub fn run_command(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()?;
    pool.install(|| match &cfg.command {
        Command::Verify {
            what: VerifyCommand::Rep,
        } => verify_rep(cfg),
        Command::Census {
            what: CensusCommand::Run { plan },
        } => census_run(cfg, plan),
        Command::Census {
            what: CensusCommand::Audit { plan },
        } => census_audit(cfg, plan),
        Command::Lemma { plan } => lemma(cfg, plan),
    })
}

/// Parses `args` (program name first), runs, writes the report and returns
/// the exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = RunConfig::from_cli(cli);
    let out = match run_command(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_MISMATCH;
        }
    };
    match &cfg.output {
        Some(p) => {
            if let Err(source) = std::fs::write(p, &out.document) {
                eprintln!(
                    "error: {}",
                    CliError::Write {
                        path: p.clone(),
                        source
                    }
                );
                return EXIT_MISMATCH;
            }
        }
        None => print!("{}", out.document),
    }
    eprintln!("{}", out.summary);
    out.exit
}
