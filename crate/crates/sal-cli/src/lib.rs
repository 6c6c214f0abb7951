//! Command-line experiments over the `sal-core` simulator.
//!
//! Every command produces a CSV table. Sweep points run on a rayon pool and
//! are written in input order, so output is independent of `--jobs`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use args::{Cli, Command};
pub use commands::{Ctx, Report};
pub use config::RunConfig;
pub use error::{CliError, CliResult, EXIT_CONFIG, EXIT_INVARIANT, EXIT_OK};
pub use table::{fmt_g, Table};

use sal_core::dynamics::Protocol;

/// Environment variable that overrides `--jobs`.
pub const JOBS_ENV: &str = "SAL_JOBS";

/// Runs a parsed command on a pool of `jobs` workers.
pub fn execute(cli: &Cli) -> CliResult<Report> {
    let cfg = match &cli.global.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.check_command(cli.command.name())?;
    let env = std::env::var(JOBS_ENV).ok();
    let jobs = config::jobs(env.as_deref(), cli.global.jobs, cfg.jobs)?;
    let omega = config::scalar(&cli.global.omega, &cfg.omega, 1.0)?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(CliError::Config("omega must be positive".into()));
    }
    let seed = cli.global.seed.or(cfg.seed).unwrap_or(commands::DEFAULT_SEED);
    let ctx = Ctx { cfg, seed, omega };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {jobs} workers: {e}")))?;
    pool.install(|| dispatch(&cli.command, &ctx))
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> CliResult<Report> {
    match cmd {
        Command::Teleport(a) => commands::teleport::run(a, ctx),
        Command::Cae(a) => commands::controlled::run(&a.controlled, &a.time, Protocol::Cae, ctx),
        Command::Sce(a) => commands::controlled::run(&a.controlled, &a.time, Protocol::Sce, ctx),
        Command::CostSweep(a) => commands::cost_sweep::run(a, ctx),
        Command::ThetaOpt(a) => commands::theta_opt::run(a, ctx),
        Command::QslCheck(a) => commands::qsl_check::run(a, ctx),
        Command::Selftest => commands::selftest::run(),
    }
}

fn output_path(cli: &Cli) -> CliResult<Option<PathBuf>> {
    if cli.global.output.is_some() {
        return Ok(cli.global.output.clone());
    }
    match &cli.global.config {
        Some(path) => Ok(RunConfig::load(path)?.output),
        None => Ok(None),
    }
}

fn emit(report: &Report, path: Option<PathBuf>) -> CliResult<()> {
    match path.filter(|p| p.as_os_str() != "-") {
        Some(p) => std::fs::write(&p, report.table.render())?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            report.table.write_to(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// Full program: parse, run, write, and map the outcome to an exit code.
/// The table is written even when invariants fail, for diagnosis.
pub fn main_with<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    let result = execute(&cli).and_then(|report| {
        emit(&report, output_path(&cli)?)?;
        Ok(report)
    });
    match result {
        Ok(report) if report.violations.is_empty() => ExitCode::from(EXIT_OK),
        Ok(report) => {
            for v in &report.violations {
                eprintln!("sal: invariant violated: {v}");
            }
            ExitCode::from(EXIT_INVARIANT)
        }
        Err(e) => {
            eprintln!("sal: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
