//! Command implementations. Each returns a table plus the list of invariant
//! breaches found; the caller writes the table either way.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sal_core::dynamics::evolve_batch;
use sal_core::hamiltonians::Gate;
use sal_core::linalg::c;
use sal_core::metrics::cost::{DEFAULT_GRID, MIN_GRID};
use sal_core::metrics::{Mode, QslReport};
use sal_core::{fidelity, Drive, Family, Operator, QState};

use crate::config::{pick, RunConfig};
use crate::error::{CliError, CliResult};
use crate::table::Table;

pub mod controlled;
pub mod cost_sweep;
pub mod qsl_check;
pub mod selftest;
pub mod teleport;
pub mod theta_opt;

/// Superadiabatic runs must reach their targets within this infidelity.
pub const EXACT_INFIDELITY_TOL: f64 = 1e-6;
/// Relative agreement between quadrature and closed-form costs.
pub const CLOSED_FORM_REL_TOL: f64 = 1e-6;
/// Largest accepted stationarity residual of the θ₀ optimizer.
pub const RESIDUAL_TOL: f64 = 1e-5;
/// Slack on the χ refinement of the speed limit.
pub const CHI_TOL: f64 = 1e-6;

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_STATES: usize = 20;
/// Largest register simulated densely (2^9 amplitudes).
pub const MAX_QUBITS: usize = 9;

/// Output of one command.
#[derive(Debug)]
pub struct Report {
    pub table: Table,
    pub violations: Vec<String>,
}

/// Resolved global settings shared by all commands.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub cfg: RunConfig,
    pub seed: u64,
    pub omega: f64,
}

/// Independent, reproducible stream per register size.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Maps `f` over the points on the current pool. Output order follows
/// input order, and the first failing point (in that order) is reported.
pub fn par_rows<T: Sync, R: Send>(points: &[T], f: impl Fn(&T) -> CliResult<R> + Sync) -> CliResult<Vec<R>> {
    let results: Vec<CliResult<R>> = points.par_iter().map(&f).collect();
    results.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdKind {
    Analytic,
    Generic,
}

pub fn cd_kind(flag: &Option<String>, cfg: &RunConfig) -> CliResult<CdKind> {
    match pick(flag, &cfg.cd).as_deref().map(str::to_ascii_lowercase).as_deref() {
        None | Some("analytic") => Ok(CdKind::Analytic),
        Some("generic") => Ok(CdKind::Generic),
        Some(other) => Err(CliError::Config(format!("--cd must be generic or analytic, got `{other}`"))),
    }
}

pub fn mode(flag: &Option<String>, cfg: &RunConfig) -> CliResult<Mode> {
    Ok(pick(flag, &cfg.mode).map(|m| m.parse()).transpose()?.unwrap_or(Mode::Superadiabatic))
}

pub fn family(name: &str) -> CliResult<Family> {
    Ok(name.parse()?)
}

pub fn grid(flag: Option<usize>, cfg: &RunConfig) -> CliResult<usize> {
    let g = flag.or(cfg.grid).unwrap_or(DEFAULT_GRID);
    if g < MIN_GRID {
        return Err(CliError::Config(format!("grid must have at least {MIN_GRID} points")));
    }
    Ok(g)
}

pub fn states(flag: Option<usize>, cfg: &RunConfig) -> CliResult<usize> {
    let k = flag.or(cfg.states).unwrap_or(DEFAULT_STATES);
    if k == 0 {
        return Err(CliError::Config("need at least one input state".into()));
    }
    Ok(k)
}

pub fn steps(flag: Option<usize>, cfg: &RunConfig) -> CliResult<Option<usize>> {
    match flag.or(cfg.steps) {
        Some(0) => Err(CliError::Config("steps must be positive".into())),
        other => Ok(other),
    }
}

pub fn require_positive(values: &[f64], what: &str) -> CliResult<()> {
    if values.iter().all(|&x| x > 0.0) {
        Ok(())
    } else {
        Err(CliError::Config(format!("{what} values must be positive")))
    }
}

/// A gate to teleport with its display name.
#[derive(Clone, Debug)]
pub struct GateChoice {
    pub name: String,
    pub op: Operator,
}

pub fn gate(flag: &Option<String>, file: &Option<std::path::PathBuf>, cfg: &RunConfig) -> CliResult<Option<GateChoice>> {
    let Some(name) = pick(flag, &cfg.gate) else {
        return Ok(None);
    };
    if name.eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    if !name.eq_ignore_ascii_case("custom") {
        let g: Gate = name.parse()?;
        return Ok(Some(GateChoice { name: g.name().to_string(), op: g.operator() }));
    }
    let rows = match (file, &cfg.gate_matrix) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<Vec<Vec<[f64; 2]>>>(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        (None, Some(m)) => m.clone(),
        (None, None) => return Err(CliError::Config("--gate custom needs --gate-file or gate_matrix".into())),
    };
    let rows: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|&[re, im]| c(re, im)).collect()).collect();
    let op = Operator::from_rows(&rows)?;
    if op.num_qubits().is_none() || op.unitarity_error() > 1e-10 {
        return Err(CliError::Config("custom gate must be a unitary on whole qubits".into()));
    }
    Ok(Some(GateChoice { name: "custom".into(), op }))
}

/// Batched evolution summarized against per-state targets.
pub struct BatchSummary {
    pub finals: Vec<QState>,
    pub min_fidelity: f64,
    pub qsl_bound: f64,
    pub qsl_ok: bool,
}

pub fn run_batch(
    drive: Drive<'_>,
    starts: &[QState],
    targets: &[QState],
    tau: f64,
    steps: Option<usize>,
) -> CliResult<BatchSummary> {
    let steps = steps.unwrap_or_else(|| sal_core::dynamics::default_steps(drive, tau));
    let out = evolve_batch(drive, starts, tau, steps)?;
    let mut min_fidelity = f64::INFINITY;
    let mut qsl_bound = 0.0f64;
    let mut qsl_ok = true;
    for ((start, fin), (target, &e_tau)) in starts.iter().zip(&out.final_states).zip(targets.iter().zip(&out.e_tau)) {
        min_fidelity = min_fidelity.min(fidelity(fin, target)?);
        let q = QslReport::new(tau, start, fin, e_tau)?;
        qsl_bound = qsl_bound.max(q.bound);
        qsl_ok &= q.satisfied;
    }
    Ok(BatchSummary { finals: out.final_states, min_fidelity, qsl_bound, qsl_ok })
}
