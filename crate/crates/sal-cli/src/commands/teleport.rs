use sal_core::counterdiabatic::{cd_generic, cd_teleport};
use sal_core::dynamics::{initial_state, target_state, Protocol, TargetInputs};
use sal_core::hamiltonians::{teleport_hamiltonian, TeleportSpec};
use sal_core::metrics::{energy_cost, Mode};
use sal_core::{make_schedule, Drive, Family, QState};

use super::*;
use crate::args::TeleportArgs;
use crate::config::{float_list, int_list};

pub const HEADER: [&str; 9] = ["protocol", "n", "gate", "tau", "fidelity", "sigma_sa", "sigma_ad", "qsl_bound", "qsl_ok"];

/// Most sectors accepted (three qubits each).
pub const MAX_SECTORS: usize = MAX_QUBITS / 3;

#[derive(Clone, Debug)]
pub struct Settings {
    pub ns: Vec<usize>,
    pub taus: Vec<f64>,
    pub gate: Option<GateChoice>,
    pub family: Family,
    pub mode: Mode,
    pub cd: CdKind,
    pub states: usize,
    pub steps: Option<usize>,
    pub grid: usize,
}

impl Settings {
    pub fn resolve(a: &TeleportArgs, cfg: &RunConfig) -> CliResult<Self> {
        let ns = int_list(&a.teleport.n_sectors, &cfg.n_sectors, &[1])?;
        if ns.iter().any(|&n| n == 0 || n > MAX_SECTORS) {
            return Err(CliError::Config(format!("sectors must be in 1..={MAX_SECTORS}")));
        }
        let taus = float_list(&a.time.tau, &cfg.tau, "0.5")?;
        require_positive(&taus, "tau")?;
        let gate = gate(&a.teleport.gate, &a.teleport.gate_file, cfg)?;
        if let Some(g) = &gate {
            let q = g.op.num_qubits().unwrap_or(0);
            if ns.iter().any(|&n| n != q) {
                return Err(CliError::Config(format!("gate {} acts on {q} qubits; every n must equal it", g.name)));
            }
        }
        let family = family(pick(&a.teleport.schedule, &cfg.schedule).as_deref().unwrap_or("linear"))?;
        Ok(Settings {
            ns,
            taus,
            gate,
            family,
            mode: super::mode(&a.mode, cfg)?,
            cd: cd_kind(&a.time.cd, cfg)?,
            states: super::states(a.time.states, cfg)?,
            steps: super::steps(a.time.steps, cfg)?,
            grid: super::grid(a.time.grid, cfg)?,
        })
    }
}

pub fn protocol_label(gate: bool, mode: Mode) -> String {
    let p = if gate { Protocol::TeleportGate } else { Protocol::TeleportState };
    match mode {
        Mode::Superadiabatic => p.name().to_string(),
        Mode::Adiabatic => format!("{}-adiabatic", p.name()),
    }
}

/// Results at one `(n, τ)` point.
#[derive(Clone, Debug)]
pub struct Point {
    pub n: usize,
    pub tau: f64,
    pub fidelity: f64,
    pub sigma_sa: f64,
    pub sigma_ad: f64,
    pub qsl_bound: f64,
    pub qsl_ok: bool,
}

pub fn run_point(st: &Settings, ctx: &Ctx, n: usize, tau: f64) -> CliResult<Point> {
    let mut spec = TeleportSpec::new(n, make_schedule(st.family)).with_omega(ctx.omega);
    if let Some(g) = &st.gate {
        spec = spec.with_gate(g.op.clone());
    }
    let base = teleport_hamiltonian(&spec)?;
    let sa = match st.cd {
        CdKind::Analytic => cd_teleport(&spec, tau)?,
        CdKind::Generic => cd_generic(&base, tau, st.grid)?,
    };
    let drive: Drive = match st.mode {
        Mode::Superadiabatic => (&sa).into(),
        Mode::Adiabatic => (&base).into(),
    };
    let protocol = if st.gate.is_some() { Protocol::TeleportGate } else { Protocol::TeleportState };
    let gate_op = st.gate.as_ref().map(|g| &g.op);
    let mut rng = rng_for(ctx.seed, n as u64);
    let psis: Vec<QState> = (0..st.states).map(|_| QState::random(n, &mut rng)).collect();
    let mut starts = Vec::with_capacity(psis.len());
    let mut targets = Vec::with_capacity(psis.len());
    for psi in &psis {
        let inputs = TargetInputs::Teleport { psi, gate: gate_op };
        starts.push(initial_state(protocol, inputs)?);
        targets.push(target_state(protocol, inputs)?);
    }
    let batch = run_batch(drive, &starts, &targets, tau, st.steps)?;
    Ok(Point {
        n,
        tau,
        fidelity: batch.min_fidelity,
        sigma_sa: energy_cost(|s| sa.at(s), st.grid)?,
        sigma_ad: energy_cost(|s| base.at(s), st.grid)?,
        qsl_bound: batch.qsl_bound,
        qsl_ok: batch.qsl_ok,
    })
}

pub fn run(a: &TeleportArgs, ctx: &Ctx) -> CliResult<Report> {
    let st = Settings::resolve(a, &ctx.cfg)?;
    let points: Vec<(usize, f64)> = st.ns.iter().flat_map(|&n| st.taus.iter().map(move |&t| (n, t))).collect();
    let results = par_rows(&points, |&(n, tau)| run_point(&st, ctx, n, tau))?;
    let label = protocol_label(st.gate.is_some(), st.mode);
    let gate_name = st.gate.as_ref().map_or("none", |g| g.name.as_str());
    let mut table = Table::new(&HEADER);
    let mut violations = Vec::new();
    for p in results {
        if st.mode == Mode::Superadiabatic && p.fidelity < 1.0 - EXACT_INFIDELITY_TOL {
            violations.push(format!("{label} n={} tau={}: fidelity {} below 1-{EXACT_INFIDELITY_TOL:e}", p.n, p.tau, p.fidelity));
        }
        if !p.qsl_ok {
            violations.push(format!("{label} n={} tau={}: speed limit violated", p.n, p.tau));
        }
        table.push(vec![
            label.as_str().into(),
            p.n.into(),
            gate_name.into(),
            p.tau.into(),
            p.fidelity.into(),
            p.sigma_sa.into(),
            p.sigma_ad.into(),
            p.qsl_bound.into(),
            p.qsl_ok.into(),
        ]);
    }
    Ok(Report { table, violations })
}
