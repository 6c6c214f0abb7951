use sal_core::counterdiabatic::{cd_controlled, cd_generic, cd_teleport};
use sal_core::dynamics::{default_steps, evolve, initial_state, Protocol, TargetInputs};
use sal_core::hamiltonians::{controlled_hamiltonian, teleport_hamiltonian, TeleportSpec};
use sal_core::metrics::{speed_limit_chi, Mode, QslReport};
use sal_core::{make_schedule, Drive, EvolutionResult, QState};

use super::*;
use crate::args::{QslArgs, TeleportArgs};

pub const HEADER: [&str; 10] =
    ["protocol", "n", "tau", "bures_angle", "e_tau", "qsl_bound", "qsl_ok", "chi", "chi_floor", "chi_ok"];

enum Setup {
    Teleport(super::teleport::Settings),
    Controlled(super::controlled::Settings),
}

fn evolve_one(drive: Drive<'_>, start: &QState, tau: f64, steps: Option<usize>) -> CliResult<EvolutionResult> {
    let steps = steps.unwrap_or_else(|| default_steps(drive, tau));
    Ok(evolve(drive, start, tau, steps)?)
}

pub fn run(a: &QslArgs, ctx: &Ctx) -> CliResult<Report> {
    let cfg = &ctx.cfg;
    let protocol: Protocol = pick(&a.protocol, &cfg.protocol).as_deref().unwrap_or("teleport-state").parse()?;
    let setup = match protocol {
        Protocol::TeleportState | Protocol::TeleportGate => {
            let args = TeleportArgs { teleport: a.teleport.clone(), mode: a.mode.clone(), time: a.time.clone() };
            let st = super::teleport::Settings::resolve(&args, cfg)?;
            if (protocol == Protocol::TeleportGate) != st.gate.is_some() {
                return Err(CliError::Config("teleport-gate needs --gate and teleport-state must not have one".into()));
            }
            Setup::Teleport(st)
        }
        Protocol::Cae | Protocol::Sce => {
            if a.mode.is_some() {
                return Err(CliError::Config("--mode applies to teleport protocols only".into()));
            }
            Setup::Controlled(super::controlled::Settings::resolve(&a.controlled, &a.time, cfg)?)
        }
    };

    let mut points: Vec<(usize, f64, f64)> = Vec::new();
    let label = match &setup {
        Setup::Teleport(st) => {
            for &n in &st.ns {
                points.extend(st.taus.iter().map(|&t| (n, f64::NAN, t)));
            }
            super::teleport::protocol_label(st.gate.is_some(), st.mode)
        }
        Setup::Controlled(st) => {
            for &n in &st.n_controls {
                for &th in &st.theta0 {
                    points.extend(st.taus.iter().map(|&t| (n, th, t)));
                }
            }
            protocol.name().to_string()
        }
    };

    let results = par_rows(&points, |&(n, theta0, tau)| -> CliResult<(QslReport, sal_core::metrics::ChiReport)> {
        let mut rng = rng_for(ctx.seed, n as u64);
        let out = match &setup {
            Setup::Teleport(st) => {
                let mut spec = TeleportSpec::new(n, make_schedule(st.family)).with_omega(ctx.omega);
                if let Some(g) = &st.gate {
                    spec = spec.with_gate(g.op.clone());
                }
                let psi = QState::random(n, &mut rng);
                let start = initial_state(protocol, TargetInputs::Teleport { psi: &psi, gate: st.gate.as_ref().map(|g| &g.op) })?;
                let base = teleport_hamiltonian(&spec)?;
                match st.mode {
                    Mode::Adiabatic => evolve_one((&base).into(), &start, tau, st.steps)?,
                    Mode::Superadiabatic => {
                        let sa = match st.cd {
                            CdKind::Analytic => cd_teleport(&spec, tau)?,
                            CdKind::Generic => cd_generic(&base, tau, st.grid)?,
                        };
                        evolve_one((&sa).into(), &start, tau, st.steps)?
                    }
                }
            }
            Setup::Controlled(st) => {
                let spec = st.spec(n, theta0, tau, ctx.omega)?;
                let psi = QState::random(spec.system_qubits(), &mut rng);
                let start = initial_state(protocol, TargetInputs::Controlled { spec: &spec, psi: &psi })?;
                let base = controlled_hamiltonian(&spec)?;
                if protocol == Protocol::Cae {
                    evolve_one((&base).into(), &start, tau, st.steps)?
                } else {
                    let sa = match st.cd {
                        CdKind::Analytic => cd_controlled(&spec)?,
                        CdKind::Generic => cd_generic(&base, tau, st.grid)?,
                    };
                    evolve_one((&sa).into(), &start, tau, st.steps)?
                }
            }
        };
        Ok((QslReport::from_evolution(&out)?, speed_limit_chi(&out.trajectory.states)?))
    })?;

    let mut table = Table::new(&HEADER);
    let mut violations = Vec::new();
    for (&(n, _, tau), (q, chi)) in points.iter().zip(results) {
        if !q.satisfied {
            violations.push(format!("{label} n={n} tau={tau}: bound {} exceeds runtime", q.bound));
        }
        let chi_ok = chi.holds(CHI_TOL);
        if !chi_ok {
            violations.push(format!("{label} n={n} tau={tau}: chi {} below {}", chi.chi, chi.bures_term));
        }
        table.push(vec![
            label.as_str().into(),
            n.into(),
            tau.into(),
            q.bures_angle.into(),
            q.e_tau.into(),
            q.bound.into(),
            q.satisfied.into(),
            chi.chi.into(),
            chi.bures_term.into(),
            chi_ok.into(),
        ]);
    }
    Ok(Report { table, violations })
}
