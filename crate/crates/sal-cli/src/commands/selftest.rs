//! A quick, fixed battery covering each subsystem once. Output depends on
//! nothing but the code, so repeated runs are byte-identical.

use std::f64::consts::PI;
use std::sync::Arc;

use sal_core::counterdiabatic::teleport_block::sector_frame;
use sal_core::counterdiabatic::{cd_controlled, cd_generic, cd_teleport, cd_teleport_block, cd_xi};
use sal_core::dynamics::{default_steps, evolve, initial_state, measure_ancilla, target_state, Protocol, TargetInputs};
use sal_core::hamiltonians::gates::hadamard;
use sal_core::hamiltonians::teleport::{teleport_gap, teleport_levels};
use sal_core::hamiltonians::{
    controlled::h_xi, grid, parity_operators, teleport_hamiltonian, ControlledSpec, TeleportSpec, TimeDepHamiltonian,
};
use sal_core::linalg::eigh;
use sal_core::metrics::{
    energy_cost, single_gate_cost, speed_limit_chi, stationarity_residual, superadiabatic_cost, theta_opt, QslReport,
};
use sal_core::{fidelity, make_schedule, Family, Operator, QState};

use super::*;
use crate::table::parse_f64_list;

pub const HEADER: [&str; 4] = ["check", "value", "tolerance", "pass"];

/// Fixed seed: the selftest ignores `--seed`.
const SELFTEST_SEED: u64 = 20240917;

#[derive(Clone, Copy)]
enum Cmp {
    AtMost,
    Below,
}

struct Check {
    name: &'static str,
    tolerance: f64,
    cmp: Cmp,
    eval: fn() -> CliResult<f64>,
}

const CHECKS: &[Check] = &[
    Check { name: "teleport_sa_n1_infidelity", tolerance: 1e-6, cmp: Cmp::AtMost, eval: sa_teleport_n1 },
    Check { name: "teleport_sa_n2_infidelity", tolerance: 1e-6, cmp: Cmp::AtMost, eval: sa_teleport_n2 },
    Check { name: "teleport_gate_h_infidelity", tolerance: 1e-6, cmp: Cmp::AtMost, eval: gate_teleport_h },
    Check { name: "teleport_adiabatic_short_fidelity", tolerance: 0.99, cmp: Cmp::Below, eval: adiabatic_short },
    Check { name: "spectrum_max_error", tolerance: 1e-9, cmp: Cmp::AtMost, eval: spectrum_error },
    Check { name: "gap_max_error", tolerance: 1e-9, cmp: Cmp::AtMost, eval: gap_error },
    Check { name: "cd_diagonal_max", tolerance: 1e-8, cmp: Cmp::AtMost, eval: cd_diagonal },
    Check { name: "cd_anticommutator_trace_max", tolerance: 1e-8, cmp: Cmp::AtMost, eval: cd_anticommutator },
    Check { name: "cd_parity_commutator_max", tolerance: 1e-9, cmp: Cmp::AtMost, eval: cd_parity },
    Check { name: "cd_generic_vs_closed_form_max", tolerance: 1e-6, cmp: Cmp::AtMost, eval: cd_generic_xi },
    Check { name: "sce_not_infidelity", tolerance: 1e-6, cmp: Cmp::AtMost, eval: sce_not },
    Check { name: "sce_half_angle_p1_error", tolerance: 1e-6, cmp: Cmp::AtMost, eval: sce_half_angle },
    Check { name: "cost_single_gate_rel_error", tolerance: 1e-6, cmp: Cmp::AtMost, eval: cost_single_gate },
    Check { name: "cost_teleport_ratio_rel_error", tolerance: 1e-6, cmp: Cmp::AtMost, eval: cost_teleport_ratio },
    Check { name: "cost_ratio_slow_minus_one", tolerance: 1e-4, cmp: Cmp::AtMost, eval: cost_slow_ratio },
    Check { name: "qsl_max_excess", tolerance: 1e-9, cmp: Cmp::AtMost, eval: qsl_excess },
    Check { name: "qsl_chi_deficit", tolerance: 1e-6, cmp: Cmp::AtMost, eval: chi_deficit },
    Check { name: "theta_opt_max_residual", tolerance: 1e-5, cmp: Cmp::AtMost, eval: theta_residual },
    Check { name: "theta_opt_monotone_breaks", tolerance: 0.0, cmp: Cmp::AtMost, eval: theta_monotone },
];

pub fn run() -> CliResult<Report> {
    let values = par_rows(CHECKS, |c| (c.eval)())?;
    let mut table = Table::new(&HEADER);
    let mut violations = Vec::new();
    for (c, v) in CHECKS.iter().zip(values) {
        let pass = match c.cmp {
            Cmp::AtMost => v <= c.tolerance,
            Cmp::Below => v < c.tolerance,
        };
        if !pass {
            violations.push(format!("selftest {}: {v:e} against {:e}", c.name, c.tolerance));
        }
        table.push(vec![c.name.into(), v.into(), c.tolerance.into(), pass.into()]);
    }
    Ok(Report { table, violations })
}

fn worst_teleport(n: usize, gate: Option<Operator>, fam: Family, tau: f64, count: usize, sa_mode: bool) -> CliResult<f64> {
    let mut spec = TeleportSpec::new(n, make_schedule(fam));
    if let Some(g) = &gate {
        spec = spec.with_gate(g.clone());
    }
    let protocol = if gate.is_some() { Protocol::TeleportGate } else { Protocol::TeleportState };
    let mut rng = rng_for(SELFTEST_SEED, n as u64);
    let mut starts = Vec::new();
    let mut targets = Vec::new();
    for _ in 0..count {
        let psi = QState::random(n, &mut rng);
        let inputs = TargetInputs::Teleport { psi: &psi, gate: gate.as_ref() };
        starts.push(initial_state(protocol, inputs)?);
        targets.push(target_state(protocol, inputs)?);
    }
    let base = teleport_hamiltonian(&spec)?;
    let out = if sa_mode {
        let sa = cd_teleport(&spec, tau)?;
        run_batch((&sa).into(), &starts, &targets, tau, None)?
    } else {
        run_batch((&base).into(), &starts, &targets, tau, None)?
    };
    Ok(out.min_fidelity)
}

fn sa_teleport_n1() -> CliResult<f64> {
    Ok(1.0 - worst_teleport(1, None, Family::Trig, 1.0, 4, true)?)
}

fn sa_teleport_n2() -> CliResult<f64> {
    Ok(1.0 - worst_teleport(2, None, Family::Linear, 1.0, 2, true)?)
}

fn gate_teleport_h() -> CliResult<f64> {
    Ok(1.0 - worst_teleport(1, Some(hadamard()), Family::Linear, 0.5, 4, true)?)
}

fn adiabatic_short() -> CliResult<f64> {
    worst_teleport(1, None, Family::Linear, 0.5, 4, false)
}

fn spectrum_error() -> CliResult<f64> {
    let mut worst = 0.0f64;
    for fam in Family::ALL {
        let sch = make_schedule(fam);
        let h = teleport_hamiltonian(&TeleportSpec::new(1, sch))?;
        for s in grid(101) {
            let e = eigh(&h.at(s))?;
            for (x, y) in e.values.iter().zip(teleport_levels(sch.chi(s), 1.0, 1)) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    Ok(worst)
}

fn gap_error() -> CliResult<f64> {
    let mut worst = 0.0f64;
    for fam in Family::ALL {
        let sch = make_schedule(fam);
        let h = teleport_hamiltonian(&TeleportSpec::new(1, sch))?;
        for s in grid(101) {
            let e = eigh(&h.at(s))?;
            let clusters = e.clusters(1e-8);
            let gap = e.values[clusters[1].start] - e.values[clusters[0].start];
            worst = worst.max((gap - teleport_gap(&sch, 1.0, s)).abs());
        }
    }
    Ok(worst)
}

fn cd_diagonal() -> CliResult<f64> {
    let mut worst = 0.0f64;
    for fam in Family::ALL {
        let sa = cd_teleport_block(make_schedule(fam), 0.3, 1.0)?;
        for s in grid(51) {
            let e = eigh(&sa.base().at(s))?;
            let cd = sa.cd_at(s);
            for k in 0..e.values.len() {
                let v = e.vector(k);
                worst = worst.max(v.dotc(&cd.apply_vec(&v)).norm());
            }
        }
    }
    Ok(worst)
}

fn cd_anticommutator() -> CliResult<f64> {
    let mut worst = 0.0f64;
    for fam in Family::ALL {
        let sa = cd_teleport_block(make_schedule(fam), 0.3, 1.0)?;
        for s in grid(51) {
            worst = worst.max(Operator::anticommutator(&sa.base().at(s), &sa.cd_at(s)).trace().norm());
        }
    }
    Ok(worst)
}

fn cd_parity() -> CliResult<f64> {
    let sa = cd_teleport(&TeleportSpec::new(1, make_schedule(Family::Trig)), 0.5)?;
    let par = parity_operators(1)?;
    let mut worst = 0.0f64;
    for s in grid(21) {
        let h = sa.at(s);
        for p in par.sector_z.iter().chain(&par.sector_x).chain([&par.pi_z, &par.pi_x]) {
            worst = worst.max(Operator::commutator(&h, p).max_abs());
        }
    }
    Ok(worst)
}

fn cd_generic_xi() -> CliResult<f64> {
    let (theta0, xi, tau) = (PI / 2.0, 1.3, 0.7);
    let h = TimeDepHamiltonian::new(2, Arc::new(move |s| h_xi(1.0, theta0 * s, xi)));
    let sa = cd_generic(&h, tau, 2001)?;
    let exact = cd_xi(theta0, tau, xi);
    Ok(grid(21).map(|s| (sa.cd_at(s).matrix() - exact.matrix()).norm()).fold(0.0, f64::max))
}

fn sce_final(spec: &ControlledSpec, psi: &QState) -> CliResult<(QState, QState)> {
    let sa = cd_controlled(spec)?;
    let inputs = TargetInputs::Controlled { spec, psi };
    let start = initial_state(Protocol::Sce, inputs)?;
    let out = evolve(&sa, &start, spec.tau, default_steps(&sa, spec.tau))?;
    Ok((out.final_state, target_state(Protocol::Sce, inputs)?))
}

fn sce_not() -> CliResult<f64> {
    let spec = ControlledSpec::new(0, [1.0, 0.0, 0.0], PI, PI, 0.5);
    let psi = QState::random(1, &mut rng_for(SELFTEST_SEED, 100));
    let (fin, target) = sce_final(&spec, &psi)?;
    Ok(1.0 - fidelity(&fin, &target)?)
}

fn sce_half_angle() -> CliResult<f64> {
    let spec = ControlledSpec::new(0, [0.0, 1.0, 0.0], PI / 2.0, PI / 2.0, 0.5);
    let psi = QState::random(1, &mut rng_for(SELFTEST_SEED, 101));
    let (fin, _) = sce_final(&spec, &psi)?;
    Ok((measure_ancilla(&fin)?[1].probability - 0.5).abs())
}

fn cost_single_gate() -> CliResult<f64> {
    let mut worst = 0.0f64;
    for wt in [0.1, 1.0, 10.0, 100.0] {
        let sa = cd_controlled(&ControlledSpec::new(0, [1.0, 0.0, 0.0], PI, PI, wt))?;
        let numeric = energy_cost(|s| sa.at(s), 2001)?;
        let exact = single_gate_cost(1.0, PI, wt);
        worst = worst.max((numeric - exact).abs() / exact);
    }
    Ok(worst)
}

fn cost_teleport_ratio() -> CliResult<f64> {
    let sch = make_schedule(Family::Trig);
    let cost = |n| -> CliResult<f64> {
        let sa = cd_teleport(&TeleportSpec::new(n, sch), 0.7)?;
        Ok(energy_cost(|s| sa.at(s), 201)?)
    };
    Ok((cost(2)? / cost(1)? - 4.0).abs() / 4.0)
}

fn cost_slow_ratio() -> CliResult<f64> {
    let mut worst = 0.0f64;
    for fam in Family::ALL {
        let frame = sector_frame(&make_schedule(fam), 1.0, 2001)?;
        worst = worst.max((superadiabatic_cost(&frame, 1e4)?.ratio() - 1.0).abs());
    }
    Ok(worst)
}

fn qsl_reports() -> CliResult<Vec<(QslReport, sal_core::metrics::ChiReport)>> {
    let psi = QState::random(1, &mut rng_for(SELFTEST_SEED, 102));
    let start = initial_state(Protocol::TeleportState, TargetInputs::Teleport { psi: &psi, gate: None })?;
    let mut out = Vec::new();
    for tau in [0.1, 1.0] {
        let sa = cd_teleport(&TeleportSpec::new(1, make_schedule(Family::Linear)), tau)?;
        let run = evolve(&sa, &start, tau, default_steps(&sa, tau))?;
        out.push((QslReport::from_evolution(&run)?, speed_limit_chi(&run.trajectory.states)?));
    }
    Ok(out)
}

fn qsl_excess() -> CliResult<f64> {
    Ok(qsl_reports()?.iter().map(|(q, _)| q.bound - q.tau).fold(f64::NEG_INFINITY, f64::max))
}

fn chi_deficit() -> CliResult<f64> {
    Ok(qsl_reports()?.iter().map(|(_, c)| c.bures_term - c.chi).fold(f64::NEG_INFINITY, f64::max))
}

fn theta_grid() -> CliResult<Vec<f64>> {
    parse_f64_list("log:1:1000:13")
}

fn theta_residual() -> CliResult<f64> {
    let mut worst = 0.0f64;
    for wt in theta_grid()? {
        worst = worst.max(stationarity_residual(theta_opt(wt)?, wt).abs());
    }
    Ok(worst)
}

fn theta_monotone() -> CliResult<f64> {
    let thetas = theta_grid()?.into_iter().map(|wt| Ok(theta_opt(wt)?)).collect::<CliResult<Vec<f64>>>()?;
    Ok(thetas.windows(2).filter(|w| w[1] < w[0]).count() as f64)
}
