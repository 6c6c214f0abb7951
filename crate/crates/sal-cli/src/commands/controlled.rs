use sal_core::counterdiabatic::{cd_controlled, cd_generic};
use sal_core::dynamics::{initial_state, measure_ancilla, success_probability, target_state, Protocol, TargetInputs};
use sal_core::hamiltonians::{controlled_hamiltonian, ControlledSpec};
use sal_core::metrics::{adiabatic_controlled_cost, controlled_gate_cost, energy_cost};
use sal_core::{Drive, QState};

use super::*;
use crate::args::ControlledOpts;
use crate::args::TimeArgs;
use crate::config::{axis, float_list, int_list, scalar};
use crate::table::{fmt_g, SIG_DIGITS};

pub const HEADER: [&str; 13] = [
    "protocol",
    "n_controls",
    "axis",
    "phi",
    "theta0",
    "tau",
    "fidelity",
    "p_success",
    "p_theory",
    "sigma",
    "sigma_closed",
    "qsl_bound",
    "qsl_ok",
];

/// Control qubits allowed: controls + target + ancilla stay within the
/// dense-register limit.
pub const MAX_CONTROLS: usize = MAX_QUBITS - 2;

#[derive(Clone, Debug)]
pub struct Settings {
    pub n_controls: Vec<usize>,
    pub axis: [f64; 3],
    pub phi: f64,
    pub theta0: Vec<f64>,
    pub activation: Option<usize>,
    pub taus: Vec<f64>,
    pub cd: CdKind,
    pub states: usize,
    pub steps: Option<usize>,
    pub grid: usize,
}

impl Settings {
    pub fn resolve(c: &ControlledOpts, t: &TimeArgs, cfg: &RunConfig) -> CliResult<Self> {
        let n_controls = int_list(&c.n_controls, &cfg.n_controls, &[0])?;
        if n_controls.iter().any(|&n| n > MAX_CONTROLS) {
            return Err(CliError::Config(format!("at most {MAX_CONTROLS} controls")));
        }
        let theta0 = float_list(&c.theta0, &cfg.theta0, "pi")?;
        let taus = float_list(&t.tau, &cfg.tau, "0.5")?;
        require_positive(&taus, "tau")?;
        Ok(Settings {
            n_controls,
            axis: axis(&c.axis, &cfg.axis)?,
            phi: scalar(&c.phi, &cfg.phi, std::f64::consts::PI)?,
            theta0,
            activation: c.activation.or(cfg.activation),
            taus,
            cd: cd_kind(&t.cd, cfg)?,
            states: super::states(t.states, cfg)?,
            steps: super::steps(t.steps, cfg)?,
            grid: super::grid(t.grid, cfg)?,
        })
    }

    pub fn spec(&self, n: usize, theta0: f64, tau: f64, omega: f64) -> CliResult<ControlledSpec> {
        let mut spec = ControlledSpec::new(n, self.axis, self.phi, theta0, tau).with_omega(omega);
        if let Some(a) = self.activation {
            spec = spec.with_activation(a);
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn axis_label(&self) -> String {
        match self.axis {
            [x, 0.0, 0.0] if x == 1.0 => "x".into(),
            [0.0, y, 0.0] if y == 1.0 => "y".into(),
            [0.0, 0.0, z] if z == 1.0 => "z".into(),
            v => v.map(|x| fmt_g(x, SIG_DIGITS)).join(" "),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Point {
    pub n: usize,
    pub theta0: f64,
    pub tau: f64,
    pub fidelity: f64,
    pub p_success: f64,
    pub sigma: f64,
    pub sigma_closed: f64,
    pub qsl_bound: f64,
    pub qsl_ok: bool,
}

pub fn run_point(st: &Settings, ctx: &Ctx, protocol: Protocol, n: usize, theta0: f64, tau: f64) -> CliResult<Point> {
    let spec = st.spec(n, theta0, tau, ctx.omega)?;
    let base = controlled_hamiltonian(&spec)?;
    let sa = match protocol {
        Protocol::Sce => Some(match st.cd {
            CdKind::Analytic => cd_controlled(&spec)?,
            CdKind::Generic => cd_generic(&base, tau, st.grid)?,
        }),
        _ => None,
    };
    let drive: Drive = match &sa {
        Some(h) => h.into(),
        None => (&base).into(),
    };
    let mut rng = rng_for(ctx.seed, n as u64);
    let psis: Vec<QState> = (0..st.states).map(|_| QState::random(spec.system_qubits(), &mut rng)).collect();
    let mut starts = Vec::with_capacity(psis.len());
    let mut targets = Vec::with_capacity(psis.len());
    for psi in &psis {
        let inputs = TargetInputs::Controlled { spec: &spec, psi };
        starts.push(initial_state(protocol, inputs)?);
        targets.push(target_state(protocol, inputs)?);
    }
    let batch = run_batch(drive, &starts, &targets, tau, st.steps)?;
    let mut p_sum = 0.0;
    for fin in &batch.finals {
        p_sum += measure_ancilla(fin)?[1].probability;
    }
    let sigma_closed = match protocol {
        Protocol::Sce => controlled_gate_cost(n, ctx.omega, theta0, tau),
        _ => adiabatic_controlled_cost(n, ctx.omega),
    };
    Ok(Point {
        n,
        theta0,
        tau,
        fidelity: batch.min_fidelity,
        p_success: p_sum / batch.finals.len() as f64,
        sigma: energy_cost(|s| drive.at(s), st.grid)?,
        sigma_closed,
        qsl_bound: batch.qsl_bound,
        qsl_ok: batch.qsl_ok,
    })
}

pub fn run(c: &ControlledOpts, t: &TimeArgs, protocol: Protocol, ctx: &Ctx) -> CliResult<Report> {
    let st = Settings::resolve(c, t, &ctx.cfg)?;
    let mut points = Vec::new();
    for &n in &st.n_controls {
        for &theta0 in &st.theta0 {
            for &tau in &st.taus {
                points.push((n, theta0, tau));
            }
        }
    }
    let results = par_rows(&points, |&(n, th, tau)| run_point(&st, ctx, protocol, n, th, tau))?;
    let axis_label = st.axis_label();
    let mut table = Table::new(&HEADER);
    let mut violations = Vec::new();
    for p in results {
        let at = format!("{protocol} n={} theta0={} tau={}", p.n, p.theta0, p.tau);
        if protocol == Protocol::Sce {
            if p.fidelity < 1.0 - EXACT_INFIDELITY_TOL {
                violations.push(format!("{at}: fidelity {} below 1-{EXACT_INFIDELITY_TOL:e}", p.fidelity));
            }
            let rel = (p.sigma - p.sigma_closed).abs() / p.sigma_closed;
            if rel > CLOSED_FORM_REL_TOL {
                violations.push(format!("{at}: cost off its closed form by {rel:e}"));
            }
        }
        if !p.qsl_ok {
            violations.push(format!("{at}: speed limit violated"));
        }
        table.push(vec![
            protocol.name().into(),
            p.n.into(),
            axis_label.as_str().into(),
            st.phi.into(),
            p.theta0.into(),
            p.tau.into(),
            p.fidelity.into(),
            p.p_success.into(),
            success_probability(p.theta0).into(),
            p.sigma.into(),
            p.sigma_closed.into(),
            p.qsl_bound.into(),
            p.qsl_ok.into(),
        ]);
    }
    Ok(Report { table, violations })
}
