use sal_core::counterdiabatic::cd_controlled;
use sal_core::counterdiabatic::teleport_block::sector_frame;
use sal_core::hamiltonians::{controlled_hamiltonian, teleport_hamiltonian, ControlledSpec, TeleportSpec};
use sal_core::metrics::{controlled_gate_cost, energy_cost, superadiabatic_cost, teleport_scaling};
use sal_core::{cd_teleport, make_schedule, Family, SpectralFrame};

use super::*;
use crate::args::CostSweepArgs;
use crate::config::{float_list, int_list};
use crate::table::{fmt_g, SIG_DIGITS};

pub const HEADER: [&str; 9] =
    ["kind", "n", "param", "omega_tau", "sigma_sa", "sigma_ad", "closed_form", "rel_err", "ratio"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Controlled,
    Teleport,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Controlled => "controlled",
            Kind::Teleport => "teleport",
        }
    }
}

/// Sweep parameter: a mixing angle or an interpolation family.
#[derive(Clone, Copy, Debug)]
enum Param {
    Theta0(f64),
    Schedule(Family),
}

#[derive(Clone, Copy, Debug)]
pub struct Row {
    pub n: usize,
    pub omega_tau: f64,
    pub sigma_sa: f64,
    pub sigma_ad: f64,
    pub closed_form: f64,
}

impl Row {
    pub fn rel_err(&self) -> f64 {
        (self.sigma_sa - self.closed_form).abs() / self.closed_form
    }
}

pub fn run(a: &CostSweepArgs, ctx: &Ctx) -> CliResult<Report> {
    let cfg = &ctx.cfg;
    let kind = match pick(&a.kind, &cfg.kind).as_deref().map(str::to_ascii_lowercase).as_deref() {
        None | Some("controlled") | Some("sce") => Kind::Controlled,
        Some("teleport") => Kind::Teleport,
        Some(other) => return Err(CliError::Config(format!("--kind must be controlled or teleport, got `{other}`"))),
    };
    let taus = float_list(&a.tau, &cfg.tau, "log:0.1:100:13")?;
    require_positive(&taus, "tau")?;
    let grid = super::grid(a.grid, cfg)?;
    let omega = ctx.omega;

    let (ns, params): (Vec<usize>, Vec<Param>) = match kind {
        Kind::Controlled => {
            let ns = int_list(&a.n, &cfg.n, &[0])?;
            if ns.iter().any(|&n| n > super::controlled::MAX_CONTROLS) {
                return Err(CliError::Config("too many controls".into()));
            }
            let th = float_list(&a.theta0, &cfg.theta0, "pi/2,pi")?;
            for &t in &th {
                ControlledSpec::new(0, [1.0, 0.0, 0.0], 0.0, t, 1.0).validate()?;
            }
            (ns, th.into_iter().map(Param::Theta0).collect())
        }
        Kind::Teleport => {
            let ns = int_list(&a.n, &cfg.n, &[1])?;
            if ns.iter().any(|&n| n == 0 || n > super::teleport::MAX_SECTORS) {
                return Err(CliError::Config("sectors out of range".into()));
            }
            let names = pick(&a.schedule, &cfg.schedule).unwrap_or_else(|| "linear,trig,exp".into());
            let fams = names.split(',').map(|s| family(s.trim())).collect::<CliResult<Vec<_>>>()?;
            (ns, fams.into_iter().map(Param::Schedule).collect())
        }
    };

    // One analytic sector frame per family, shared by every τ.
    let frames: Vec<Option<SpectralFrame>> = par_rows(&params, |p| match p {
        Param::Schedule(f) => Ok(Some(sector_frame(&make_schedule(*f), omega, grid)?)),
        Param::Theta0(_) => Ok(None),
    })?;

    let mut points = Vec::new();
    for &n in &ns {
        for (k, _) in params.iter().enumerate() {
            for &tau in &taus {
                points.push((n, k, tau));
            }
        }
    }
    let rows = par_rows(&points, |&(n, k, tau)| -> CliResult<Row> {
        let (sigma_sa, sigma_ad, closed_form) = match params[k] {
            Param::Theta0(theta0) => {
                let spec = ControlledSpec::new(n, [1.0, 0.0, 0.0], std::f64::consts::PI, theta0, tau).with_omega(omega);
                let sa = cd_controlled(&spec)?;
                let base = controlled_hamiltonian(&spec)?;
                (
                    energy_cost(|s| sa.at(s), grid)?,
                    energy_cost(|s| base.at(s), grid)?,
                    controlled_gate_cost(n, omega, theta0, tau),
                )
            }
            Param::Schedule(fam) => {
                let spec = TeleportSpec::new(n, make_schedule(fam)).with_omega(omega);
                let sa = cd_teleport(&spec, tau)?;
                let base = teleport_hamiltonian(&spec)?;
                let frame = frames[k].as_ref().expect("frame built for schedules");
                let sector = superadiabatic_cost(frame, tau)?;
                (
                    energy_cost(|s| sa.at(s), grid)?,
                    energy_cost(|s| base.at(s), grid)?,
                    teleport_scaling(n) * sector.sigma_sa,
                )
            }
        };
        Ok(Row { n, omega_tau: omega * tau, sigma_sa, sigma_ad, closed_form })
    })?;

    let mut table = Table::new(&HEADER);
    let mut violations = Vec::new();
    for (&(_, k, _), row) in points.iter().zip(rows) {
        let param = match params[k] {
            Param::Theta0(t) => fmt_g(t, SIG_DIGITS),
            Param::Schedule(f) => f.name().to_string(),
        };
        let at = format!("{} n={} {param} omega_tau={}", kind.name(), row.n, row.omega_tau);
        if row.rel_err() > CLOSED_FORM_REL_TOL {
            violations.push(format!("{at}: closed form off by {:e}", row.rel_err()));
        }
        if row.sigma_sa < row.sigma_ad {
            violations.push(format!("{at}: superadiabatic cost below adiabatic cost"));
        }
        table.push(vec![
            kind.name().into(),
            row.n.into(),
            param.into(),
            row.omega_tau.into(),
            row.sigma_sa.into(),
            row.sigma_ad.into(),
            row.closed_form.into(),
            row.rel_err().into(),
            (row.sigma_sa / row.sigma_ad).into(),
        ]);
    }
    Ok(Report { table, violations })
}
