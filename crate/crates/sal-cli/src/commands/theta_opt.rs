use sal_core::metrics::probabilistic::{is_feasible, ADIABATIC_THETA_OPT};
use sal_core::metrics::{stationarity_residual, theta_opt};

use super::*;
use crate::args::ThetaOptArgs;
use crate::config::float_list;

pub const HEADER: [&str; 5] = ["omega_tau", "theta0_min", "residual", "feasible", "theta0_min_adiabatic"];

pub fn run(a: &ThetaOptArgs, ctx: &Ctx) -> CliResult<Report> {
    let wts = float_list(&a.omega_tau, &ctx.cfg.omega_tau, "log:0.1:1000:41")?;
    require_positive(&wts, "omega-tau")?;
    let thetas = par_rows(&wts, |&wt| Ok(theta_opt(wt)?))?;
    let mut table = Table::new(&HEADER);
    let mut violations = Vec::new();
    for (&wt, &th) in wts.iter().zip(&thetas) {
        let residual = stationarity_residual(th, wt);
        let feasible = is_feasible(th);
        if residual.abs() > RESIDUAL_TOL || !feasible {
            violations.push(format!("omega_tau={wt}: theta0={th} residual {residual:e} feasible={feasible}"));
        }
        table.push(vec![wt.into(), th.into(), residual.into(), feasible.into(), ADIABATIC_THETA_OPT.into()]);
    }
    Ok(Report { table, violations })
}
