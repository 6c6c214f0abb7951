use std::f64::consts::PI;

use sal_core::counterdiabatic::teleport_block::sector_frame;
use sal_core::hamiltonians::controlled::ControlledSpec;
use sal_core::hamiltonians::teleport::{teleport_hamiltonian, TeleportSpec};
use sal_core::metrics::cost::{
    adiabatic_cost_from_levels, controlled_scaling, sector_cost_from_block, teleport_scaling, DEFAULT_GRID,
};
use sal_core::metrics::probabilistic::{feasible_onset, is_feasible, ADIABATIC_THETA_OPT};
use sal_core::metrics::*;
use sal_core::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn single_gate_cost_matches_quadrature() {
    for wt in [0.1, 0.5, 1.0, 3.0, 10.0, 100.0] {
        for theta0 in [PI / 2.0, PI] {
            let sa = cd_controlled(&ControlledSpec::new(0, [1.0, 0.0, 0.0], PI, theta0, wt)).unwrap();
            let numeric = energy_cost(|s| sa.at(s), DEFAULT_GRID).unwrap();
            assert!(rel(numeric, single_gate_cost(1.0, theta0, wt)) < 1e-6, "wt={wt}");
        }
    }
}

#[test]
fn controlled_cost_scales_with_register() {
    let one = energy_cost(|s| cd_controlled(&ControlledSpec::new(0, [0.0, 0.0, 1.0], 1.0, 2.0, 0.4)).unwrap().at(s), 201)
        .unwrap();
    for n in 1..=3 {
        let sa = cd_controlled(&ControlledSpec::new(n, [0.0, 0.0, 1.0], 1.0, 2.0, 0.4)).unwrap();
        let cost = energy_cost(|s| sa.at(s), 201).unwrap();
        assert!(rel(cost / one, controlled_scaling(n)) < 1e-6, "n={n}");
        assert!(rel(cost, controlled_gate_cost(n, 1.0, 2.0, 0.4)) < 1e-6);
    }
    assert!((adiabatic_controlled_cost(0, 1.0) - 2.0).abs() < 1e-15);
}

#[test]
fn teleport_costs_scale_with_sector_count() {
    let sch = make_schedule(Family::Trig);
    let tau = 0.7;
    let cost = |n: usize| {
        let sa = cd_teleport(&TeleportSpec::new(n, sch), tau).unwrap();
        energy_cost(|s| sa.at(s), 201).unwrap()
    };
    let (c1, c2) = (cost(1), cost(2));
    assert!(rel(c2 / c1, 4.0) < 1e-6);
    assert!(rel(c2 / c1, teleport_scaling(2)) < 1e-6);
    let block = energy_cost(
        |s| {
            let v = sch.eval(s);
            let h = sal_core::hamiltonians::teleport::block_hamiltonian(v.eta_i, v.eta_f, 1.0);
            &h + &sal_core::counterdiabatic::teleport_block::block_cd(&sch, tau, s)
        },
        201,
    )
    .unwrap();
    assert!(rel(sector_cost_from_block(block), c1) < 1e-6);
}

#[test]
fn frame_cost_matches_operator_cost_and_orders() {
    for fam in Family::ALL {
        let sch = make_schedule(fam);
        let frame = sector_frame(&sch, 1.0, DEFAULT_GRID).unwrap();
        let h = teleport_hamiltonian(&TeleportSpec::new(1, sch)).unwrap();
        let ad_levels = adiabatic_cost_from_levels(|s| h.levels(s).unwrap(), DEFAULT_GRID).unwrap();
        let ad_op = energy_cost(|s| h.at(s), DEFAULT_GRID).unwrap();
        assert!(rel(ad_levels, ad_op) < 1e-8);
        let mut last = f64::INFINITY;
        for tau in [0.1, 0.3, 1.0, 3.0, 10.0] {
            let report = superadiabatic_cost(&frame, tau).unwrap();
            let sa = cd_teleport_block(sch, tau, 1.0).unwrap();
            let direct = energy_cost(|s| sa.at(s), DEFAULT_GRID).unwrap();
            assert!(rel(report.sigma_sa, direct) < 1e-6, "{fam} tau={tau}");
            assert!(rel(report.sigma_ad, ad_op) < 1e-8);
            assert!(report.sigma_sa > report.sigma_ad);
            assert!(report.sigma_sa < last);
            last = report.sigma_sa;
        }
        let slow = superadiabatic_cost(&frame, 1e4).unwrap();
        assert!((slow.ratio() - 1.0).abs() < 1e-4);
    }
}

#[test]
fn optimizer_properties() {
    let onset = feasible_onset();
    let mut prev = 0.0;
    for wt in [1.0, 1.5, 2.0, 5.0, 10.0, 100.0] {
        let t = theta_opt(wt).unwrap();
        assert!(stationarity_residual(t, wt).abs() <= 1e-5);
        assert!(is_feasible(t) && t >= onset && t < PI);
        assert!(t >= prev);
        prev = t;
        let h = 1e-4;
        let f = |x: f64| probabilistic_cost(x, wt, Mode::Superadiabatic, 1.0).unwrap();
        assert!(f(t) <= f(t - h) && f(t) <= f(t + h));
    }
    assert!(PI - theta_opt(1e3).unwrap() < 1e-3);
    // The adiabatic mean cost only decreases towards π.
    let ad = |x: f64| probabilistic_cost(x, 1.0, Mode::Adiabatic, 1.0).unwrap();
    for k in 1..100 {
        let x = PI * k as f64 / 100.0;
        assert!(ad(x) > ad(x + PI / 100.0) - 1e-15);
    }
    assert_eq!(ADIABATIC_THETA_OPT, PI);
}

#[test]
fn mean_cost_is_convex() {
    for wt in [0.1, 1.0, 10.0] {
        let f = |x: f64| probabilistic_cost(x, wt, Mode::Superadiabatic, 1.0).unwrap();
        let h = 1e-4;
        for k in 1..1000 {
            let x = PI * k as f64 / 1000.0;
            if x + h > PI {
                break;
            }
            assert!(f(x + h) - 2.0 * f(x) + f(x - h) > 0.0, "wt={wt} x={x}");
        }
    }
}
