//! End-to-end runs of the `sal` binary.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

fn sal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sal")).args(args).env_remove("SAL_JOBS").output().expect("spawn sal")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses CSV output into a header and rows of cells.
fn csv(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(o);
    let mut lines = text.lines();
    let header = lines.next().expect("header").split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn col(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<String> {
    let k = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[k].clone()).collect()
}

fn num(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    col(header, rows, name).iter().map(|x| x.parse().unwrap()).collect()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("sal-cli-test-{}-{name}", std::process::id()))
}

#[test]
fn teleport_state_example() {
    let o = sal(&["teleport", "--n", "1", "--tau", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = csv(&o);
    assert_eq!(h, ["protocol", "n", "gate", "tau", "fidelity", "sigma_sa", "sigma_ad", "qsl_bound", "qsl_ok"]);
    assert_eq!(rows.len(), 1);
    assert!(num(&h, &rows, "fidelity")[0] >= 1.0 - 1e-6);
    assert_eq!(col(&h, &rows, "qsl_ok")[0], "true");
    assert_eq!(col(&h, &rows, "protocol")[0], "teleport-state");
}

#[test]
fn teleport_gate_example() {
    let o = sal(&["teleport", "--n", "1", "--gate", "H", "--tau", "1", "--states", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    assert!(num(&h, &rows, "fidelity")[0] >= 1.0 - 1e-6);
    assert_eq!(col(&h, &rows, "protocol")[0], "teleport-gate");
    assert_eq!(col(&h, &rows, "gate")[0], "H");
}

#[test]
fn adiabatic_cnot_teleport_fails_at_short_runtime_without_error() {
    let o = sal(&["teleport", "--n", "2", "--gate", "CNOT", "--mode", "adiabatic", "--tau", "0.5", "--states", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    assert!(num(&h, &rows, "fidelity")[0] < 0.99);
    assert_eq!(col(&h, &rows, "protocol")[0], "teleport-gate-adiabatic");
    let (sa, ad) = (num(&h, &rows, "sigma_sa")[0], num(&h, &rows, "sigma_ad")[0]);
    assert!(sa > ad);
}

#[test]
fn controlled_commands_report_branches_and_costs() {
    let o = sal(&["sce", "--n-controls", "0", "--axis", "y", "--phi", "pi/2", "--theta0", "pi/2,pi", "--tau", "0.5", "--states", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    let p = num(&h, &rows, "p_success");
    assert!((p[0] - 0.5).abs() < 1e-6 && (p[1] - 1.0).abs() < 1e-6);
    for (a, b) in num(&h, &rows, "sigma").iter().zip(num(&h, &rows, "sigma_closed")) {
        assert!((a - b).abs() / b < 1e-6);
    }
    let o = sal(&["cae", "--n-controls", "1", "--tau", "0.5", "--states", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    assert!(num(&h, &rows, "fidelity")[0] < 0.99);
}

#[test]
fn cost_sweep_orders_curves_and_matches_closed_forms() {
    let o = sal(&["cost-sweep", "--theta0", "pi/2,pi", "--tau", "log:0.1:100:7"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    assert_eq!(h, ["kind", "n", "param", "omega_tau", "sigma_sa", "sigma_ad", "closed_form", "rel_err", "ratio"]);
    let sa = num(&h, &rows, "sigma_sa");
    assert!(num(&h, &rows, "rel_err").iter().all(|&e| e <= 1e-6));
    // θ₀ = π dominates θ₀ = π/2 at every runtime.
    for k in 0..7 {
        assert!(sa[7 + k] > sa[k]);
    }

    let o = sal(&["cost-sweep", "--kind", "teleport", "--n", "1,2", "--tau", "0.3,10000"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    assert_eq!(rows.len(), 2 * 3 * 2);
    let sa = num(&h, &rows, "sigma_sa");
    for k in 0..6 {
        assert!((sa[6 + k] / sa[k] - 4.0).abs() < 4e-6);
    }
    for (w, r) in num(&h, &rows, "omega_tau").iter().zip(num(&h, &rows, "ratio")) {
        if *w == 1e4 {
            assert!((r - 1.0).abs() < 1e-4);
        }
    }
}

#[test]
fn theta_opt_is_monotone_and_below_pi() {
    let o = sal(&["theta-opt", "--omega-tau", "log:1:1000:25"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    let th = num(&h, &rows, "theta0_min");
    assert!(th.windows(2).all(|w| w[1] >= w[0]));
    assert!(th.iter().all(|&t| t < PI));
    assert!(num(&h, &rows, "residual").iter().all(|r| r.abs() <= 1e-5));
    assert!(num(&h, &rows, "theta0_min_adiabatic").iter().all(|&t| t == 3.14159265359));
}

#[test]
fn qsl_check_reports_bound_and_chi() {
    let o = sal(&["qsl-check", "--tau", "0.1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    assert!(col(&h, &rows, "qsl_ok").iter().all(|x| x == "true"));
    assert!(col(&h, &rows, "chi_ok").iter().all(|x| x == "true"));
    let o = sal(&["qsl-check", "--protocol", "cae", "--tau", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn output_is_independent_of_worker_count() {
    let args = ["teleport", "--n", "1", "--tau", "0.1,0.5,1", "--states", "3", "--seed", "11"];
    let one = Command::new(env!("CARGO_BIN_EXE_sal")).args(args).env("SAL_JOBS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_sal")).args(args).env("SAL_JOBS", "4").output().unwrap();
    let flag = sal(&[&args[..], &["--jobs", "3"]].concat());
    assert!(one.status.success() && four.status.success() && flag.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, flag.stdout);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let cfg = tmp("config.json");
    let out = tmp("out.csv");
    std::fs::write(
        &cfg,
        format!(r#"{{"command": "theta-opt", "omega_tau": [1, 10], "output": "{}"}}"#, out.display()),
    )
    .unwrap();
    let o = sal(&["theta-opt", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written.lines().count(), 3);
    assert!(written.lines().nth(1).unwrap().starts_with("1,"));

    let o = sal(&["theta-opt", "--config", cfg.to_str().unwrap(), "--omega-tau", "5", "-o", "-"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("5,"));

    let o = sal(&["theta-opt", "--config", cfg.to_str().unwrap(), "--omega-tau", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written.lines().count(), 2);
    assert!(written.lines().nth(1).unwrap().starts_with("5,"));

    // A config for another command is rejected.
    let o = sal(&["teleport", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let _ = std::fs::remove_file(&cfg);
    let _ = std::fs::remove_file(&out);
}

#[test]
fn config_errors_exit_with_three() {
    for args in [
        &["teleport", "--n", "0"][..],
        &["teleport", "--gate", "CNOT"],
        &["teleport", "--schedule", "cubic"],
        &["teleport", "--tau", "-1"],
        &["teleport", "--cd", "numeric"],
        &["sce", "--axis", "0,0,0"],
        &["sce", "--theta0", "4"],
        &["theta-opt", "--omega-tau", "log:0:1:3"],
        &["qsl-check", "--protocol", "magic"],
        &["cost-sweep", "--kind", "other"],
        &["teleport", "--bogus"],
        &["teleport", "--steps", "3"],
        &["--config", "/nonexistent/sal.json", "selftest"],
    ] {
        let o = sal(args);
        assert_eq!(o.status.code(), Some(3), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
    }
    let o = Command::new(env!("CARGO_BIN_EXE_sal")).args(["selftest"]).env("SAL_JOBS", "many").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn invariant_breach_exits_with_two_and_still_writes_csv() {
    // Far too few steps for a superadiabatic run at this runtime.
    let o = sal(&["teleport", "--n", "1", "--tau", "100", "--steps", "100", "--states", "2"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = csv(&o);
    assert!(num(&h, &rows, "fidelity")[0] < 1.0 - 1e-6);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invariant"));
}

#[test]
fn custom_gate_from_file() {
    let path = tmp("gate.json");
    std::fs::write(&path, "[[[0,0],[1,0]],[[1,0],[0,0]]]").unwrap();
    let o = sal(&["teleport", "--gate", "custom", "--gate-file", path.to_str().unwrap(), "--states", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = csv(&o);
    assert_eq!(col(&h, &rows, "gate")[0], "custom");
    assert!(num(&h, &rows, "fidelity")[0] >= 1.0 - 1e-6);
    std::fs::write(&path, "[[[1,0],[1,0]],[[0,0],[1,0]]]").unwrap();
    assert_eq!(sal(&["teleport", "--gate", "custom", "--gate-file", path.to_str().unwrap()]).status.code(), Some(3));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn help_exits_cleanly() {
    let o = sal(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("cost-sweep"));
}
