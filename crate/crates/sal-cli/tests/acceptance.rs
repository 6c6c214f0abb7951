//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Runs without the libtest harness so the report is
//! always visible in `cargo test` output.

use std::f64::consts::PI;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sal_core::counterdiabatic::teleport_block::sector_frame;
use sal_core::counterdiabatic::{cd_generic, cd_xi};
use sal_core::dynamics::{
    default_steps, evolve, evolve_batch, initial_state, measure_ancilla, success_probability, target_state, Protocol,
    TargetInputs,
};
use sal_core::hamiltonians::controlled::h_xi;
use sal_core::hamiltonians::gates::{cnot, hadamard, pauli_x, pauli_z, pi8};
use sal_core::hamiltonians::teleport::{teleport_gap, teleport_levels};
use sal_core::hamiltonians::{
    adiabatic_time_estimate, controlled_hamiltonian, grid, parity_operators, teleport_hamiltonian, ControlledSpec,
    TeleportSpec, TimeDepHamiltonian,
};
use sal_core::linalg::eigh;
use sal_core::metrics::cost::controlled_scaling;
use sal_core::metrics::probabilistic::{is_feasible, ADIABATIC_THETA_OPT};
use sal_core::metrics::{
    adiabatic_controlled_cost, energy_cost, probabilistic_cost, single_gate_cost, speed_limit_chi, stationarity_residual, superadiabatic_cost,
    teleport_scaling, theta_opt, Mode, QslReport,
};
use sal_core::*;

/// Pinned acceptance thresholds.
mod tol {
    /// Superadiabatic protocols must hit their targets to this infidelity.
    pub const EXACT_INFIDELITY: f64 = 1e-6;
    /// Rotated and unrotated superadiabatic Hamiltonians share a spectrum.
    pub const ROTATED_SPECTRUM: f64 = 1e-10;
    /// Adiabatic-only teleport at short runtime stays below this fidelity.
    pub const ADIABATIC_SHORT_FIDELITY_MAX: f64 = 0.99;
    /// ... and reaches this one at a hundred adiabatic times.
    pub const ADIABATIC_SLOW_FIDELITY_MIN: f64 = 0.999;
    /// Closed-form levels and gap against numerical diagonalization.
    pub const SPECTRUM: f64 = 1e-9;
    /// Diagonal of the CD term in the instantaneous eigenbasis.
    pub const CD_DIAGONAL: f64 = 1e-8;
    /// Trace of the anticommutator of H and its CD term.
    pub const CD_ANTICOMMUTATOR_TRACE: f64 = 1e-8;
    /// Commutators with the parity stabilizers.
    pub const PARITY_COMMUTATOR: f64 = 1e-9;
    /// Generic spectral-frame CD against the closed form, Frobenius norm.
    pub const GENERIC_CD: f64 = 1e-6;
    /// Ancilla-1 probability against sin²(θ₀/2).
    pub const BRANCH_PROBABILITY: f64 = 1e-6;
    /// Relative agreement of costs with closed forms and scaling laws.
    pub const COST_REL: f64 = 1e-6;
    /// |Σ_SA/Σ_Ad - 1| at ωτ = 10⁴.
    pub const SLOW_COST_RATIO: f64 = 1e-4;
    /// Slack allowed on the χ refinement.
    pub const CHI: f64 = 1e-6;
    /// Stationarity residual of the θ₀ optimizer.
    pub const THETA_RESIDUAL: f64 = 1e-5;
}

/// Random inputs per protocol point.
const STATES: usize = 20;
const SEED: u64 = 0x5a1;
const SLOW_OMEGA_TAU: f64 = 1e4;

/// Speed-limit outcome of every evolution run by the suite.
#[derive(Default)]
struct QslTally {
    runs: usize,
    failures: usize,
    worst_excess: f64,
}

impl QslTally {
    fn record(&mut self, q: &QslReport) {
        self.runs += 1;
        if !q.satisfied {
            self.failures += 1;
        }
        let excess = q.bound - q.tau;
        if self.runs == 1 || excess > self.worst_excess {
            self.worst_excess = excess;
        }
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// Fidelities of a batch of runs against their targets, with speed-limit
/// reports recorded in `tally`.
fn batch_fidelities<'a>(
    drive: impl Into<Drive<'a>>,
    starts: &[QState],
    targets: &[QState],
    tau: f64,
    tally: &mut QslTally,
) -> Vec<f64> {
    let drive = drive.into();
    let out = evolve_batch(drive, starts, tau, default_steps(drive, tau)).expect("evolution");
    let mut fids = Vec::new();
    for ((start, fin), (target, &e)) in starts.iter().zip(&out.final_states).zip(targets.iter().zip(&out.e_tau)) {
        tally.record(&QslReport::new(tau, start, fin, e).expect("qsl"));
        fids.push(fidelity(fin, target).expect("fidelity"));
    }
    fids
}

fn teleport_inputs(n: usize, gate: Option<&Operator>, stream: u64) -> (Vec<QState>, Vec<QState>) {
    let protocol = if gate.is_some() { Protocol::TeleportGate } else { Protocol::TeleportState };
    let mut r = rng(stream);
    let (mut starts, mut targets) = (Vec::new(), Vec::new());
    for _ in 0..STATES {
        let psi = QState::random(n, &mut r);
        let inputs = TargetInputs::Teleport { psi: &psi, gate };
        starts.push(initial_state(protocol, inputs).unwrap());
        targets.push(target_state(protocol, inputs).unwrap());
    }
    (starts, targets)
}

fn worst(f: &[f64]) -> f64 {
    f.iter().copied().fold(f64::INFINITY, f64::min)
}

fn criterion_1(tally: &mut QslTally) -> Outcome {
    let mut min_f = f64::INFINITY;
    let mut runs = 0;
    for n in [1usize, 2] {
        let (starts, targets) = teleport_inputs(n, None, n as u64);
        let families: &[Family] = if n == 1 { &Family::ALL } else { &[Family::Linear] };
        for &fam in families {
            for tau in [0.1, 1.0, 10.0] {
                let sa = cd_teleport(&TeleportSpec::new(n, make_schedule(fam)), tau).unwrap();
                min_f = min_f.min(worst(&batch_fidelities(&sa, &starts, &targets, tau, tally)));
                runs += STATES;
            }
        }
    }
    let infid = 1.0 - min_f;
    outcome(
        infid <= tol::EXACT_INFIDELITY,
        format!("{runs} runs, worst infidelity {infid:.2e} (max {:.0e})", tol::EXACT_INFIDELITY),
    )
}

fn criterion_2(tally: &mut QslTally) -> Outcome {
    let tau = 0.5;
    let sch = make_schedule(Family::Linear);
    let gates = [("X", pauli_x()), ("Z", pauli_z()), ("H", hadamard()), ("T", pi8()), ("CNOT", cnot())];
    let mut min_f = f64::INFINITY;
    let mut spec_err = 0.0f64;
    for (k, (_, g)) in gates.iter().enumerate() {
        let n = g.num_qubits().unwrap();
        let plain = cd_teleport(&TeleportSpec::new(n, sch), tau).unwrap();
        let rotated = cd_teleport(&TeleportSpec::new(n, sch).with_gate(g.clone()), tau).unwrap();
        let (starts, targets) = teleport_inputs(n, Some(g), 10 + k as u64);
        min_f = min_f.min(worst(&batch_fidelities(&rotated, &starts, &targets, tau, tally)));
        for s in grid(21) {
            let (a, b) = (eigh(&plain.at(s)).unwrap(), eigh(&rotated.at(s)).unwrap());
            for (x, y) in a.values.iter().zip(&b.values) {
                spec_err = spec_err.max((x - y).abs());
            }
        }
    }
    let infid = 1.0 - min_f;
    outcome(
        infid <= tol::EXACT_INFIDELITY && spec_err <= tol::ROTATED_SPECTRUM,
        format!(
            "X,Z,H,T,CNOT worst infidelity {infid:.2e} (max {:.0e}); spectrum offset {spec_err:.2e} (max {:.0e})",
            tol::EXACT_INFIDELITY,
            tol::ROTATED_SPECTRUM
        ),
    )
}

fn criterion_3(tally: &mut QslTally) -> Outcome {
    let (starts, targets) = teleport_inputs(1, None, 20);
    let mut short_max = 0.0f64;
    let mut slow_min = 1.0f64;
    for fam in Family::ALL {
        let h = teleport_hamiltonian(&TeleportSpec::new(1, make_schedule(fam))).unwrap();
        let short = batch_fidelities(&h, &starts, &targets, 0.5, tally);
        short_max = short.iter().copied().fold(short_max, f64::max);
        let tau_slow = 100.0 * adiabatic_time_estimate(&h, 201).unwrap();
        slow_min = slow_min.min(worst(&batch_fidelities(&h, &starts, &targets, tau_slow, tally)));
    }
    outcome(
        short_max < tol::ADIABATIC_SHORT_FIDELITY_MAX && slow_min >= tol::ADIABATIC_SLOW_FIDELITY_MIN,
        format!(
            "best fidelity at ωτ=0.5 {short_max:.4} (< {}); worst at 100×estimate {slow_min:.6} (≥ {})",
            tol::ADIABATIC_SHORT_FIDELITY_MAX,
            tol::ADIABATIC_SLOW_FIDELITY_MIN
        ),
    )
}

fn criterion_4() -> Outcome {
    let (mut level_err, mut gap_err) = (0.0f64, 0.0f64);
    for n in [1usize, 2] {
        for fam in Family::ALL {
            let sch = make_schedule(fam);
            let h = teleport_hamiltonian(&TeleportSpec::new(n, sch)).unwrap();
            for s in grid(101) {
                let e = eigh(&h.at(s)).unwrap();
                for (x, y) in e.values.iter().zip(teleport_levels(sch.chi(s), 1.0, n)) {
                    level_err = level_err.max((x - y).abs());
                }
                let clusters = e.clusters(1e-8);
                let gap = e.values[clusters[1].start] - e.values[clusters[0].start];
                gap_err = gap_err.max((gap - teleport_gap(&sch, 1.0, s)).abs());
            }
        }
    }
    outcome(
        level_err <= tol::SPECTRUM && gap_err <= tol::SPECTRUM,
        format!("levels {level_err:.2e}, gap {gap_err:.2e} (max {:.0e}); n=1,2, three schedules", tol::SPECTRUM),
    )
}

fn criterion_5() -> Outcome {
    let (mut diag, mut anti, mut comm) = (0.0f64, 0.0f64, 0.0f64);
    for n in [1usize, 2] {
        let par = parity_operators(n).unwrap();
        for fam in Family::ALL {
            let sa = cd_teleport(&TeleportSpec::new(n, make_schedule(fam)), 0.3).unwrap();
            for s in grid(41) {
                let h = sa.base().at(s);
                let cd = sa.cd_at(s);
                let e = eigh(&h).unwrap();
                for k in 0..e.values.len() {
                    let v = e.vector(k);
                    diag = diag.max(v.dotc(&cd.apply_vec(&v)).norm());
                }
                anti = anti.max(Operator::anticommutator(&h, &cd).trace().norm());
                let total = sa.at(s);
                for p in par.sector_z.iter().chain(&par.sector_x).chain([&par.pi_z, &par.pi_x]) {
                    comm = comm.max(Operator::commutator(&total, p).max_abs());
                }
            }
        }
    }
    let mut generic = 0.0f64;
    for (theta0, xi) in [(PI, 0.0), (PI / 2.0, 1.3), (2.0, PI)] {
        let tau = 0.7;
        let h = TimeDepHamiltonian::new(2, Arc::new(move |s| h_xi(1.0, theta0 * s, xi)));
        let sa = cd_generic(&h, tau, 2001).unwrap();
        let exact = cd_xi(theta0, tau, xi);
        for s in grid(101) {
            generic = generic.max((sa.cd_at(s).matrix() - exact.matrix()).norm());
        }
    }
    outcome(
        diag <= tol::CD_DIAGONAL
            && anti <= tol::CD_ANTICOMMUTATOR_TRACE
            && comm <= tol::PARITY_COMMUTATOR
            && generic <= tol::GENERIC_CD,
        format!(
            "diagonal {diag:.2e} (max {:.0e}), Tr{{H,H_CD}} {anti:.2e} (max {:.0e}), parity {comm:.2e} (max {:.0e}), generic vs closed {generic:.2e} (max {:.0e})",
            tol::CD_DIAGONAL,
            tol::CD_ANTICOMMUTATOR_TRACE,
            tol::PARITY_COMMUTATOR,
            tol::GENERIC_CD
        ),
    )
}

/// Worst fidelity and mean ancilla-1 probability of an SCE batch.
fn sce_batch(spec: &ControlledSpec, stream: u64, tally: &mut QslTally) -> (f64, f64, Vec<QState>, Vec<QState>) {
    let sa = cd_controlled(spec).unwrap();
    let mut r = rng(stream);
    let (mut psis, mut starts, mut targets) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..STATES {
        let psi = QState::random(spec.system_qubits(), &mut r);
        let inputs = TargetInputs::Controlled { spec, psi: &psi };
        starts.push(initial_state(Protocol::Sce, inputs).unwrap());
        targets.push(target_state(Protocol::Sce, inputs).unwrap());
        psis.push(psi);
    }
    let out = evolve_batch(&sa, &starts, spec.tau, default_steps(&sa, spec.tau)).unwrap();
    let mut min_f = f64::INFINITY;
    let mut p1 = 0.0;
    for ((start, fin), (target, &e)) in starts.iter().zip(&out.final_states).zip(targets.iter().zip(&out.e_tau)) {
        tally.record(&QslReport::new(spec.tau, start, fin, e).unwrap());
        min_f = min_f.min(fidelity(fin, target).unwrap());
        p1 += measure_ancilla(fin).unwrap()[1].probability;
    }
    (min_f, p1 / STATES as f64, psis, out.final_states)
}

fn criterion_6(tally: &mut QslTally) -> Outcome {
    let tau = 0.5;
    let mut min_f = f64::INFINITY;
    let mut prob_err = 0.0f64;
    let mut branch_err = 0.0f64;

    // NOT: the θ₀ = π branch is reached with certainty.
    let not = ControlledSpec::new(0, [1.0, 0.0, 0.0], PI, PI, tau);
    let (f, _, psis, finals) = sce_batch(&not, 30, tally);
    min_f = min_f.min(f);
    for (psi, fin) in psis.iter().zip(&finals) {
        let out = measure_ancilla(fin).unwrap();
        prob_err = prob_err.max((out[1].probability - 1.0).abs());
        let flipped = psi.evolve_by(&pauli_x()).unwrap();
        branch_err = branch_err.max(1.0 - fidelity(out[1].post_state.as_ref().unwrap(), &flipped).unwrap());
    }

    // Hadamard-type rotation about ŷ by π/2, deterministic and half-angle.
    let had = ControlledSpec::new(0, [0.0, 1.0, 0.0], PI / 2.0, PI, tau);
    let plus = QState::new(vec![linalg::r(1.0), linalg::r(1.0)].into_iter().map(|z| z / 2f64.sqrt()).collect()).unwrap();
    let sends_zero_to_plus = fidelity(&QState::basis(1, 0).evolve_by(&had.rotation_operator()).unwrap(), &plus).unwrap();
    branch_err = branch_err.max(1.0 - sends_zero_to_plus);
    min_f = min_f.min(sce_batch(&had, 31, tally).0);
    let half = ControlledSpec::new(0, [0.0, 1.0, 0.0], PI / 2.0, PI / 2.0, tau);
    let (f, p1, _, _) = sce_batch(&half, 32, tally);
    min_f = min_f.min(f);
    prob_err = prob_err.max((p1 - 0.5).abs()).max((success_probability(PI / 2.0) - 0.5).abs());

    // Doubly controlled NOT.
    let toffoli = ControlledSpec::new(2, [1.0, 0.0, 0.0], PI, PI, tau);
    min_f = min_f.min(sce_batch(&toffoli, 33, tally).0);

    let infid = 1.0 - min_f;
    outcome(
        infid <= tol::EXACT_INFIDELITY && branch_err <= tol::EXACT_INFIDELITY && prob_err <= tol::BRANCH_PROBABILITY,
        format!(
            "NOT, Ry(π/2) at θ₀=π and π/2, Toffoli: worst infidelity {infid:.2e}, branch-state error {branch_err:.2e} (max {:.0e}); probability error {prob_err:.2e} (max {:.0e})",
            tol::EXACT_INFIDELITY,
            tol::BRANCH_PROBABILITY
        ),
    )
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_7() -> Outcome {
    let wts: Vec<f64> = (0..13).map(|k| 10f64.powf(-1.0 + k as f64 / 4.0)).collect();
    let mut formula = 0.0f64;
    let mut ordering_ok = true;
    for &wt in &wts {
        for theta0 in [PI / 2.0, PI] {
            let spec = ControlledSpec::new(0, [1.0, 0.0, 0.0], PI, theta0, wt);
            let sa = energy_cost(|s| cd_controlled(&spec).unwrap().at(s), 2001).unwrap();
            let ad = energy_cost(|s| controlled_hamiltonian(&spec).unwrap().at(s), 2001).unwrap();
            formula = formula.max(rel(sa, single_gate_cost(1.0, theta0, wt)));
            ordering_ok &= sa > ad;
        }
    }

    let mut scaling = 0.0f64;
    let one = energy_cost(|s| cd_controlled(&ControlledSpec::new(0, [0.0, 0.0, 1.0], 1.0, 2.0, 0.4)).unwrap().at(s), 201)
        .unwrap();
    for n in 1..=3 {
        let spec = ControlledSpec::new(n, [0.0, 0.0, 1.0], 1.0, 2.0, 0.4);
        let c = energy_cost(|s| cd_controlled(&spec).unwrap().at(s), 201).unwrap();
        scaling = scaling.max(rel(c / one, controlled_scaling(n))).max(rel(controlled_scaling(n), 2f64.powi(n as i32).sqrt()));
    }
    let sch = make_schedule(Family::Trig);
    let tele = |n: usize| {
        let sa = cd_teleport(&TeleportSpec::new(n, sch), 0.7).unwrap();
        energy_cost(|s| sa.at(s), 201).unwrap()
    };
    let (t1, t2, t3) = (tele(1), tele(2), tele(3));
    scaling = scaling
        .max(rel(t2 / t1, 4.0))
        .max(rel(t3 / t1, 8.0 * 3f64.sqrt()))
        .max(rel(teleport_scaling(3), 8.0 * 3f64.sqrt()));

    let mut slow = 0.0f64;
    for fam in Family::ALL {
        let frame = sector_frame(&make_schedule(fam), 1.0, 2001).unwrap();
        for &wt in &wts {
            let report = superadiabatic_cost(&frame, wt).unwrap();
            ordering_ok &= report.sigma_sa > report.sigma_ad;
        }
        slow = slow.max((superadiabatic_cost(&frame, SLOW_OMEGA_TAU).unwrap().ratio() - 1.0).abs());
    }
    slow = slow.max((single_gate_cost(1.0, PI, SLOW_OMEGA_TAU) / adiabatic_controlled_cost(0, 1.0) - 1.0).abs());

    outcome(
        formula <= tol::COST_REL && scaling <= tol::COST_REL && ordering_ok && slow <= tol::SLOW_COST_RATIO,
        format!(
            "single-gate formula {formula:.2e}, scaling laws {scaling:.2e} (max {:.0e}); Σ_SA>Σ_Ad {ordering_ok}; |ratio-1| at ωτ=1e4 {slow:.2e} (max {:.0e})",
            tol::COST_REL,
            tol::SLOW_COST_RATIO
        ),
    )
}

fn criterion_8(tally: &mut QslTally) -> Outcome {
    let mut chi_deficit = f64::NEG_INFINITY;
    let mut record = |out: &EvolutionResult, tally: &mut QslTally| {
        tally.record(&QslReport::from_evolution(out).unwrap());
        let chi = speed_limit_chi(&out.trajectory.states).unwrap();
        chi_deficit = chi_deficit.max(chi.bures_term - chi.chi);
    };
    let mut r = rng(40);
    for n in [1usize, 2] {
        let psi = QState::random(n, &mut r);
        let start = initial_state(Protocol::TeleportState, TargetInputs::Teleport { psi: &psi, gate: None }).unwrap();
        for fam in Family::ALL {
            for tau in [0.1, 1.0, 10.0] {
                if n == 2 && tau > 1.0 {
                    continue;
                }
                let spec = TeleportSpec::new(n, make_schedule(fam));
                let sa = cd_teleport(&spec, tau).unwrap();
                record(&evolve(&sa, &start, tau, default_steps(&sa, tau)).unwrap(), tally);
                let h = teleport_hamiltonian(&spec).unwrap();
                record(&evolve(&h, &start, tau, default_steps(&h, tau)).unwrap(), tally);
            }
        }
    }
    for theta0 in [PI / 2.0, PI] {
        let psi = QState::random(1, &mut r);
        for tau in [0.5, 5.0] {
            let spec = ControlledSpec::new(0, [0.0, 1.0, 0.0], PI / 2.0, theta0, tau);
            let start = initial_state(Protocol::Sce, TargetInputs::Controlled { spec: &spec, psi: &psi }).unwrap();
            let sa = cd_controlled(&spec).unwrap();
            record(&evolve(&sa, &start, tau, default_steps(&sa, tau)).unwrap(), tally);
            let h = controlled_hamiltonian(&spec).unwrap();
            record(&evolve(&h, &start, tau, default_steps(&h, tau)).unwrap(), tally);
        }
    }
    outcome(
        tally.failures == 0 && chi_deficit <= tol::CHI,
        format!(
            "{} evolutions, {} bound failures, max (bound - τ) {:.3e}; max χ deficit {chi_deficit:.2e} (max {:.0e})",
            tally.runs,
            tally.failures,
            tally.worst_excess,
            tol::CHI
        ),
    )
}

fn criterion_9() -> Outcome {
    let wts: Vec<f64> = (0..41).map(|k| 10f64.powf(-2.0 + k as f64 / 8.0)).collect();
    let mut residual = 0.0f64;
    let mut feasible = true;
    let mut monotone = true;
    let mut prev = 0.0;
    for &wt in &wts {
        let t = theta_opt(wt).unwrap();
        residual = residual.max(stationarity_residual(t, wt).abs());
        feasible &= is_feasible(t) && t < PI;
        if wt >= 1.0 {
            monotone &= t >= prev;
            prev = t;
        }
    }
    let near_pi = PI - theta_opt(1e3).unwrap();
    // Adiabatic mean cost keeps falling all the way to θ₀ = π.
    let ad = |x: f64| probabilistic_cost(x, 1.0, Mode::Adiabatic, 1.0).unwrap();
    let ad_argmin = (1..=1000).map(|k| PI * k as f64 / 1000.0).fold((0.0, f64::INFINITY), |best, x| {
        let v = ad(x);
        if v < best.1 {
            (x, v)
        } else {
            best
        }
    });
    let adiabatic_ok = ADIABATIC_THETA_OPT == PI && ad_argmin.0 == PI;
    outcome(
        residual <= tol::THETA_RESIDUAL && feasible && monotone && near_pi < 1e-3 && adiabatic_ok,
        format!(
            "max residual {residual:.2e} (max {:.0e}), feasible {feasible}, monotone {monotone}, π-θ(1e3) {near_pi:.2e}, adiabatic optimum at π {adiabatic_ok}",
            tol::THETA_RESIDUAL
        ),
    )
}

fn criterion_10() -> Outcome {
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_sal")).arg("selftest").env("SAL_JOBS", jobs).output().expect("spawn sal")
    };
    let runs = [run("1"), run("1"), run("2")];
    let ok_status = runs.iter().all(|o| o.status.success());
    let identical = runs.windows(2).all(|w| w[0].stdout == w[1].stdout) && !runs[0].stdout.is_empty();
    outcome(
        ok_status && identical,
        format!("3 selftest runs (SAL_JOBS=1,1,2): exit 0 {ok_status}, byte-identical {identical}, {} bytes", runs[0].stdout.len()),
    )
}

fn main() {
    // Honour `cargo test -- <filter>` loosely: skip entirely when filtered
    // to something that is not this suite.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    let mut tally = QslTally::default();
    let titles = [
        "superadiabatic teleportation exactness",
        "gate teleportation by rotation",
        "adiabatic contrast",
        "spectrum and gap closed forms",
        "counter-diabatic structural invariants",
        "superadiabatic controlled gates",
        "energy cost formulas",
        "quantum speed limit",
        "theta0 optimizer",
        "determinism",
    ];
    let mut failed = 0;
    for (k, title) in titles.iter().enumerate() {
        let t0 = Instant::now();
        let o = match k + 1 {
            1 => criterion_1(&mut tally),
            2 => criterion_2(&mut tally),
            3 => criterion_3(&mut tally),
            4 => criterion_4(),
            5 => criterion_5(),
            6 => criterion_6(&mut tally),
            7 => criterion_7(),
            8 => criterion_8(&mut tally),
            9 => criterion_9(),
            _ => criterion_10(),
        };
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<40} {} [{:.1}s] {}",
            k + 1,
            title,
            if o.pass { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", titles.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
