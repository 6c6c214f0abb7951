//! Time evolution, target states and ancilla measurement.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::counterdiabatic::SuperadiabaticHamiltonian;
use crate::error::{Result, SalError};
use crate::hamiltonians::controlled::ControlledSpec;
use crate::hamiltonians::teleport::TeleportLayout;
use crate::hamiltonians::{cluster_tol, TimeDepHamiltonian};
use crate::linalg::{eigh, expi_apply, expi_apply_columns, r, Operator, QState};

/// Minimum step count accepted by [`evolve`].
pub const MIN_STEPS: usize = 100;
/// Steps per unit of `‖H‖τ`, and the floor of the default step count.
pub const STEPS_PER_UNIT: f64 = 2000.0;
/// Tolerance on sampled norms during evolution.
pub const NORM_DRIFT_TOL: f64 = 1e-8;

/// Generator of an evolution: a bare Hamiltonian or a superadiabatic one.
/// Instantaneous-ground tracking always refers to the bare part.
#[derive(Clone, Copy)]
pub enum Drive<'a> {
    Plain(&'a TimeDepHamiltonian),
    Superadiabatic(&'a SuperadiabaticHamiltonian),
}

impl<'a> From<&'a TimeDepHamiltonian> for Drive<'a> {
    fn from(h: &'a TimeDepHamiltonian) -> Self {
        Drive::Plain(h)
    }
}

impl<'a> From<&'a SuperadiabaticHamiltonian> for Drive<'a> {
    fn from(h: &'a SuperadiabaticHamiltonian) -> Self {
        Drive::Superadiabatic(h)
    }
}

impl Drive<'_> {
    pub fn at(&self, s: f64) -> Operator {
        match self {
            Drive::Plain(h) => h.at(s),
            Drive::Superadiabatic(h) => h.at(s),
        }
    }

    pub fn base(&self) -> &TimeDepHamiltonian {
        match self {
            Drive::Plain(h) => h,
            Drive::Superadiabatic(h) => h.base(),
        }
    }

    pub fn dim(&self) -> usize {
        self.base().dim()
    }
}

/// `max(2000, ceil(2000·max_s‖H(s)‖·τ))`, with the norm sampled on 21 nodes.
pub fn default_steps<'a>(h: impl Into<Drive<'a>>, tau: f64) -> usize {
    let h = h.into();
    let norm = (0..=20).map(|k| h.at(k as f64 / 20.0).spectral_norm_bound()).fold(0.0, f64::max);
    let steps = (STEPS_PER_UNIT * norm * tau).ceil();
    if steps.is_finite() {
        (steps as usize).max(STEPS_PER_UNIT as usize)
    } else {
        STEPS_PER_UNIT as usize
    }
}

/// Recording controls for [`evolve_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvolveOptions {
    /// Number of nodes where the overlap with the instantaneous ground level
    /// of the bare Hamiltonian is recorded (0 disables it).
    pub ground_samples: usize,
    /// Upper bound on stored trajectory states (at least 2).
    pub max_states: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { ground_samples: 101, max_states: 4001 }
    }
}

/// States sampled at propagator nodes.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub s: Vec<f64>,
    pub states: Vec<QState>,
}

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub final_state: QState,
    pub trajectory: Trajectory,
    /// `(s, <ψ(s)|P_0(s)|ψ(s)>)` with `P_0` the ground projector of the bare
    /// Hamiltonian.
    pub ground_tracking: Vec<(f64, f64)>,
    pub tau: f64,
    pub steps: usize,
    /// `∫₀¹ |<ψ(0)|H(s)|ψ(s)>| ds` by the midpoint rule on the step grid.
    pub e_tau: f64,
}

impl EvolutionResult {
    pub fn min_ground_fidelity(&self) -> f64 {
        self.ground_tracking.iter().map(|p| p.1).fold(1.0, f64::min)
    }
}

fn check_run(dim: usize, psi: &QState, tau: f64, steps: usize) -> Result<()> {
    if psi.dim() != dim {
        return Err(SalError::DimensionMismatch { expected: dim, found: psi.dim() });
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(SalError::InvalidSpec(format!("tau must be positive, got {tau}")));
    }
    if steps < MIN_STEPS {
        return Err(SalError::InvalidSpec(format!("at least {MIN_STEPS} steps required, got {steps}")));
    }
    Ok(())
}

fn generator(drive: &Drive<'_>, s: f64) -> Result<Operator> {
    let h = drive.at(s);
    if !h.is_hermitian() {
        return Err(SalError::NotHermitian(h.hermiticity_error()));
    }
    Ok(h)
}

fn ground_overlap(h: &TimeDepHamiltonian, s: f64, v: &DVector<crate::linalg::C64>) -> Result<f64> {
    let e = eigh(&h.at(s))?;
    let ground = e.clusters(cluster_tol(&e.values))[0].clone();
    let v0 = e.vectors.columns(ground.start, ground.len());
    Ok((v0.adjoint() * v).norm_squared())
}

/// Integrates `i ∂_t ψ = H(t/τ) ψ` over `[0, τ]` with `steps` midpoint
/// exponential steps.
pub fn evolve<'a>(h: impl Into<Drive<'a>>, psi0: &QState, tau: f64, steps: usize) -> Result<EvolutionResult> {
    evolve_with(h, psi0, tau, steps, &EvolveOptions::default())
}

pub fn evolve_with<'a>(
    h: impl Into<Drive<'a>>,
    psi0: &QState,
    tau: f64,
    steps: usize,
    opts: &EvolveOptions,
) -> Result<EvolutionResult> {
    let drive = h.into();
    check_run(drive.dim(), psi0, tau, steps)?;
    let dt = tau / steps as f64;
    let state_stride = steps.div_ceil(opts.max_states.max(2) - 1).max(1);
    let ground_stride = if opts.ground_samples > 1 { steps.div_ceil(opts.ground_samples - 1).max(1) } else { 0 };
    let mut v = psi0.amps().clone();
    let mut traj = Trajectory { s: vec![0.0], states: vec![psi0.clone()] };
    let mut tracking = Vec::new();
    if ground_stride > 0 {
        tracking.push((0.0, ground_overlap(drive.base(), 0.0, &v)?));
    }
    let mut e_tau = 0.0;
    for k in 0..steps {
        let s_mid = (k as f64 + 0.5) / steps as f64;
        let hm = generator(&drive, s_mid)?;
        let before = v.clone();
        expi_apply(hm.matrix(), dt, &mut v);
        let h_psi0 = hm.matrix() * psi0.amps();
        e_tau += (h_psi0.dotc(&before) + h_psi0.dotc(&v)).norm() * 0.5;
        let node = k + 1;
        let s = node as f64 / steps as f64;
        let last = node == steps;
        if node % state_stride == 0 || last {
            let norm = v.norm();
            if (norm - 1.0).abs() > NORM_DRIFT_TOL {
                return Err(SalError::Invariant(format!("norm drifted to {norm} at s = {s}")));
            }
            traj.s.push(s);
            traj.states.push(QState::from_vector(v.clone())?);
        }
        if ground_stride > 0 && (node % ground_stride == 0 || last) {
            tracking.push((s, ground_overlap(drive.base(), s, &v)?));
        }
    }
    let final_state = traj.states.last().expect("final node recorded").clone();
    e_tau /= steps as f64;
    Ok(EvolutionResult { final_state, trajectory: traj, ground_tracking: tracking, tau, steps, e_tau })
}

/// Final states of a batched run with their speed-limit integrals.
#[derive(Clone, Debug)]
pub struct BatchOutcome {
    pub final_states: Vec<QState>,
    /// `∫₀¹ |<ψ_j(0)|H(s)|ψ_j(s)>| ds` per state, midpoint rule on the step grid.
    pub e_tau: Vec<f64>,
}

/// Evolves several initial states under the same generator, sharing the
/// Hamiltonian evaluations.
pub fn evolve_batch<'a>(h: impl Into<Drive<'a>>, psis: &[QState], tau: f64, steps: usize) -> Result<BatchOutcome> {
    let drive = h.into();
    for psi in psis {
        check_run(drive.dim(), psi, tau, steps)?;
    }
    let dim = drive.dim();
    let start = DMatrix::from_fn(dim, psis.len(), |i, j| psis[j].amp(i));
    let mut block = start.clone();
    let mut e_tau = vec![0.0; psis.len()];
    let dt = tau / steps as f64;
    for k in 0..steps {
        let hm = generator(&drive, (k as f64 + 0.5) / steps as f64)?;
        let before = block.clone();
        expi_apply_columns(hm.matrix(), dt, &mut block);
        let h_start = hm.matrix() * &start;
        for (j, acc) in e_tau.iter_mut().enumerate() {
            let mid = (before.column(j) + block.column(j)) * r(0.5);
            *acc += h_start.column(j).dotc(&mid).norm();
        }
    }
    let final_states = block
        .column_iter()
        .map(|col| {
            let norm = col.norm();
            if (norm - 1.0).abs() > NORM_DRIFT_TOL {
                return Err(SalError::Invariant(format!("norm drifted to {norm}")));
            }
            QState::from_vector(col.into_owned())
        })
        .collect::<Result<Vec<_>>>()?;
    e_tau.iter_mut().for_each(|e| *e /= steps as f64);
    Ok(BatchOutcome { final_states, e_tau })
}

/// One branch of an ancilla measurement.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub branch: u8,
    pub probability: f64,
    /// Renormalized system state; `None` when the branch has zero weight.
    pub post_state: Option<QState>,
}

/// Projective measurement of the last qubit in the computational basis.
pub fn measure_ancilla(joint: &QState) -> Result<Vec<MeasurementOutcome>> {
    if joint.num_qubits() < 2 {
        return Err(SalError::InvalidSpec("need a system qubit besides the ancilla".into()));
    }
    let half = joint.dim() / 2;
    (0..2u8)
        .map(|b| {
            let amps = DVector::from_fn(half, |i, _| joint.amp(2 * i + b as usize));
            let probability = amps.norm_squared();
            let post_state = if probability > 1e-14 { Some(QState::normalized(amps)?) } else { None };
            Ok(MeasurementOutcome { branch: b, probability, post_state })
        })
        .collect()
}

/// Protocols with analytic target states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Protocol {
    TeleportState,
    TeleportGate,
    Cae,
    Sce,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::TeleportState => "teleport-state",
            Protocol::TeleportGate => "teleport-gate",
            Protocol::Cae => "cae",
            Protocol::Sce => "sce",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = SalError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "teleport-state" | "teleport" => Ok(Protocol::TeleportState),
            "teleport-gate" => Ok(Protocol::TeleportGate),
            "cae" => Ok(Protocol::Cae),
            "sce" => Ok(Protocol::Sce),
            _ => Err(SalError::UnknownProtocol(s.to_string())),
        }
    }
}

/// Inputs for [`target_state`] and [`initial_state`].
#[derive(Clone, Copy, Debug)]
pub enum TargetInputs<'a> {
    /// `psi` on `n` qubits; `gate` (on `n` qubits) only for gate teleportation.
    Teleport { psi: &'a QState, gate: Option<&'a Operator> },
    /// `psi` on the system register (controls plus target).
    Controlled { spec: &'a ControlledSpec, psi: &'a QState },
}

fn mismatch(p: Protocol) -> SalError {
    SalError::InvalidSpec(format!("inputs do not fit protocol {p}"))
}

/// Exact final state of a protocol, up to a global phase.
pub fn target_state(protocol: Protocol, inputs: TargetInputs<'_>) -> Result<QState> {
    match (protocol, inputs) {
        (Protocol::TeleportState, TargetInputs::Teleport { psi, gate: None }) => {
            TeleportLayout::new(psi.num_qubits()).target_state(psi, None)
        }
        (Protocol::TeleportGate, TargetInputs::Teleport { psi, gate: Some(g) }) => {
            TeleportLayout::new(psi.num_qubits()).target_state(psi, Some(g))
        }
        (Protocol::Cae | Protocol::Sce, TargetInputs::Controlled { spec, psi }) => controlled_target(spec, psi),
        (p, _) => Err(mismatch(p)),
    }
}

/// Initial state matching [`target_state`].
pub fn initial_state(protocol: Protocol, inputs: TargetInputs<'_>) -> Result<QState> {
    match (protocol, inputs) {
        (Protocol::TeleportState, TargetInputs::Teleport { psi, gate: None }) => {
            TeleportLayout::new(psi.num_qubits()).initial_state(psi, None)
        }
        (Protocol::TeleportGate, TargetInputs::Teleport { psi, gate: Some(g) }) => {
            TeleportLayout::new(psi.num_qubits()).initial_state(psi, Some(g))
        }
        (Protocol::Cae | Protocol::Sce, TargetInputs::Controlled { spec, psi }) => {
            check_system(spec, psi)?;
            Ok(psi.kron(&QState::basis(1, 0)))
        }
        (p, _) => Err(mismatch(p)),
    }
}

fn check_system(spec: &ControlledSpec, psi: &QState) -> Result<()> {
    spec.validate()?;
    if psi.num_qubits() != spec.system_qubits() {
        return Err(SalError::DimensionMismatch { expected: spec.system_qubits(), found: psi.num_qubits() });
    }
    Ok(())
}

/// `cos(θ₀/2)|ψ>|0> + sin(θ₀/2) R|ψ>|1>` with `R = 1 - P + e^{iφ}P`.
fn controlled_target(spec: &ControlledSpec, psi: &QState) -> Result<QState> {
    check_system(spec, psi)?;
    let (sn, cs) = (spec.theta0 / 2.0).sin_cos();
    let rotated = spec.rotation_operator().apply_vec(psi.amps());
    let zero = QState::basis(1, 0);
    let one = QState::basis(1, 1);
    let amps = psi.amps().kronecker(zero.amps()) * r(cs) + rotated.kronecker(one.amps()) * r(sn);
    QState::from_vector(amps)
}

/// Success probability `sin²(θ₀/2)` of a controlled evolution.
pub fn success_probability(theta0: f64) -> f64 {
    (theta0 / 2.0).sin().powi(2)
}

/// θ₀ that removes the need for post-selection.
pub const DETERMINISTIC_THETA0: f64 = PI;
