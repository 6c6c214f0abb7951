//! Controlled evolutions: a target register selects, through a projector,
//! which of two ancilla Hamiltonians `H_0(s)` and `H_φ(s)` acts.

use std::sync::Arc;

use super::gates::sigma_dot;
use super::TimeDepHamiltonian;
use crate::error::{Result, SalError};
use crate::linalg::{kron, Operator, QState, C64};
use crate::schedules::AngleLaw;

/// Builder input for [`controlled_hamiltonian`] and its counter-diabatic
/// counterpart. The system register holds `n_controls` control qubits and
/// one target qubit; the ancilla is appended last.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlledSpec {
    pub n_controls: usize,
    pub axis: [f64; 3],
    pub phi: f64,
    pub theta0: f64,
    pub tau: f64,
    /// Basis index of the control register that activates the rotation.
    /// Defaults to all ones.
    pub activation: Option<usize>,
    pub omega: f64,
}

impl ControlledSpec {
    pub fn new(n_controls: usize, axis: [f64; 3], phi: f64, theta0: f64, tau: f64) -> Self {
        Self { n_controls, axis, phi, theta0, tau, activation: None, omega: 1.0 }
    }

    pub fn with_activation(mut self, index: usize) -> Self {
        self.activation = Some(index);
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
            return Err(SalError::InvalidSpec(format!("axis {:?} is not a unit vector", self.axis)));
        }
        AngleLaw::new(self.theta0)?;
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(SalError::InvalidSpec(format!("tau must be positive, got {}", self.tau)));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(SalError::InvalidSpec(format!("omega must be positive, got {}", self.omega)));
        }
        if !self.phi.is_finite() {
            return Err(SalError::InvalidSpec("phi must be finite".into()));
        }
        if let Some(l) = self.activation {
            if l >= 1 << self.n_controls {
                return Err(SalError::InvalidSpec(format!(
                    "activation index {l} out of range for {} control qubits",
                    self.n_controls
                )));
            }
        }
        Ok(())
    }

    pub fn activation_index(&self) -> usize {
        self.activation.unwrap_or((1 << self.n_controls) - 1)
    }

    /// Qubits in the system register (controls plus target).
    pub fn system_qubits(&self) -> usize {
        self.n_controls + 1
    }

    pub fn total_qubits(&self) -> usize {
        self.n_controls + 2
    }

    /// `|ℓ><ℓ| ⊗ (1 - n·σ)/2` on the system register.
    pub fn selection_projector(&self) -> Operator {
        let nc = 1usize << self.n_controls;
        let mut ctrl = vec![0.0; nc];
        ctrl[self.activation_index()] = 1.0;
        let minus = (&Operator::identity(2) - &sigma_dot(self.axis)).scale_real(0.5);
        kron(&Operator::diagonal(&ctrl), &minus)
    }

    /// `1 - P + e^{iφ} P`: the operation that lands on the ancilla-1 branch.
    pub fn rotation_operator(&self) -> Operator {
        let p = self.selection_projector();
        let id = Operator::identity(p.dim());
        let phase = C64::from_polar(1.0, self.phi) - C64::new(1.0, 0.0);
        &id + &p.scale(phase)
    }
}

/// `H_ξ(θ) = -ω [cos θ σ_z + sin θ (cos ξ σ_x + sin ξ σ_y)]`.
pub fn h_xi(omega: f64, theta: f64, xi: f64) -> Operator {
    let (st, ct) = theta.sin_cos();
    let (sx, cx) = xi.sin_cos();
    sigma_dot([st * cx, st * sx, ct]).scale_real(-omega)
}

/// `∂_s H_ξ` for `θ = θ₀ s`.
fn dh_xi(omega: f64, theta: f64, dtheta: f64, xi: f64) -> Operator {
    let (st, ct) = theta.sin_cos();
    let (sx, cx) = xi.sin_cos();
    sigma_dot([ct * cx, ct * sx, -st]).scale_real(-omega * dtheta)
}

/// Ground state `cos(θ/2)|0> + e^{iξ} sin(θ/2)|1>` of `H_ξ`, energy `-ω`.
pub fn xi_ground(theta: f64, xi: f64) -> QState {
    let (s, c) = (theta / 2.0).sin_cos();
    QState::new(vec![C64::new(c, 0.0), C64::from_polar(s, xi)]).expect("unit norm")
}

/// Excited state `-sin(θ/2)|0> + e^{iξ} cos(θ/2)|1>`, energy `+ω`.
pub fn xi_excited(theta: f64, xi: f64) -> QState {
    let (s, c) = (theta / 2.0).sin_cos();
    QState::new(vec![C64::new(-s, 0.0), C64::from_polar(c, xi)]).expect("unit norm")
}

/// `H(s) = (1 - P) ⊗ H_0(s) + P ⊗ H_φ(s)` with the ancilla last.
pub fn controlled_hamiltonian(spec: &ControlledSpec) -> Result<TimeDepHamiltonian> {
    spec.validate()?;
    let p = spec.selection_projector();
    let q = &Operator::identity(p.dim()) - &p;
    let dim = 2 * p.dim();
    let (omega, theta0, phi) = (spec.omega, spec.theta0, spec.phi);
    let (p1, q1) = (p.clone(), q.clone());
    let eval = Arc::new(move |s: f64| {
        let th = theta0 * s;
        &kron(&q1, &h_xi(omega, th, 0.0)) + &kron(&p1, &h_xi(omega, th, phi))
    });
    let deriv = Arc::new(move |s: f64| {
        let th = theta0 * s;
        &kron(&q, &dh_xi(omega, th, theta0, 0.0)) + &kron(&p, &dh_xi(omega, th, theta0, phi))
    });
    let half = dim / 2;
    let levels = Arc::new(move |_s: f64| {
        let mut v = vec![-omega; half];
        v.extend(std::iter::repeat(omega).take(half));
        v
    });
    Ok(TimeDepHamiltonian::new(dim, eval).with_derivative(deriv).with_levels(levels))
}
