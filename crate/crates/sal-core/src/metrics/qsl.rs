//! Speed-limit bookkeeping for closed evolutions.

use crate::dynamics::{Drive, EvolutionResult, Trajectory};
use crate::error::{Result, SalError};
use crate::linalg::QState;

/// Slack on `τ ≥ bound`.
pub const QSL_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QslReport {
    pub tau: f64,
    /// `arccos |<ψ(0)|ψ(τ)>|`.
    pub bures_angle: f64,
    /// `∫₀¹ |<ψ(0)|H(s)|ψ(s)>| ds`.
    pub e_tau: f64,
    /// `|cos L - 1| / E_τ`; zero when the numerator vanishes.
    pub bound: f64,
    pub satisfied: bool,
}

impl QslReport {
    pub fn new(tau: f64, psi0: &QState, psi_final: &QState, e_tau: f64) -> Result<Self> {
        let overlap = psi0.inner(psi_final).norm().min(1.0);
        let bures_angle = overlap.acos();
        let numerator = (overlap - 1.0).abs();
        let bound = if numerator == 0.0 {
            0.0
        } else if e_tau > 0.0 {
            numerator / e_tau
        } else {
            f64::INFINITY
        };
        if psi0.dim() != psi_final.dim() {
            return Err(SalError::DimensionMismatch { expected: psi0.dim(), found: psi_final.dim() });
        }
        Ok(Self { tau, bures_angle, e_tau, bound, satisfied: tau >= bound - QSL_SLACK })
    }

    /// Uses the `E_τ` accumulated by the propagator.
    pub fn from_evolution(result: &EvolutionResult) -> Result<Self> {
        let psi0 = result.trajectory.states.first().expect("initial state recorded");
        Self::new(result.tau, psi0, &result.final_state, result.e_tau)
    }
}

/// Speed-limit check from a recorded trajectory, integrating
/// `|<ψ(0)|H(s)|ψ(s)>|` over the stored nodes with the trapezoid rule.
pub fn qsl_check<'a>(h: impl Into<Drive<'a>>, trajectory: &Trajectory, tau: f64) -> Result<QslReport> {
    let drive = h.into();
    let (s, states) = (&trajectory.s, &trajectory.states);
    if states.len() < 2 || s.len() != states.len() {
        return Err(SalError::InvalidSpec("trajectory needs at least two recorded nodes".into()));
    }
    let psi0 = &states[0];
    let f: Vec<f64> = s
        .iter()
        .zip(states)
        .map(|(&sj, psi)| psi0.amps().dotc(&drive.at(sj).apply_vec(psi.amps())).norm())
        .collect();
    let e_tau = (1..f.len()).map(|j| 0.5 * (f[j] + f[j - 1]) * (s[j] - s[j - 1])).sum();
    QslReport::new(tau, psi0, states.last().expect("non-empty"), e_tau)
}

/// The pieces `η₂`, `η₃` of the bound on `E_τ` along a curve of states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiReport {
    pub eta2: f64,
    pub eta3: f64,
    /// `η₂ + η₃`.
    pub chi: f64,
    /// `|cos L(ψ(0), ψ(1)) - 1|`.
    pub bures_term: f64,
}

impl ChiReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.chi >= self.bures_term - tol
    }
}

/// `η₂ = ∫|<E(0)|∂E(s)>| ds` and `η₃ = ∫|<E(s)|∂E(s)><E(0)|E(s)>| ds` for
/// the curve `E(s_j) = states[j]`, using first differences between nodes.
/// The curve's phase is first made smooth by a discrete parallel transport,
/// so any trajectory (including dynamical phases) can be passed in.
pub fn speed_limit_chi(states: &[QState]) -> Result<ChiReport> {
    if states.len() < 2 {
        return Err(SalError::InvalidSpec("need at least two states".into()));
    }
    let mut curve = vec![states[0].amps().clone()];
    for psi in &states[1..] {
        let prev = curve.last().expect("non-empty");
        let ov = prev.dotc(psi.amps());
        let phase = if ov.norm() > 0.0 { ov.conj() / ov.norm() } else { crate::linalg::r(1.0) };
        curve.push(psi.amps() * phase);
    }
    let e0 = &curve[0];
    let (mut eta2, mut eta3) = (0.0, 0.0);
    for w in curve.windows(2) {
        let d = &w[1] - &w[0];
        let mid = (&w[1] + &w[0]) * crate::linalg::r(0.5);
        eta2 += e0.dotc(&d).norm();
        eta3 += (mid.dotc(&d) * e0.dotc(&mid)).norm();
    }
    let bures_term = (e0.dotc(curve.last().expect("non-empty")).norm() - 1.0).abs();
    Ok(ChiReport { eta2, eta3, chi: eta2 + eta3, bures_term })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, r};

    #[test]
    fn stationary_state_has_zero_bound() {
        let psi = QState::basis(1, 0);
        let rep = QslReport::new(1.0, &psi, &psi, 0.0).unwrap();
        assert_eq!(rep.bound, 0.0);
        assert!(rep.satisfied);
    }

    #[test]
    fn chi_on_a_great_circle() {
        let states: Vec<QState> = (0..=400)
            .map(|k| {
                let t = k as f64 / 400.0 * std::f64::consts::FRAC_PI_2;
                QState::new(vec![r(t.cos()), c(0.0, t.sin())]).unwrap()
            })
            .collect();
        let rep = speed_limit_chi(&states).unwrap();
        assert!((rep.bures_term - 1.0).abs() < 1e-15);
        assert!(rep.holds(1e-6));
    }
}
