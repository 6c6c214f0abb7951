//! Mean cost of repeat-until-success controlled gates and the θ₀ that
//! minimizes it.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SalError};
use crate::metrics::cost::single_gate_cost;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Adiabatic,
    Superadiabatic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Adiabatic => "adiabatic",
            Mode::Superadiabatic => "superadiabatic",
        })
    }
}

impl FromStr for Mode {
    type Err = SalError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "adiabatic" | "ad" => Ok(Mode::Adiabatic),
            "superadiabatic" | "sa" => Ok(Mode::Superadiabatic),
            other => Err(SalError::InvalidSpec(format!("unknown mode `{other}`"))),
        }
    }
}

/// Mean cost `Σ(θ₀, τ) / sin²(θ₀/2)` of a single-qubit gate repeated until
/// the ancilla reads 1. In adiabatic mode `τ` is ignored.
pub fn probabilistic_cost(theta0: f64, tau: f64, mode: Mode, omega: f64) -> Result<f64> {
    if !(theta0 > 0.0 && theta0 <= PI) {
        return Err(SalError::InvalidSpec(format!("theta0 must lie in (0, pi], got {theta0}")));
    }
    let per_run = match mode {
        Mode::Adiabatic => 2.0 * omega,
        Mode::Superadiabatic => {
            if !(tau > 0.0) {
                return Err(SalError::InvalidSpec(format!("tau must be positive, got {tau}")));
            }
            single_gate_cost(omega, theta0, tau)
        }
    };
    Ok(per_run / (theta0 / 2.0).sin().powi(2))
}

/// Stationarity residual `θ - (4(ωτ)² + θ²) cot(θ/2)`; its zero on `(0, π]`
/// is the minimizer.
pub fn stationarity_residual(theta: f64, omega_tau: f64) -> f64 {
    theta - (4.0 * omega_tau * omega_tau + theta * theta) / (theta / 2.0).tan()
}

/// Necessary condition `tan(θ/2) ≥ θ` for a real `ωτ`.
pub fn is_feasible(theta: f64) -> bool {
    theta >= PI || (theta / 2.0).tan() >= theta
}

/// Smallest θ with `tan(θ/2) ≥ θ`: a 1e-4 scan locates the sign change,
/// bisection then refines it to machine precision.
pub fn feasible_onset() -> f64 {
    let f = |t: f64| (t / 2.0).tan() - t;
    let step = 1e-4;
    let mut lo = 1.0;
    while f(lo + step) < 0.0 {
        lo += step;
    }
    bisect(f, lo, lo + step)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == (f_lo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `ωτ` implied by a minimizer: `(√θ/2) √(tan(θ/2) - θ)`.
pub fn omega_tau_of(theta_min: f64) -> f64 {
    theta_min.sqrt() / 2.0 * ((theta_min / 2.0).tan() - theta_min).max(0.0).sqrt()
}

/// θ₀ minimizing the superadiabatic mean cost at fixed `ωτ`.
///
/// The residual is negative at the feasible onset and equals `π` at `θ = π`,
/// so bisection on that bracket converges to the unique root.
pub fn theta_opt(omega_tau: f64) -> Result<f64> {
    if !(omega_tau > 0.0 && omega_tau.is_finite()) {
        return Err(SalError::InvalidSpec(format!("omega*tau must be positive, got {omega_tau}")));
    }
    Ok(bisect(|t| stationarity_residual(t, omega_tau), feasible_onset(), PI))
}

/// The adiabatic mean cost `2ω csc²(θ₀/2)` decreases on `(0, π]`; its only
/// critical point is the endpoint.
pub const ADIABATIC_THETA_OPT: f64 = PI;
