//! Energy cost `Σ = ∫₀¹ ‖H(s)‖ ds` with the Hilbert-Schmidt norm, plus the
//! closed forms it reduces to for the built protocols.

use crate::counterdiabatic::SpectralFrame;
use crate::error::{Result, SalError};
use crate::hamiltonians::grid;
use crate::linalg::Operator;

/// Default number of quadrature nodes.
pub const DEFAULT_GRID: usize = 2001;
/// Smallest grid accepted by [`energy_cost`].
pub const MIN_GRID: usize = 101;

/// Composite Simpson rule on uniformly spaced samples with spacing `h`.
/// An even sample count closes with the 3/8 rule on the last four nodes.
pub fn simpson(values: &[f64], h: f64) -> Result<f64> {
    let n = values.len();
    if n < 4 {
        return Err(SalError::InvalidSpec(format!("Simpson quadrature needs at least 4 nodes, got {n}")));
    }
    let (head, tail) = if n % 2 == 1 { (n, 0.0) } else { (n - 3, three_eighths(&values[n - 4..], h)) };
    let mut acc = values[0] + values[head - 1];
    for (k, v) in values[1..head - 1].iter().enumerate() {
        acc += if k % 2 == 0 { 4.0 * v } else { 2.0 * v };
    }
    Ok(acc * h / 3.0 + tail)
}

fn three_eighths(v: &[f64], h: f64) -> f64 {
    3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3])
}

fn check_grid(points: usize) -> Result<()> {
    if points < MIN_GRID {
        return Err(SalError::InvalidSpec(format!("cost grid needs at least {MIN_GRID} nodes, got {points}")));
    }
    Ok(())
}

/// `∫₀¹ ‖H(s)‖_HS ds` by Simpson on `points` nodes. Samples must be Hermitian.
pub fn energy_cost(h: impl Fn(f64) -> Operator, points: usize) -> Result<f64> {
    check_grid(points)?;
    let samples = grid(points)
        .map(|s| {
            let op = h(s);
            if !op.is_hermitian() {
                return Err(SalError::NotHermitian(op.hermiticity_error()));
            }
            Ok(op.hs_norm())
        })
        .collect::<Result<Vec<_>>>()?;
    simpson(&samples, 1.0 / (points - 1) as f64)
}

/// `∫₀¹ √(Σ_m ε_m(s)²) ds` from a level function.
pub fn adiabatic_cost_from_levels(levels: impl Fn(f64) -> Vec<f64>, points: usize) -> Result<f64> {
    check_grid(points)?;
    let samples: Vec<f64> = grid(points).map(|s| levels(s).iter().map(|e| e * e).sum::<f64>().sqrt()).collect();
    simpson(&samples, 1.0 / (points - 1) as f64)
}

/// Integrands of both costs at one node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostSample {
    pub s: f64,
    pub adiabatic: f64,
    pub superadiabatic: f64,
}

#[derive(Clone, Debug)]
pub struct CostReport {
    pub sigma_ad: f64,
    pub sigma_sa: f64,
    pub tau: f64,
    pub breakdown: Vec<CostSample>,
}

impl CostReport {
    pub fn ratio(&self) -> f64 {
        self.sigma_sa / self.sigma_ad
    }
}

/// `Σ_SA(τ) = ∫₀¹ √(Σ_m [ε_m² + μ_m/τ²]) ds` on the frame grid, next to
/// `Σ_Ad = ∫₀¹ √(Σ_m ε_m²) ds`.
pub fn superadiabatic_cost(frame: &SpectralFrame, tau: f64) -> Result<CostReport> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(SalError::InvalidSpec(format!("tau must be positive, got {tau}")));
    }
    check_grid(frame.len())?;
    let breakdown: Vec<CostSample> = (0..frame.len())
        .map(|j| {
            let e2: f64 = frame.energies(j).iter().map(|e| e * e).sum();
            let mu: f64 = frame.mu(j).iter().sum();
            CostSample { s: frame.grid()[j], adiabatic: e2.sqrt(), superadiabatic: (e2 + mu / (tau * tau)).sqrt() }
        })
        .collect();
    let ad: Vec<f64> = breakdown.iter().map(|c| c.adiabatic).collect();
    let sa: Vec<f64> = breakdown.iter().map(|c| c.superadiabatic).collect();
    let h = frame.step();
    Ok(CostReport { sigma_ad: simpson(&ad, h)?, sigma_sa: simpson(&sa, h)?, tau, breakdown })
}

/// Single controlled gate: `2ω √(1 + (θ₀/(2ωτ))²)`.
pub fn single_gate_cost(omega: f64, theta0: f64, tau: f64) -> f64 {
    2.0 * omega * (theta0 / (2.0 * omega * tau)).hypot(1.0)
}

/// Gate controlled by `n_controls` qubits: `√(2^n)` times the single-gate cost.
pub fn controlled_gate_cost(n_controls: usize, omega: f64, theta0: f64, tau: f64) -> f64 {
    controlled_scaling(n_controls) * single_gate_cost(omega, theta0, tau)
}

/// Adiabatic limit of [`controlled_gate_cost`]: `√(2^n)·2ω`.
pub fn adiabatic_controlled_cost(n_controls: usize, omega: f64) -> f64 {
    controlled_scaling(n_controls) * 2.0 * omega
}

/// `√(2^n)`.
pub fn controlled_scaling(n_controls: usize) -> f64 {
    2f64.powi(n_controls as i32).sqrt()
}

/// One teleport sector from one of its two identical parity blocks: `√2·Σ⁺`.
pub fn sector_cost_from_block(block_cost: f64) -> f64 {
    2f64.sqrt() * block_cost
}

/// `√(2^{3(n-1)} n)`: cost of `n` sectors relative to a single one.
pub fn teleport_scaling(n_sectors: usize) -> f64 {
    let n = n_sectors as f64;
    (2f64.powf(3.0 * (n - 1.0)) * n).sqrt()
}
