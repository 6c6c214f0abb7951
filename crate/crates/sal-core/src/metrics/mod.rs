//! Energy costs, the quantum speed limit and the probabilistic θ₀ optimizer.

pub mod cost;
pub mod probabilistic;
pub mod qsl;

pub use cost::{
    adiabatic_controlled_cost, adiabatic_cost_from_levels, controlled_gate_cost, energy_cost, simpson,
    single_gate_cost, superadiabatic_cost, teleport_scaling, CostReport, CostSample,
};
pub use probabilistic::{probabilistic_cost, stationarity_residual, theta_opt, Mode};
pub use qsl::{qsl_check, speed_limit_chi, ChiReport, QslReport};
