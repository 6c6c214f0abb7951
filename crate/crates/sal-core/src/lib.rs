//! Counter-diabatic ("superadiabatic") driving of adiabatic teleportation and
//! controlled evolutions, with energy-cost and speed-limit diagnostics.
//!
//! Units: `ħ = 1`. Every builder takes the frequency `ω` explicitly (default
//! 1), so times are naturally reported as `ωτ`.

pub mod counterdiabatic;
pub mod dynamics;
pub mod error;
pub mod hamiltonians;
pub mod linalg;
pub mod metrics;
pub mod schedules;

pub use error::{Result, SalError};
pub use linalg::{eigh, fidelity, kron, propagate_step, Eigh, Operator, QState, C64};
pub use schedules::{make_schedule, AngleLaw, Family, Schedule};

pub use counterdiabatic::{cd_controlled, cd_generic, cd_teleport, cd_teleport_block, SpectralFrame, SuperadiabaticHamiltonian};
pub use dynamics::{evolve, evolve_batch, BatchOutcome, Drive, EvolutionResult, Protocol};
