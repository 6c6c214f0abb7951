//! Counter-diabatic terms `H_CD` and superadiabatic Hamiltonians
//! `H_SA = H + H_CD`.

pub mod frame;
pub mod teleport_block;

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SalError};
use crate::hamiltonians::controlled::{controlled_hamiltonian, ControlledSpec};
use crate::hamiltonians::gates::{pauli_x, pauli_y};
use crate::hamiltonians::teleport::{teleport_hamiltonian, TeleportSpec};
use crate::hamiltonians::{OpFn, TimeDepHamiltonian};
use crate::linalg::{embed, kron, Operator};
use crate::schedules::Schedule;

pub use frame::SpectralFrame;

/// A base Hamiltonian together with its counter-diabatic term at runtime `τ`.
#[derive(Clone)]
pub struct SuperadiabaticHamiltonian {
    base: TimeDepHamiltonian,
    cd: OpFn,
    tau: f64,
    /// Grid size when the CD term is interpolated from a sampled frame.
    grid: Option<usize>,
}

impl fmt::Debug for SuperadiabaticHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SuperadiabaticHamiltonian")
            .field("base", &self.base)
            .field("tau", &self.tau)
            .field("grid", &self.grid)
            .finish()
    }
}

impl SuperadiabaticHamiltonian {
    pub fn new(base: TimeDepHamiltonian, cd: OpFn, tau: f64, grid: Option<usize>) -> Result<Self> {
        check_tau(tau)?;
        Ok(Self { base, cd, tau, grid })
    }

    pub fn base(&self) -> &TimeDepHamiltonian {
        &self.base
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn grid(&self) -> Option<usize> {
        self.grid
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn cd_at(&self, s: f64) -> Operator {
        (self.cd)(s)
    }

    /// `H(s) + H_CD(s)`.
    pub fn at(&self, s: f64) -> Operator {
        &self.base.at(s) + &self.cd_at(s)
    }

    /// The total generator as a plain time-dependent Hamiltonian.
    pub fn total(&self) -> TimeDepHamiltonian {
        let (base, cd) = (self.base.evaluator(), self.cd.clone());
        TimeDepHamiltonian::new(self.dim(), Arc::new(move |s| &base(s) + &cd(s)))
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(SalError::InvalidSpec(format!("tau must be positive, got {tau}")))
    }
}

/// Linear interpolation between node operators on a uniform grid.
fn interpolated(nodes: Vec<Operator>) -> OpFn {
    let n = nodes.len();
    Arc::new(move |s: f64| {
        let x = s.clamp(0.0, 1.0) * (n - 1) as f64;
        let j = (x.floor() as usize).min(n - 2);
        let t = x - j as f64;
        &nodes[j].scale_real(1.0 - t) + &nodes[j + 1].scale_real(t)
    })
}

/// Generic construction from a numerically diagonalized, gauge-fixed frame.
///
/// Degenerate levels are treated as clusters, which yields the
/// basis-independent form `(i/2τ) Σ_c [∂_s P_c, P_c]`. The term is stored on
/// the grid and linearly interpolated in between.
pub fn cd_generic(h: &TimeDepHamiltonian, tau: f64, points: usize) -> Result<SuperadiabaticHamiltonian> {
    check_tau(tau)?;
    let frame = SpectralFrame::build(h, points)?;
    cd_from_frame(h.clone(), &frame, tau)
}

/// Same as [`cd_generic`] with a frame the caller already has.
pub fn cd_from_frame(h: TimeDepHamiltonian, frame: &SpectralFrame, tau: f64) -> Result<SuperadiabaticHamiltonian> {
    check_tau(tau)?;
    if frame.dim() != h.dim() {
        return Err(SalError::DimensionMismatch { expected: h.dim(), found: frame.dim() });
    }
    let nodes = (0..frame.len())
        .map(|j| Operator::hermitian(frame.cd_at_node(j, tau)))
        .collect::<Result<Vec<_>>>()?;
    SuperadiabaticHamiltonian::new(h, interpolated(nodes), tau, Some(frame.len()))
}

/// Single teleport sector with the closed-form blockwise CD term.
pub fn cd_teleport_block(schedule: Schedule, tau: f64, omega: f64) -> Result<SuperadiabaticHamiltonian> {
    check_tau(tau)?;
    let base = teleport_hamiltonian(&TeleportSpec::new(1, schedule).with_omega(omega))?;
    let cd = Arc::new(move |s: f64| teleport_block::sector_cd(&schedule, tau, s));
    SuperadiabaticHamiltonian::new(base, cd, tau, None)
}

/// `n`-sector teleport with optional gate: blockwise CD per sector, summed
/// over sectors, then rotated by the gate on Bob's qubits.
pub fn cd_teleport(spec: &TeleportSpec, tau: f64) -> Result<SuperadiabaticHamiltonian> {
    spec.validate()?;
    let block = cd_teleport_block(spec.schedule, tau, spec.omega)?;
    let mut sa = if spec.n_sectors == 1 { block } else { cd_tensor_sum(&vec![block; spec.n_sectors])? };
    if let Some(g) = spec.lifted_gate()? {
        sa = cd_rotate(&sa, &g)?;
    }
    Ok(sa)
}

/// `G H_SA(s) G^dag` for a constant unitary `G`.
pub fn cd_rotate(hsa: &SuperadiabaticHamiltonian, g: &Operator) -> Result<SuperadiabaticHamiltonian> {
    if g.dim() != hsa.dim() {
        return Err(SalError::DimensionMismatch { expected: hsa.dim(), found: g.dim() });
    }
    let err = g.unitarity_error();
    if err > 1e-10 {
        return Err(SalError::NotUnitary(err));
    }
    let base = hsa.base.conjugated(g)?;
    let (cd, g) = (hsa.cd.clone(), g.clone());
    let rotated = Arc::new(move |s: f64| cd(s).conjugate_by(&g).expect("dims checked"));
    SuperadiabaticHamiltonian::new(base, rotated, hsa.tau, hsa.grid)
}

/// `Σ_k 1⊗…⊗H_SA^k⊗…⊗1`, blocks on consecutive qubit ranges.
pub fn cd_tensor_sum(blocks: &[SuperadiabaticHamiltonian]) -> Result<SuperadiabaticHamiltonian> {
    let first = blocks.first().ok_or_else(|| SalError::InvalidSpec("no blocks to combine".into()))?;
    let mut ranges = Vec::new();
    let mut total = 0;
    for b in blocks {
        if (b.tau - first.tau).abs() > 1e-12 * first.tau || b.grid != first.grid {
            return Err(SalError::GridMismatch(
                format!("tau={} grid={:?}", first.tau, first.grid),
                format!("tau={} grid={:?}", b.tau, b.grid),
            ));
        }
        let q = b.dim().trailing_zeros() as usize;
        if 1 << q != b.dim() {
            return Err(SalError::InvalidSpec("block dimension is not a power of two".into()));
        }
        ranges.push((total..total + q).collect::<Vec<_>>());
        total += q;
    }
    let lift = |fs: Vec<OpFn>, ranges: Vec<Vec<usize>>| -> OpFn {
        Arc::new(move |s: f64| {
            let mut acc = Operator::zeros(1 << total);
            for (f, q) in fs.iter().zip(&ranges) {
                acc = &acc + &embed(&f(s), q, total).expect("ranges checked");
            }
            acc
        })
    };
    let bases: Vec<OpFn> = blocks.iter().map(|b| b.base.evaluator()).collect();
    let mut base = TimeDepHamiltonian::new(1 << total, lift(bases, ranges.clone()));
    if blocks.iter().all(|b| b.base.has_analytic_derivative()) {
        let derivs: Vec<OpFn> = blocks
            .iter()
            .map(|b| {
                let h = b.base.clone();
                Arc::new(move |s: f64| h.derivative(s)) as OpFn
            })
            .collect();
        base = base.with_derivative(lift(derivs, ranges.clone()));
    }
    let cds: Vec<OpFn> = blocks.iter().map(|b| b.cd.clone()).collect();
    SuperadiabaticHamiltonian::new(base, lift(cds, ranges), first.tau, first.grid)
}

/// Closed-form CD of `H_ξ` with `θ = θ₀ s`: `(θ₀/2τ)(σ_y cos ξ - σ_x sin ξ)`.
pub fn cd_xi(theta0: f64, tau: f64, xi: f64) -> Operator {
    let (sx, cx) = xi.sin_cos();
    (&pauli_y().scale_real(cx) - &pauli_x().scale_real(sx)).scale_real(theta0 / (2.0 * tau))
}

/// Controlled evolution with its time-independent CD term.
pub fn cd_controlled(spec: &ControlledSpec) -> Result<SuperadiabaticHamiltonian> {
    let base = controlled_hamiltonian(spec)?;
    let p = spec.selection_projector();
    let q = &Operator::identity(p.dim()) - &p;
    let cd = &kron(&q, &cd_xi(spec.theta0, spec.tau, 0.0)) + &kron(&p, &cd_xi(spec.theta0, spec.tau, spec.phi));
    SuperadiabaticHamiltonian::new(base, Arc::new(move |_| cd.clone()), spec.tau, None)
}
