//! Teleportation Hamiltonians on `n` sectors of three qubits.
//!
//! Sector `k` occupies qubits `3k` (data), `3k+1` (Alice's channel half) and
//! `3k+2` (Bob's channel half). Each sector is driven by
//! `eta_i(s) H_ini + eta_f(s) H_fin` with `H_ini = -ω 1⊗(ZZ+XX)` on the channel
//! pair and `H_fin = -ω (ZZ+XX)⊗1` on data and Alice's qubit.

use std::sync::Arc;

use nalgebra::DVector;

use super::gates::{pauli_x, pauli_z};
use super::TimeDepHamiltonian;
use crate::error::{Result, SalError};
use crate::linalg::{embed, kron_all, r, Operator, QState};
use crate::schedules::Schedule;

/// Even-parity block basis `{000, 011, 101, 110}`.
pub const PLUS_BLOCK: [usize; 4] = [0b000, 0b011, 0b101, 0b110];
/// Odd-parity block basis, the `XXX` images of [`PLUS_BLOCK`] in the same order.
pub const MINUS_BLOCK: [usize; 4] = [0b111, 0b100, 0b010, 0b001];

/// Computational indices of the parity-ordered basis (even block first).
pub fn parity_basis_order() -> [usize; 8] {
    let mut out = [0; 8];
    out[..4].copy_from_slice(&PLUS_BLOCK);
    out[4..].copy_from_slice(&MINUS_BLOCK);
    out
}

/// Qubit bookkeeping for `n` teleport sectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TeleportLayout {
    pub n_sectors: usize,
}

impl TeleportLayout {
    pub fn new(n_sectors: usize) -> Self {
        Self { n_sectors }
    }

    pub fn num_qubits(&self) -> usize {
        3 * self.n_sectors
    }

    pub fn data(&self, k: usize) -> usize {
        3 * k
    }

    pub fn alice(&self, k: usize) -> usize {
        3 * k + 1
    }

    pub fn bob(&self, k: usize) -> usize {
        3 * k + 2
    }

    pub fn sector(&self, k: usize) -> [usize; 3] {
        [self.data(k), self.alice(k), self.bob(k)]
    }

    pub fn data_qubits(&self) -> Vec<usize> {
        (0..self.n_sectors).map(|k| self.data(k)).collect()
    }

    pub fn alice_qubits(&self) -> Vec<usize> {
        (0..self.n_sectors).map(|k| self.alice(k)).collect()
    }

    pub fn bob_qubits(&self) -> Vec<usize> {
        (0..self.n_sectors).map(|k| self.bob(k)).collect()
    }

    /// `|ψ>` on the data qubits, `(1 ⊗ U)|Φ_n>` on the channel pairs.
    pub fn initial_state(&self, psi: &QState, gate: Option<&Operator>) -> Result<QState> {
        let n = self.n_sectors;
        check_input(psi, n)?;
        let mut channel = max_entangled(n);
        if let Some(u) = gate {
            check_gate(u, n)?;
            let lifted = embed(u, &(n..2 * n).collect::<Vec<_>>(), 2 * n)?;
            channel = channel.evolve_by(&lifted)?;
        }
        let pair_qubits: Vec<usize> = self.alice_qubits().into_iter().chain(self.bob_qubits()).collect();
        QState::place(&[(psi, &self.data_qubits()), (&channel, &pair_qubits)], self.num_qubits())
    }

    /// `|Φ_n>` on data/Alice pairs, `U|ψ>` on Bob's qubits.
    pub fn target_state(&self, psi: &QState, gate: Option<&Operator>) -> Result<QState> {
        let n = self.n_sectors;
        check_input(psi, n)?;
        let moved = match gate {
            Some(u) => {
                check_gate(u, n)?;
                psi.evolve_by(u)?
            }
            None => psi.clone(),
        };
        let pair_qubits: Vec<usize> = self.data_qubits().into_iter().chain(self.alice_qubits()).collect();
        QState::place(&[(&max_entangled(n), &pair_qubits), (&moved, &self.bob_qubits())], self.num_qubits())
    }
}

fn check_input(psi: &QState, n: usize) -> Result<()> {
    if psi.num_qubits() != n {
        return Err(SalError::DimensionMismatch { expected: n, found: psi.num_qubits() });
    }
    Ok(())
}

fn check_gate(u: &Operator, n: usize) -> Result<()> {
    if u.dim() != 1 << n {
        return Err(SalError::DimensionMismatch { expected: 1 << n, found: u.dim() });
    }
    let err = u.unitarity_error();
    if err > 1e-10 {
        return Err(SalError::NotUnitary(err));
    }
    Ok(())
}

/// `Σ_x |x>|x> / √(2^n)` on `2n` qubits, i.e. `|β00>^{⊗n}` with all first
/// halves leading.
fn max_entangled(n: usize) -> QState {
    let d = 1usize << n;
    let mut amps = DVector::zeros(d * d);
    let a = r(1.0 / (d as f64).sqrt());
    for x in 0..d {
        amps[x * d + x] = a;
    }
    QState::from_vector(amps).expect("normalized by construction")
}

/// Builder input for [`teleport_hamiltonian`].
#[derive(Clone, Debug)]
pub struct TeleportSpec {
    pub n_sectors: usize,
    pub schedule: Schedule,
    pub gate: Option<Operator>,
    pub omega: f64,
}

impl TeleportSpec {
    pub fn new(n_sectors: usize, schedule: Schedule) -> Self {
        Self { n_sectors, schedule, gate: None, omega: 1.0 }
    }

    pub fn with_gate(mut self, gate: Operator) -> Self {
        self.gate = Some(gate);
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn layout(&self) -> TeleportLayout {
        TeleportLayout::new(self.n_sectors)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sectors == 0 {
            return Err(SalError::InvalidSpec("at least one teleport sector is required".into()));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(SalError::InvalidSpec(format!("omega must be positive, got {}", self.omega)));
        }
        if let Some(u) = &self.gate {
            check_gate(u, self.n_sectors)?;
        }
        Ok(())
    }

    /// The gate lifted to the full register (acting on Bob's qubits).
    pub fn lifted_gate(&self) -> Result<Option<Operator>> {
        let layout = self.layout();
        self.gate.as_ref().map(|u| embed(u, &layout.bob_qubits(), layout.num_qubits())).transpose()
    }
}

/// `ZZ + XX` on two qubits.
fn zz_plus_xx() -> Operator {
    let (x, z) = (pauli_x(), pauli_z());
    &kron_all(&[&z, &z]) + &kron_all(&[&x, &x])
}

/// `(H_ini, H_fin)` of one sector on three qubits.
pub fn sector_terms(omega: f64) -> (Operator, Operator) {
    let pair = zz_plus_xx().scale_real(-omega);
    let id = Operator::identity(2);
    (kron_all(&[&id, &pair]), kron_all(&[&pair, &id]))
}

/// One parity block of a sector Hamiltonian in the basis [`PLUS_BLOCK`].
pub fn block_hamiltonian(eta_i: f64, eta_f: f64, omega: f64) -> Operator {
    let (a, b) = (eta_i, eta_f);
    Operator::from_real_rows(&[
        vec![a + b, a, 0.0, b],
        vec![a, a - b, b, 0.0],
        vec![0.0, b, -a - b, a],
        vec![b, 0.0, a, b - a],
    ])
    .expect("4x4")
    .scale_real(-omega)
}

/// Closed-form spectrum of `n` sectors: every sum of single-sector levels
/// `{-2χ, -2χ, 0, 0, 0, 0, 2χ, 2χ}·ω`.
pub fn teleport_levels(chi: f64, omega: f64, n_sectors: usize) -> Vec<f64> {
    let single = [-2.0, -2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 2.0].map(|x| x * chi * omega);
    let mut levels = vec![0.0];
    for _ in 0..n_sectors {
        levels = levels.iter().flat_map(|&acc| single.iter().map(move |&e| acc + e)).collect();
    }
    levels.sort_by(f64::total_cmp);
    levels
}

/// Ground gap `2ωχ(s)`; the same for every sector count.
pub fn teleport_gap(schedule: &Schedule, omega: f64, s: f64) -> f64 {
    2.0 * omega * schedule.chi(s)
}

/// Builds `H(s)` for `n` sectors, conjugated by the gate on Bob's qubits when
/// one is given.
pub fn teleport_hamiltonian(spec: &TeleportSpec) -> Result<TimeDepHamiltonian> {
    spec.validate()?;
    let layout = spec.layout();
    let total = layout.num_qubits();
    let (h_ini, h_fin) = sector_terms(spec.omega);
    let mut a = Operator::zeros(1 << total);
    let mut b = Operator::zeros(1 << total);
    for k in 0..spec.n_sectors {
        let q = layout.sector(k);
        a = &a + &embed(&h_ini, &q, total)?;
        b = &b + &embed(&h_fin, &q, total)?;
    }
    if let Some(g) = spec.lifted_gate()? {
        a = a.conjugate_by(&g)?;
        b = b.conjugate_by(&g)?;
    }
    let dim = a.dim();
    let schedule = spec.schedule;
    let (a1, b1) = (a.clone(), b.clone());
    let eval = Arc::new(move |s: f64| {
        let v = schedule.eval(s);
        &a1.scale_real(v.eta_i) + &b1.scale_real(v.eta_f)
    });
    let deriv = Arc::new(move |s: f64| {
        let v = schedule.eval(s);
        &a.scale_real(v.d_eta_i) + &b.scale_real(v.d_eta_f)
    });
    let (omega, n) = (spec.omega, spec.n_sectors);
    let levels = Arc::new(move |s: f64| teleport_levels(schedule.chi(s), omega, n));
    Ok(TimeDepHamiltonian::new(dim, eval).with_derivative(deriv).with_levels(levels))
}

/// Parity symmetries of the teleport Hamiltonian.
#[derive(Clone, Debug)]
pub struct ParityOperators {
    /// `⊗ ZZZ` over all sectors.
    pub pi_z: Operator,
    /// `⊗ XXX` over all sectors.
    pub pi_x: Operator,
    /// `ZZZ` of each sector, lifted to the full register.
    pub sector_z: Vec<Operator>,
    /// `XXX` of each sector, lifted to the full register.
    pub sector_x: Vec<Operator>,
}

pub fn parity_operators(n_sectors: usize) -> Result<ParityOperators> {
    if n_sectors == 0 {
        return Err(SalError::InvalidSpec("at least one teleport sector is required".into()));
    }
    let layout = TeleportLayout::new(n_sectors);
    let total = layout.num_qubits();
    let (x, z) = (pauli_x(), pauli_z());
    let zzz = kron_all(&[&z, &z, &z]);
    let xxx = kron_all(&[&x, &x, &x]);
    let mut sector_z = Vec::new();
    let mut sector_x = Vec::new();
    let mut pi_z = Operator::identity(1 << total);
    let mut pi_x = Operator::identity(1 << total);
    for k in 0..n_sectors {
        let q = layout.sector(k);
        let sz = embed(&zzz, &q, total)?;
        let sx = embed(&xxx, &q, total)?;
        pi_z = Operator::hermitian((&pi_z * &sz).into_matrix())?;
        pi_x = Operator::hermitian((&pi_x * &sx).into_matrix())?;
        sector_z.push(sz);
        sector_x.push(sx);
    }
    Ok(ParityOperators { pi_z, pi_x, sector_z, sector_x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::bell_state;
    use crate::linalg::eigh;
    use crate::schedules::{make_schedule, Family};

    fn spec(n: usize) -> TeleportSpec {
        TeleportSpec::new(n, make_schedule(Family::Linear))
    }

    #[test]
    fn initial_hamiltonian_holds_input_and_bell_pair() {
        let h = teleport_hamiltonian(&spec(1)).unwrap();
        let psi = QState::new(vec![r(0.6), crate::linalg::c(0.0, 0.8)]).unwrap();
        let ground = psi.kron(&bell_state(0, 0).unwrap());
        let hv = h.at(0.0).apply_vec(ground.amps());
        assert!((hv + ground.amps() * r(2.0)).norm() < 1e-12);
        let fin = bell_state(0, 0).unwrap().kron(&psi);
        let hv = h.at(1.0).apply_vec(fin.amps());
        assert!((hv + fin.amps() * r(2.0)).norm() < 1e-12);
    }

    #[test]
    fn layout_states_match_product_forms() {
        let psi = QState::new(vec![r(0.6), r(0.8)]).unwrap();
        let layout = TeleportLayout::new(1);
        let b00 = bell_state(0, 0).unwrap();
        let close = |a: QState, b: QState| (a.amps() - b.amps()).norm() < 1e-15;
        assert!(close(layout.initial_state(&psi, None).unwrap(), psi.kron(&b00)));
        assert!(close(layout.target_state(&psi, None).unwrap(), b00.kron(&psi)));
    }

    #[test]
    fn midpoint_gap() {
        let sch = make_schedule(Family::Linear);
        assert!((teleport_gap(&sch, 1.0, 0.5) - 2f64.sqrt()).abs() < 1e-15);
        let e = eigh(&teleport_hamiltonian(&spec(1)).unwrap().at(0.5)).unwrap();
        assert!((e.values[2] - e.values[0] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn parity_actions() {
        let p = parity_operators(1).unwrap();
        for m in 0..8usize {
            let sign = if m.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(p.pi_z.get(m, m), r(sign));
            assert_eq!(p.pi_x.get(7 - m, m), r(1.0));
        }
        let id = Operator::identity(8);
        assert_eq!(Operator::hermitian((&p.pi_z * &p.pi_z).into_matrix()).unwrap(), id);
        assert_eq!(Operator::hermitian((&p.pi_x * &p.pi_x).into_matrix()).unwrap(), id);
    }

    #[test]
    fn blocks_reproduce_the_sector() {
        let h = teleport_hamiltonian(&spec(1)).unwrap().at(0.3);
        let v = make_schedule(Family::Linear).eval(0.3);
        let blk = block_hamiltonian(v.eta_i, v.eta_f, 1.0);
        assert!((h.submatrix(&PLUS_BLOCK).matrix() - blk.matrix()).norm() < 1e-15);
        assert!((h.submatrix(&MINUS_BLOCK).matrix() - blk.matrix()).norm() < 1e-15);
    }

    #[test]
    fn rejects_wrong_gate_size() {
        let bad = spec(1).with_gate(crate::hamiltonians::gates::cnot());
        assert!(matches!(teleport_hamiltonian(&bad), Err(SalError::DimensionMismatch { .. })));
    }
}
