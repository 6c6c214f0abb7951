//! Closed-form eigenframe of one parity block of a teleport sector.
//!
//! With `a = eta_i`, `b = eta_f`, `χ = √(a²+b²)` the block has levels
//! `-2ωχ, 0, 0, 2ωχ`. The textbook eigenvectors carry `1/a` and `1/b`
//! factors that blow up at the endpoints. Using `χ - b = a²/(χ + b)` and
//! `a - χ = -b²/(a + χ)`, the rescaled vectors below are finite and nonzero
//! on all of `[0, 1]` (and slightly beyond), so derivatives can be taken with
//! a plain central stencil. The zero level uses the fixed vector `u` plus its
//! orthogonal complement `w`; since `u` is constant, the pair is parallel
//! transported.

use nalgebra::{DMatrix, Matrix4, Vector4};

use crate::counterdiabatic::frame::SpectralFrame;
use crate::error::Result;
use crate::hamiltonians::grid;
use crate::hamiltonians::teleport::parity_basis_order;
use crate::linalg::{r, Operator, C64};
use crate::schedules::Schedule;

const STENCIL_STEP: f64 = 2e-4;

/// Normalized block eigenvectors as columns, ordered by energy:
/// ground, the two zero-energy vectors `u`, `w`, then the top level.
pub fn block_vectors(schedule: &Schedule, s: f64) -> Matrix4<f64> {
    let v = schedule.eval(s);
    let (a, b) = (v.eta_i, v.eta_f);
    let chi = a.hypot(b);
    let ground = Vector4::new(a + chi, a * (chi + a) / (chi + b), a * b / (chi + b), b).normalize();
    let u = Vector4::new(-0.5, 0.5, 0.5, 0.5);
    let w = Vector4::new(a - b, -(a + b), a - b, a + b) / (2.0 * chi);
    let top = Vector4::new(-a * b / (a + chi), (b - a + chi) * (chi + b) / (chi + b + a), -(b + chi), a).normalize();
    Matrix4::from_columns(&[ground, u, w, top])
}

/// Block levels `(-2χ, 0, 0, 2χ)·ω`.
pub fn block_levels(schedule: &Schedule, omega: f64, s: f64) -> [f64; 4] {
    let e = 2.0 * omega * schedule.chi(s);
    [-e, 0.0, 0.0, e]
}

/// `∂_s` of [`block_vectors`] by a five-point central stencil.
pub fn block_vectors_derivative(schedule: &Schedule, s: f64) -> Matrix4<f64> {
    let h = STENCIL_STEP;
    let f = |x: f64| block_vectors(schedule, x);
    (f(s - 2.0 * h) - f(s + 2.0 * h) + (f(s + h) - f(s - h)) * 8.0) / (12.0 * h)
}

/// Block counter-diabatic term `(i/τ) Σ_n |∂E_n><E_n|`. The vectors are
/// real, so `<E_n|∂E_n> = 0` and no diagonal correction is needed.
pub fn block_cd(schedule: &Schedule, tau: f64, s: f64) -> Operator {
    let v = block_vectors(schedule, s);
    let dv = block_vectors_derivative(schedule, s);
    // Σ_n ∂E_n E_n^T is antisymmetric; average out the stencil residue.
    let m = dv * v.transpose();
    let anti = (m - m.transpose()) * 0.5;
    let mat = DMatrix::from_fn(4, 4, |i, j| C64::new(0.0, anti[(i, j)] / tau));
    Operator::hermitian(mat).expect("i times a real antisymmetric matrix")
}

/// Places two copies of a 4x4 block operator on the parity blocks of a
/// sector and returns it in the computational basis.
pub fn embed_blocks(block: &Operator) -> Operator {
    let mut mat = DMatrix::zeros(8, 8);
    mat.view_mut((0, 0), (4, 4)).copy_from(block.matrix());
    mat.view_mut((4, 4), (4, 4)).copy_from(block.matrix());
    let op = if block.is_hermitian() { Operator::hermitian(mat) } else { Operator::from_matrix(mat) }.expect("8x8");
    op.from_permuted_basis(&parity_basis_order()).expect("8 entries")
}

/// Counter-diabatic term of one sector on its three qubits.
pub fn sector_cd(schedule: &Schedule, tau: f64, s: f64) -> Operator {
    embed_blocks(&block_cd(schedule, tau, s))
}

/// Analytic frame of one sector (8 levels) on `points` nodes. Levels are
/// ordered by energy; within each level the even-parity vector comes first.
pub fn sector_frame(schedule: &Schedule, omega: f64, points: usize) -> Result<SpectralFrame> {
    let order = parity_basis_order();
    let mut energies = Vec::with_capacity(points);
    let mut vectors = Vec::with_capacity(points);
    // Level slots: (block vector index, parity block).
    let slots = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1)];
    for s in grid(points) {
        let v = block_vectors(schedule, s);
        let lv = block_levels(schedule, omega, s);
        let mut m = DMatrix::zeros(8, 8);
        for (col, &(k, blk)) in slots.iter().enumerate() {
            for i in 0..4 {
                m[(order[4 * blk + i], col)] = r(v[(i, k)]);
            }
        }
        energies.push(slots.iter().map(|&(k, _)| lv[k]).collect());
        vectors.push(m);
    }
    let labels = slots.iter().map(|&(_, blk)| blk).collect();
    SpectralFrame::from_parts(energies, vectors, vec![0..2, 2..6, 6..8], Some(labels))
}
