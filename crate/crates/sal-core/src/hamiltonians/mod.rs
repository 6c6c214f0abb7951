//! Time-dependent Hamiltonian builders and spectral diagnostics.

pub mod controlled;
pub mod gates;
pub mod teleport;

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SalError};
use crate::linalg::{eigh, Operator};

pub use controlled::{controlled_hamiltonian, h_xi, xi_excited, xi_ground, ControlledSpec};
pub use gates::{bell_state, Gate};
pub use teleport::{parity_operators, teleport_hamiltonian, ParityOperators, TeleportLayout, TeleportSpec};

/// `s -> Operator`, shareable across threads.
pub type OpFn = Arc<dyn Fn(f64) -> Operator + Send + Sync>;
/// `s -> ascending eigenvalues`.
pub type LevelFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// Step for the five-point derivative stencil used when no analytic
/// derivative is attached.
const DERIV_STEP: f64 = 1e-3;

/// A Hamiltonian `H(s)` on `s ∈ [0, 1]`, optionally with its analytic
/// derivative and closed-form spectrum.
#[derive(Clone)]
pub struct TimeDepHamiltonian {
    dim: usize,
    eval: OpFn,
    deriv: Option<OpFn>,
    levels: Option<LevelFn>,
}

impl fmt::Debug for TimeDepHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeDepHamiltonian")
            .field("dim", &self.dim)
            .field("analytic_derivative", &self.deriv.is_some())
            .field("closed_form_levels", &self.levels.is_some())
            .finish()
    }
}

impl TimeDepHamiltonian {
    pub fn new(dim: usize, eval: OpFn) -> Self {
        Self { dim, eval, deriv: None, levels: None }
    }

    pub fn with_derivative(mut self, deriv: OpFn) -> Self {
        self.deriv = Some(deriv);
        self
    }

    pub fn with_levels(mut self, levels: LevelFn) -> Self {
        self.levels = Some(levels);
        self
    }

    pub fn constant(op: Operator) -> Self {
        let dim = op.dim();
        let zero = Operator::zeros(dim);
        Self::new(dim, Arc::new(move |_| op.clone())).with_derivative(Arc::new(move |_| zero.clone()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, s: f64) -> Operator {
        (self.eval)(s)
    }

    pub fn evaluator(&self) -> OpFn {
        self.eval.clone()
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    /// `dH/ds`, analytic when available, otherwise a central five-point stencil.
    pub fn derivative(&self, s: f64) -> Operator {
        if let Some(d) = &self.deriv {
            return d(s);
        }
        let h = DERIV_STEP;
        let f = |x: f64| self.at(x);
        let num = &(&f(s - 2.0 * h) - &f(s + 2.0 * h)) + &(&f(s + h) - &f(s - h)).scale_real(8.0);
        num.scale_real(1.0 / (12.0 * h))
    }

    /// Closed-form spectrum when the builder knows it.
    pub fn levels(&self, s: f64) -> Option<Vec<f64>> {
        self.levels.as_ref().map(|l| l(s))
    }

    /// Largest hermiticity defect over a uniform grid.
    pub fn hermiticity_error(&self, points: usize) -> f64 {
        grid(points).map(|s| self.at(s).hermiticity_error()).fold(0.0, f64::max)
    }

    /// `G H(s) G^dag` for a fixed unitary `G`.
    pub fn conjugated(&self, g: &Operator) -> Result<Self> {
        if g.dim() != self.dim {
            return Err(SalError::DimensionMismatch { expected: self.dim, found: g.dim() });
        }
        let (g1, g2) = (g.clone(), g.clone());
        let eval = self.eval.clone();
        let mut out = Self::new(self.dim, Arc::new(move |s| eval(s).conjugate_by(&g1).expect("dims checked")));
        if let Some(d) = self.deriv.clone() {
            out = out.with_derivative(Arc::new(move |s| d(s).conjugate_by(&g2).expect("dims checked")));
        }
        if let Some(l) = self.levels.clone() {
            out = out.with_levels(l);
        }
        Ok(out)
    }
}

/// `points` uniform nodes on `[0, 1]`.
pub fn grid(points: usize) -> impl Iterator<Item = f64> + Clone {
    let n = points.max(2);
    (0..n).map(move |k| k as f64 / (n - 1) as f64)
}

/// Relative tolerance for grouping degenerate eigenvalues.
pub(crate) fn cluster_tol(values: &[f64]) -> f64 {
    let scale = values.iter().map(|x| x.abs()).fold(1.0, f64::max);
    1e-8 * scale
}

/// Adiabatic runtime scale `max |<E_k|∂_s H|E_0>| / g_{0k}^2` for the ground
/// level, maximised over the grid and all excited levels.
///
/// Degenerate levels are handled as clusters: the matrix element becomes the
/// largest singular value of the block `P_k ∂_s H P_0`, which is basis-free.
pub fn adiabatic_time_estimate(h: &TimeDepHamiltonian, points: usize) -> Result<f64> {
    if points < 2 {
        return Err(SalError::InvalidSpec("grid needs at least two points".into()));
    }
    let mut worst = 0.0f64;
    let mut pattern: Option<Vec<usize>> = None;
    for s in grid(points) {
        let e = eigh(&h.at(s))?;
        let clusters = e.clusters(cluster_tol(&e.values));
        let sizes: Vec<usize> = clusters.iter().map(|c| c.len()).collect();
        match &pattern {
            None => pattern = Some(sizes),
            Some(p) if *p != sizes => return Err(SalError::VanishingGap(s)),
            _ => {}
        }
        if clusters.len() < 2 {
            continue;
        }
        let dh = h.derivative(s);
        let ground = &clusters[0];
        let v0 = e.vectors.columns(ground.start, ground.len());
        let e0 = e.values[ground.start];
        for cl in &clusters[1..] {
            let gap = e.values[cl.start] - e0;
            if gap <= 1e-10 {
                return Err(SalError::VanishingGap(s));
            }
            let vk = e.vectors.columns(cl.start, cl.len());
            let block = vk.adjoint() * dh.matrix() * v0;
            let sigma = block.singular_values().iter().copied().fold(0.0, f64::max);
            worst = worst.max(sigma / (gap * gap));
        }
    }
    Ok(worst)
}
