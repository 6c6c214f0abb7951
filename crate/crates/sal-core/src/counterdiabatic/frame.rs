//! Gauge-continuous eigenframes sampled on a uniform grid in `s`.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, SalError};
use crate::hamiltonians::{cluster_tol, grid, TimeDepHamiltonian};
use crate::linalg::{eigh, r, C64};

/// Smallest singular value of the overlap between adjacent frames accepted
/// by the gauge fixer.
pub const GAUGE_OVERLAP_MIN: f64 = 0.5;

/// Per-node eigenvalues and eigenvectors of `H(s)` with a smooth gauge.
///
/// Levels are grouped into clusters of (numerically) equal energy. The
/// cluster pattern must stay fixed along the grid. Inside each cluster the
/// basis is carried from node to node by the polar factor of the overlap
/// matrix, a discrete parallel transport; for a single level this reduces to
/// making each successive overlap real and positive.
#[derive(Clone, Debug)]
pub struct SpectralFrame {
    grid: Vec<f64>,
    energies: Vec<Vec<f64>>,
    vectors: Vec<DMatrix<C64>>,
    clusters: Vec<Range<usize>>,
    block_labels: Option<Vec<usize>>,
}

impl SpectralFrame {
    /// Diagonalizes `h` on `points` nodes and fixes the gauge.
    pub fn build(h: &TimeDepHamiltonian, points: usize) -> Result<Self> {
        if points < 5 {
            return Err(SalError::InvalidSpec("a spectral frame needs at least 5 grid points".into()));
        }
        let nodes: Vec<f64> = grid(points).collect();
        let mut energies = Vec::with_capacity(points);
        let mut vectors: Vec<DMatrix<C64>> = Vec::with_capacity(points);
        let mut clusters: Option<Vec<Range<usize>>> = None;
        for &s in &nodes {
            let e = eigh(&h.at(s))?;
            let cl = e.clusters(cluster_tol(&e.values));
            match &clusters {
                None => clusters = Some(cl.clone()),
                Some(prev) if *prev != cl => return Err(SalError::LevelCrossing(s)),
                _ => {}
            }
            let mut v = e.vectors;
            if let Some(prev) = vectors.last() {
                align(prev, &mut v, &cl, s)?;
            }
            energies.push(e.values);
            vectors.push(v);
        }
        let clusters = clusters.expect("at least one node");
        Ok(Self { grid: nodes, energies, vectors, clusters, block_labels: None })
    }

    /// Assembles a frame from externally computed (already smooth) data.
    pub fn from_parts(
        energies: Vec<Vec<f64>>,
        vectors: Vec<DMatrix<C64>>,
        clusters: Vec<Range<usize>>,
        block_labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        let points = vectors.len();
        if points < 5 || energies.len() != points {
            return Err(SalError::InvalidSpec("frame needs matching energies/vectors on at least 5 nodes".into()));
        }
        let grid = grid(points).collect();
        Ok(Self { grid, energies, vectors, clusters, block_labels })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].nrows()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.len() - 1) as f64
    }

    pub fn energies(&self, j: usize) -> &[f64] {
        &self.energies[j]
    }

    pub fn vectors(&self, j: usize) -> &DMatrix<C64> {
        &self.vectors[j]
    }

    pub fn vector(&self, j: usize, m: usize) -> DVector<C64> {
        self.vectors[j].column(m).into_owned()
    }

    pub fn clusters(&self) -> &[Range<usize>] {
        &self.clusters
    }

    /// Parity-block label per level, when the frame was built blockwise.
    pub fn block_labels(&self) -> Option<&[usize]> {
        self.block_labels.as_deref()
    }

    pub fn cluster_of(&self, m: usize) -> Range<usize> {
        self.clusters.iter().find(|c| c.contains(&m)).cloned().expect("level index in range")
    }

    /// Smallest real part of `<v_m(s_j)|v_m(s_{j+1})>` over the grid.
    pub fn min_successive_overlap(&self) -> f64 {
        let mut worst = f64::INFINITY;
        for j in 0..self.len() - 1 {
            for m in 0..self.dim() {
                let o = self.vectors[j].column(m).dotc(&self.vectors[j + 1].column(m)).re;
                worst = worst.min(o);
            }
        }
        worst
    }

    /// `∂_s v_m` at node `j` from a fourth-order stencil, one-sided at the ends.
    pub fn vector_derivative(&self, j: usize, m: usize) -> DVector<C64> {
        let n = self.len();
        let col = |k: usize| self.vectors[k].column(m).into_owned();
        let weights: [(isize, f64); 5] = if j < 2 {
            [(0, -25.0), (1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)]
        } else if j + 2 >= n {
            [(0, 25.0), (-1, -48.0), (-2, 36.0), (-3, -16.0), (-4, 3.0)]
        } else {
            [(-2, 1.0), (-1, -8.0), (0, 0.0), (1, 8.0), (2, -1.0)]
        };
        let mut acc = DVector::zeros(self.dim());
        for (off, w) in weights {
            if w != 0.0 {
                acc += col((j as isize + off) as usize) * r(w);
            }
        }
        acc / r(12.0 * self.step())
    }

    /// `(1 - P_c) ∂_s v_m` for every level at node `j`, as matrix columns.
    fn transverse_derivatives(&self, j: usize) -> DMatrix<C64> {
        let v = &self.vectors[j];
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for cl in &self.clusters {
            let vc = v.columns(cl.start, cl.len());
            for m in cl.clone() {
                let d = self.vector_derivative(j, m);
                let inside = &vc * (vc.adjoint() * &d);
                out.set_column(m, &(d - inside));
            }
        }
        out
    }

    /// `μ_m = <∂v_m|(1 - P_c)|∂v_m>` at node `j`.
    ///
    /// Without degeneracy this is `<∂v|∂v> - |<v|∂v>|^2`; the cluster
    /// projector makes it independent of the basis chosen inside a level.
    pub fn mu(&self, j: usize) -> Vec<f64> {
        let t = self.transverse_derivatives(j);
        (0..self.dim()).map(|m| t.column(m).norm_squared()).collect()
    }

    /// Counter-diabatic operator at node `j`:
    /// `(i/τ) Σ_m (1 - P_c)|∂v_m><v_m|`, equal to `(i/2τ) Σ_c [∂P_c, P_c]`.
    pub fn cd_at_node(&self, j: usize, tau: f64) -> DMatrix<C64> {
        let t = self.transverse_derivatives(j);
        let m = &t * self.vectors[j].adjoint() * C64::new(0.0, 1.0 / tau);
        (&m + m.adjoint()) * r(0.5)
    }
}

/// Rotates each cluster of `cur` onto `prev` by the polar factor of their
/// overlap, leaving `prev^dag cur` Hermitian positive within the cluster.
fn align(prev: &DMatrix<C64>, cur: &mut DMatrix<C64>, clusters: &[Range<usize>], s: f64) -> Result<()> {
    for cl in clusters {
        let p = prev.columns(cl.start, cl.len());
        let c = cur.columns(cl.start, cl.len()).into_owned();
        let overlap = p.adjoint() * &c;
        let svd = overlap.svd(true, true);
        let smin = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
        if !(smin >= GAUGE_OVERLAP_MIN) {
            return Err(SalError::GaugeFix { s, overlap: smin });
        }
        let u = svd.u.expect("requested");
        let vt = svd.v_t.expect("requested");
        let rot = vt.adjoint() * u.adjoint();
        cur.columns_mut(cl.start, cl.len()).copy_from(&(c * rot));
    }
    Ok(())
}
