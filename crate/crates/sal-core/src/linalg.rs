//! Dense complex linear algebra on qubit registers.
//!
//! Qubit 0 is the most significant bit of a basis index, so `kron(a, b)`
//! places `a` on the leading qubits.

use std::ops::{Add, Mul, Range, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SalError};

pub type C64 = Complex64;

/// Absolute tolerance for the Hermitian tag.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on the norm of a [`QState`].
pub const NORM_TOL: f64 = 1e-10;
/// Relative residual `‖HV - VΛ‖/‖H‖` accepted from the eigensolver.
pub const EIGH_RESIDUAL_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Dense square complex matrix with a Hermitian tag.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
    hermitian: bool,
}

impl Operator {
    /// Wraps a square matrix without tagging it Hermitian.
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(SalError::DimensionMismatch { expected: mat.nrows(), found: mat.ncols() });
        }
        Ok(Self { mat, hermitian: false })
    }

    /// Wraps and tags a Hermitian matrix.
    ///
    /// Rounding noise from products such as `U H U^dag` is tolerated in
    /// proportion to the largest entry, then removed by symmetrizing, so the
    /// stored matrix is exactly self-adjoint.
    pub fn hermitian(mat: DMatrix<C64>) -> Result<Self> {
        let op = Self::from_matrix(mat)?;
        let err = op.hermiticity_error();
        let scale = op.max_abs().max(1.0);
        if !err.is_finite() || err > HERMITIAN_TOL * scale {
            return Err(SalError::NotHermitian(err));
        }
        Ok(op.symmetrized())
    }

    fn symmetrized(self) -> Self {
        let mat = (&self.mat + self.mat.adjoint()) * r(0.5);
        Self { mat, hermitian: true }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { mat: DMatrix::zeros(dim, dim), hermitian: true }
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: DMatrix::identity(dim, dim), hermitian: true }
    }

    /// Real diagonal operator.
    pub fn diagonal(values: &[f64]) -> Self {
        let d = DVector::from_iterator(values.len(), values.iter().map(|&x| r(x)));
        Self { mat: DMatrix::from_diagonal(&d), hermitian: true }
    }

    /// Builds from row-major complex entries; tags Hermitian when it is.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|row| row.len() != n) {
            return Err(SalError::DimensionMismatch { expected: n, found: rows.iter().map(Vec::len).max().unwrap_or(0) });
        }
        let mat = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let op = Self::from_matrix(mat)?;
        if op.hermiticity_error() <= HERMITIAN_TOL {
            Ok(op.symmetrized())
        } else {
            Ok(op)
        }
    }

    /// Builds from row-major real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &DVector<C64>, b: &DVector<C64>) -> Self {
        let mat = a * b.adjoint();
        let hermitian = a == b;
        Self { mat, hermitian }
    }

    /// Projector onto a normalized state.
    pub fn projector(psi: &QState) -> Self {
        Self::outer(psi.amps(), psi.amps())
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Number of qubits when the dimension is a power of two.
    pub fn num_qubits(&self) -> Option<usize> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// `max |A - A^dag|` over entries.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `max |U^dag U - I|` over entries.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.mat.adjoint() * &self.mat;
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { r(1.0) } else { r(0.0) };
                worst = worst.max((p[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn dagger(&self) -> Self {
        Self { mat: self.mat.adjoint(), hermitian: self.hermitian }
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { mat: &self.mat * z, hermitian: self.hermitian && z.im == 0.0 }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        Self { mat: &self.mat * r(x), hermitian: self.hermitian }
    }

    /// `U A U^dag`; keeps the Hermitian tag.
    pub fn conjugate_by(&self, u: &Operator) -> Result<Self> {
        check_dim(u.dim(), self.dim())?;
        let mat = &u.mat * &self.mat * u.mat.adjoint();
        if self.hermitian {
            Ok(Self { mat, hermitian: false }.symmetrized())
        } else {
            Ok(Self { mat, hermitian: false })
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Hilbert-Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute row sum; bounds the spectral norm from above.
    pub fn inf_norm(&self) -> f64 {
        self.mat.row_iter().map(|row| row.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Spectral norm. Exact for Hermitian operators.
    pub fn spectral_norm(&self) -> f64 {
        if self.hermitian {
            let e = eigh(self).expect("tagged Hermitian");
            e.values.iter().map(|x| x.abs()).fold(0.0, f64::max)
        } else {
            let gram = Operator { mat: self.mat.adjoint() * &self.mat, hermitian: false }.symmetrized();
            let e = eigh(&gram).expect("Gram matrix is Hermitian");
            e.values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
        }
    }

    /// Spectral norm when cheap, otherwise the row-sum bound.
    pub fn spectral_norm_bound(&self) -> f64 {
        if self.hermitian && self.dim() <= 128 {
            self.spectral_norm()
        } else {
            self.inf_norm()
        }
    }

    pub fn apply_vec(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.mat * v
    }

    /// `<psi|A|psi>`.
    pub fn expectation(&self, psi: &QState) -> C64 {
        psi.amps.dotc(&(&self.mat * &psi.amps))
    }

    /// `AB - BA`.
    pub fn commutator(a: &Operator, b: &Operator) -> Operator {
        Operator { mat: &a.mat * &b.mat - &b.mat * &a.mat, hermitian: false }
    }

    /// `AB + BA`.
    pub fn anticommutator(a: &Operator, b: &Operator) -> Operator {
        let mat = &a.mat * &b.mat + &b.mat * &a.mat;
        Operator { mat, hermitian: false }
    }

    /// Re-expresses an operator given in a reordered basis: entry `(k, l)` of
    /// `self` becomes entry `(perm[k], perm[l])` of the result.
    pub fn from_permuted_basis(&self, perm: &[usize]) -> Result<Self> {
        check_dim(perm.len(), self.dim())?;
        let n = self.dim();
        let mut mat = DMatrix::zeros(n, n);
        for k in 0..n {
            for l in 0..n {
                mat[(perm[k], perm[l])] = self.mat[(k, l)];
            }
        }
        Ok(Self { mat, hermitian: self.hermitian })
    }

    /// Restriction to the rows/columns listed in `indices`.
    pub fn submatrix(&self, indices: &[usize]) -> Self {
        let n = indices.len();
        let mat = DMatrix::from_fn(n, n, |i, j| self.mat[(indices[i], indices[j])]);
        Self { mat, hermitian: self.hermitian }
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator { mat: &self.mat + &rhs.mat, hermitian: self.hermitian && rhs.hermitian }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator { mat: &self.mat - &rhs.mat, hermitian: self.hermitian && rhs.hermitian }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator { mat: &self.mat * &rhs.mat, hermitian: false }
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(SalError::DimensionMismatch { expected, found })
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    Operator { mat: a.mat.kronecker(&b.mat), hermitian: a.hermitian && b.hermitian }
}

/// Kronecker product of a list, left to right.
pub fn kron_all(ops: &[&Operator]) -> Operator {
    let mut acc = Operator::identity(1);
    for op in ops {
        acc = kron(&acc, op);
    }
    acc
}

#[inline]
fn bit(index: usize, qubit: usize, total: usize) -> usize {
    (index >> (total - 1 - qubit)) & 1
}

/// Sub-index of `index` restricted to `qubits` (first listed is most significant).
fn gather(index: usize, qubits: &[usize], total: usize) -> usize {
    qubits.iter().fold(0, |acc, &q| (acc << 1) | bit(index, q, total))
}

/// Writes the bits of `sub` into the positions `qubits` of `base`.
fn scatter(base: usize, sub: usize, qubits: &[usize], total: usize) -> usize {
    let k = qubits.len();
    let mut out = base;
    for (pos, &q) in qubits.iter().enumerate() {
        let b = (sub >> (k - 1 - pos)) & 1;
        let mask = 1 << (total - 1 - q);
        out = if b == 1 { out | mask } else { out & !mask };
    }
    out
}

fn check_qubits(qubits: &[usize], total: usize) -> Result<()> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= total || qubits[..i].contains(&q) {
            return Err(SalError::InvalidSpec(format!("qubit list {qubits:?} invalid for {total} qubits")));
        }
    }
    Ok(())
}

/// Lifts `op` acting on `qubits` (in that order) to a `total`-qubit register,
/// acting as identity elsewhere.
pub fn embed(op: &Operator, qubits: &[usize], total: usize) -> Result<Operator> {
    check_qubits(qubits, total)?;
    check_dim(1 << qubits.len(), op.dim())?;
    let dim = 1usize << total;
    let k = op.dim();
    let mut mat = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let row = gather(i, qubits, total);
        for col in 0..k {
            let v = op.mat[(row, col)];
            if v != r(0.0) {
                mat[(i, scatter(i, col, qubits, total))] = v;
            }
        }
    }
    Ok(Operator { mat, hermitian: op.hermitian })
}

/// Normalized state vector on `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct QState {
    num_qubits: usize,
    amps: DVector<C64>,
}

impl QState {
    /// Accepts amplitudes that already have unit norm.
    pub fn from_vector(amps: DVector<C64>) -> Result<Self> {
        let n = amps.len();
        if !n.is_power_of_two() {
            return Err(SalError::InvalidSpec(format!("state length {n} is not a power of two")));
        }
        let norm = amps.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(SalError::NotNormalized(norm));
        }
        Ok(Self { num_qubits: n.trailing_zeros() as usize, amps })
    }

    pub fn new(amps: Vec<C64>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(amps))
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amps: DVector<C64>) -> Result<Self> {
        let norm = amps.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(SalError::NotNormalized(norm));
        }
        Self::from_vector(amps / r(norm))
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = DVector::zeros(1 << num_qubits);
        amps[index] = r(1.0);
        Self { num_qubits, amps }
    }

    /// Haar-random state from complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Self {
        let dim = 1usize << num_qubits;
        let amps = DVector::from_fn(dim, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c(re, im)
        });
        Self::normalized(amps).expect("Gaussian vector is nonzero")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn into_vector(self) -> DVector<C64> {
        self.amps
    }

    pub fn amp(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn kron(&self, other: &QState) -> QState {
        QState { num_qubits: self.num_qubits + other.num_qubits, amps: self.amps.kronecker(&other.amps) }
    }

    /// Applies a unitary and re-checks normalization.
    pub fn evolve_by(&self, u: &Operator) -> Result<QState> {
        check_dim(self.dim(), u.dim())?;
        QState::from_vector(&u.mat * &self.amps)
    }

    /// Product state built from parts placed on disjoint qubit lists.
    pub fn place(parts: &[(&QState, &[usize])], total: usize) -> Result<QState> {
        let mut used = Vec::new();
        for (psi, qubits) in parts {
            check_dim(psi.num_qubits, qubits.len())?;
            used.extend_from_slice(qubits);
        }
        check_qubits(&used, total)?;
        if used.len() != total {
            return Err(SalError::InvalidSpec(format!("placement covers {} of {total} qubits", used.len())));
        }
        let dim = 1usize << total;
        let amps = DVector::from_fn(dim, |i, _| {
            parts.iter().fold(r(1.0), |acc, (psi, qubits)| acc * psi.amps[gather(i, qubits, total)])
        });
        QState::from_vector(amps)
    }
}

/// Ascending eigenvalues with orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl Eigh {
    pub fn vector(&self, k: usize) -> DVector<C64> {
        self.vectors.column(k).into_owned()
    }

    /// Groups indices of numerically equal eigenvalues.
    pub fn clusters(&self, tol: f64) -> Vec<Range<usize>> {
        clusters(&self.values, tol)
    }

    /// Projector onto the span of columns `range`.
    pub fn projector(&self, range: Range<usize>) -> Operator {
        let v = self.vectors.columns(range.start, range.len());
        Operator { mat: &v * v.adjoint(), hermitian: true }
    }
}

/// Splits ascending values into runs whose neighbours differ by at most `tol`.
pub fn clusters(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            out.push(start..k);
            start = k;
        }
    }
    out
}

/// Hermitian eigendecomposition.
pub fn eigh(h: &Operator) -> Result<Eigh> {
    if !h.hermitian {
        return Err(SalError::NotHermitian(h.hermiticity_error()));
    }
    let eig = h.mat.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(h.dim(), h.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
    let out = Eigh { values, vectors };
    // Guard against silent solver failures on degenerate spectra.
    let lambda = DMatrix::from_diagonal(&DVector::from_iterator(h.dim(), out.values.iter().map(|&x| r(x))));
    let resid = (&h.mat * &out.vectors - &out.vectors * lambda).norm();
    if resid > EIGH_RESIDUAL_TOL * h.mat.norm().max(1.0) {
        return Err(SalError::Invariant(format!("eigendecomposition residual {resid:e}")));
    }
    Ok(out)
}

/// `exp(-i h t)` through the eigendecomposition.
pub fn expm_hermitian(h: &Operator, t: f64) -> Result<Operator> {
    let e = eigh(h)?;
    let phases = DVector::from_iterator(e.values.len(), e.values.iter().map(|&x| C64::from_polar(1.0, -x * t)));
    let mat = &e.vectors * DMatrix::from_diagonal(&phases) * e.vectors.adjoint();
    Operator::from_matrix(mat)
}

/// Applies `exp(-i h dt)` to `v` in place.
///
/// The exponential is summed as a Taylor series until the next term drops
/// below machine precision, on substeps short enough that the series
/// converges quickly. Truncation is then far below rounding, so the map is
/// unitary to working precision.
pub fn expi_apply(h: &DMatrix<C64>, dt: f64, v: &mut DVector<C64>) {
    let bound = h.row_iter().map(|row| row.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let substeps = ((bound * dt.abs()) / 0.25).ceil().max(1.0) as usize;
    let h_sub = dt / substeps as f64;
    let mut term = v.clone();
    let mut next = v.clone();
    for _ in 0..substeps {
        term.copy_from(v);
        let scale = v.norm().max(f64::MIN_POSITIVE);
        for k in 1..64 {
            next.gemv(c(0.0, -h_sub / k as f64), h, &term, r(0.0));
            std::mem::swap(&mut term, &mut next);
            *v += &term;
            if term.norm() <= 1e-18 * scale {
                break;
            }
        }
    }
}

/// [`expi_apply`] on every column of `m` at once.
///
/// Works on split real and imaginary parts so that each Taylor term costs
/// four real matrix products, which run much faster than the generic
/// complex kernel.
pub fn expi_apply_columns(h: &DMatrix<C64>, dt: f64, m: &mut DMatrix<C64>) {
    let bound = h.row_iter().map(|row| row.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let substeps = ((bound * dt.abs()) / 0.25).ceil().max(1.0) as usize;
    let h_sub = dt / substeps as f64;
    let (hr, hi) = (h.map(|z| z.re), h.map(|z| z.im));
    let (mut vr, mut vi) = (m.map(|z| z.re), m.map(|z| z.im));
    let (mut tr, mut ti) = (vr.clone(), vi.clone());
    let (mut nr, mut ni) = (vr.clone(), vi.clone());
    for _ in 0..substeps {
        tr.copy_from(&vr);
        ti.copy_from(&vi);
        let scale = vr
            .column_iter()
            .zip(vi.column_iter())
            .map(|(a, b)| (a.norm_squared() + b.norm_squared()).sqrt())
            .fold(f64::INFINITY, f64::min)
            .max(f64::MIN_POSITIVE);
        for k in 1..64 {
            // (-i c) (H t) with H t = (Hr tr - Hi ti) + i (Hr ti + Hi tr).
            let cst = h_sub / k as f64;
            nr.gemm(cst, &hr, &ti, 0.0);
            nr.gemm(cst, &hi, &tr, 1.0);
            ni.gemm(-cst, &hr, &tr, 0.0);
            ni.gemm(cst, &hi, &ti, 1.0);
            std::mem::swap(&mut tr, &mut nr);
            std::mem::swap(&mut ti, &mut ni);
            vr += &tr;
            vi += &ti;
            if (tr.norm_squared() + ti.norm_squared()).sqrt() <= 1e-18 * scale {
                break;
            }
        }
    }
    m.zip_zip_apply(&vr, &vi, |z, a, b| *z = C64::new(a, b));
}

/// One propagator step `exp(-i h_mid dt)|psi>`.
pub fn propagate_step(h_mid: &Operator, dt: f64, psi: &QState) -> Result<QState> {
    if !h_mid.hermitian {
        return Err(SalError::NotHermitian(h_mid.hermiticity_error()));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SalError::InvalidSpec(format!("time step must be positive, got {dt}")));
    }
    check_dim(h_mid.dim(), psi.dim())?;
    let mut v = psi.amps.clone();
    expi_apply(&h_mid.mat, dt, &mut v);
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(SalError::Invariant(format!("norm drift {:e} in one step", (norm - 1.0).abs())));
    }
    Ok(QState { num_qubits: psi.num_qubits, amps: v })
}

/// Fidelity `|<a|b>|^2`.
pub fn fidelity(a: &QState, b: &QState) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    Ok(a.inner(b).norm_sqr())
}
