//! Dense complex operator algebra on tensor-product spaces.
//!
//! Tensor basis convention: for `N` factors of dimension `n`, the basis vector
//! `|b_0 b_1 ... b_{N-1}>` has index `sum_i b_i * n^(N-1-i)`, i.e. factor 0 is
//! the most significant digit. Factor positions are 0-based throughout the
//! crate API.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Eigenvalue gap below which eigenvectors are treated as one cluster.
pub const DEGENERACY_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub positivity: f64,
    pub trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { hermitian: DEFAULT_TOL, positivity: DEFAULT_TOL, trace: DEFAULT_TOL }
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(m - m.adjoint()))
}

/// `(m + m^dagger) / 2`.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Integer power `n^k` with overflow reported as an error.
pub fn checked_pow(n: usize, k: usize) -> Result<usize> {
    n.checked_pow(k as u32).ok_or(Error::BudgetExceeded { size: usize::MAX, budget: usize::MAX })
}

/// Recovers `N` from `dim = n^N`, if `dim` is an exact power of `n`.
pub fn factor_count(dim: usize, n: usize) -> Option<usize> {
    if n < 2 {
        return if dim == 1 { Some(1) } else { None };
    }
    let mut d = dim;
    let mut count = 0;
    while d > 1 {
        if !d.is_multiple_of(n) {
            return None;
        }
        d /= n;
        count += 1;
    }
    (count > 0).then_some(count)
}

/// Hermitian operator stored as a dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, DEFAULT_TOL)
    }

    pub fn with_tolerance(m: ComplexMatrix, eps: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        let deviation = hermitian_deviation(&m);
        if deviation > eps {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(m))
    }

    /// Takes the hermitian part of `m` without any check.
    pub fn from_hermitian_part(m: &ComplexMatrix) -> Self {
        Self(hermitize(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn scale(&self, x: f64) -> Self {
        Self(self.0.scale(x))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(kron(&self.0, &other.0))
    }

    pub fn eigh(&self) -> Eigen {
        eigh(&self.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh().values[0]
    }
}

impl std::ops::Add for &HermitianOperator {
    type Output = HermitianOperator;

    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator(&self.0 + &rhs.0)
    }
}

/// Positive semidefinite operator with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(m, &Tolerances::default())
    }

    pub fn with_tolerances(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let h = HermitianOperator::with_tolerance(m, tol.hermitian)?;
        let tr = trace(h.matrix()).re;
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::TraceNotOne { trace: tr });
        }
        let min_eigenvalue = h.min_eigenvalue();
        if min_eigenvalue < -tol.positivity {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self(h.0))
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self(outer(psi.amplitudes(), psi.amplitudes()))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim, dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn as_hermitian(&self) -> HermitianOperator {
        HermitianOperator(self.0.clone())
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(kron(&self.0, &other.0))
    }
}

/// Unit vector in a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(ComplexVector);

impl PureState {
    pub fn new(v: ComplexVector) -> Result<Self> {
        Self::with_tolerance(v, DEFAULT_TOL)
    }

    pub fn with_tolerance(v: ComplexVector, eps: f64) -> Result<Self> {
        let norm_sqr = v.norm_squared();
        if (norm_sqr - 1.0).abs() > eps {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self(v))
    }

    /// Normalizes `v`; fails only for the zero vector.
    pub fn normalized(v: ComplexVector) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: norm * norm });
        }
        Ok(Self(v.unscale(norm)))
    }

    pub fn from_slice(amplitudes: &[C64]) -> Result<Self> {
        Self::new(ComplexVector::from_column_slice(amplitudes))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = ComplexVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self(v)
    }

    /// Qubit state with Bloch angles `theta` (polar) and `phi` (azimuth).
    pub fn bloch(theta: f64, phi: f64) -> Self {
        Self(ComplexVector::from_vec(vec![
            C64::new((theta / 2.0).cos(), 0.0),
            C64::from_polar((theta / 2.0).sin(), phi),
        ]))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.0
    }

    pub fn into_vector(self) -> ComplexVector {
        self.0
    }

    /// `psi^{(x) k}` as a plain vector of dimension `dim^k`.
    pub fn tensor_power(&self, k: usize) -> ComplexVector {
        let mut out = ComplexVector::from_element(1, C64::new(1.0, 0.0));
        for _ in 0..k {
            out = kron_vec(&out, &self.0);
        }
        out
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Bloch vector `(<X>, <Y>, <Z>)` of a qubit state.
    pub fn bloch_vector(&self) -> Option<[f64; 3]> {
        if self.dim() != 2 {
            return None;
        }
        let (a, b) = (self.0[0], self.0[1]);
        let off = a.conj() * b;
        Some([2.0 * off.re, 2.0 * off.im, a.norm_sqr() - b.norm_sqr()])
    }

    /// Multiplies by the global phase making the largest-magnitude amplitude
    /// real and positive (first such index on ties).
    pub fn fix_phase_largest(&mut self) {
        let mut best = 0;
        for (i, z) in self.0.iter().enumerate() {
            if z.norm() > self.0[best].norm() + 1e-14 {
                best = i;
            }
        }
        let z = self.0[best];
        if z.norm() > 0.0 {
            let phase = z.conj() / z.norm();
            self.0 *= phase;
        }
    }
}

/// Orthogonal projector.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector(ComplexMatrix);

impl Projector {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, DEFAULT_TOL)
    }

    pub fn with_tolerance(m: ComplexMatrix, eps: f64) -> Result<Self> {
        let h = HermitianOperator::with_tolerance(m, eps)?;
        let deviation = max_abs(&(h.matrix() * h.matrix() - h.matrix()));
        if deviation > eps {
            return Err(Error::NotIdempotent { deviation });
        }
        Ok(Self(h.0))
    }

    /// `V V^dagger` for a matrix with orthonormal columns.
    pub fn from_orthonormal_columns(v: &ComplexMatrix) -> Self {
        Self(hermitize(&(v * v.adjoint())))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn rank(&self) -> usize {
        trace(&self.0).re.round().max(0.0) as usize
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn complement(&self) -> Self {
        Self(ComplexMatrix::identity(self.dim(), self.dim()) - &self.0)
    }

    /// `||(I - P) v||`.
    pub fn residual(&self, v: &ComplexVector) -> f64 {
        (v - &self.0 * v).norm()
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    pub fn vector(&self, i: usize) -> ComplexVector {
        self.vectors.column(i).into_owned()
    }

    /// Number of eigenvalues within `DEGENERACY_GAP` of the smallest one.
    pub fn ground_multiplicity(&self) -> usize {
        let lo = self.values[0];
        self.values.iter().take_while(|&&v| v - lo < DEGENERACY_GAP).count()
    }
}

/// Eigendecomposition of the hermitian part of `m`, sorted ascending. Each
/// eigenvector is rotated so its first non-negligible component is real and
/// positive.
pub fn eigh(m: &ComplexMatrix) -> Eigen {
    let dim = m.nrows();
    let se = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        let mut v = se.eigenvectors.column(i).into_owned();
        if let Some(z) = v.iter().find(|z| z.norm() > 1e-10).copied() {
            v *= z.conj() / z.norm();
        }
        vectors.set_column(col, &v);
    }
    Eigen { values, vectors }
}

/// Kronecker product, `a` on the most significant factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

/// `|u><v|`.
pub fn outer(u: &ComplexVector, v: &ComplexVector) -> ComplexMatrix {
    u * v.adjoint()
}

/// Place values of each factor position, `n^(N-1-i)`.
pub(crate) fn place_values(n: usize, count: usize) -> Vec<usize> {
    let mut w = vec![1; count];
    for i in (0..count.saturating_sub(1)).rev() {
        w[i] = w[i + 1] * n;
    }
    w
}

/// Digits of a tensor basis index, factor 0 first.
pub(crate) fn digits(mut index: usize, n: usize, count: usize) -> Vec<usize> {
    let mut d = vec![0; count];
    for slot in d.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    d
}

/// For every basis index of the listed positions, its contribution to the
/// full index.
fn subset_offsets(n: usize, total: usize, positions: &[usize]) -> Vec<usize> {
    let place = place_values(n, total);
    let count = n.pow(positions.len() as u32);
    (0..count)
        .map(|idx| digits(idx, n, positions.len()).iter().zip(positions).map(|(d, &p)| d * place[p]).sum())
        .collect()
}

/// Partial trace keeping the factors in `keep` (0-based positions, in the
/// order given) and tracing out the rest.
pub fn partial_trace(a: &ComplexMatrix, n: usize, count: usize, keep: &[usize]) -> Result<ComplexMatrix> {
    check_dim(checked_pow(n, count)?, a.nrows())?;
    check_dim(a.nrows(), a.ncols())?;
    if keep.is_empty() {
        return Err(Error::InvalidArgument("keep must be nonempty".into()));
    }
    let mut seen = vec![false; count];
    for &p in keep {
        if p >= count || seen[p] {
            return Err(Error::InvalidArgument(format!(
                "keep position {p} is out of range or repeated for {count} factors"
            )));
        }
        seen[p] = true;
    }
    let traced: Vec<usize> = (0..count).filter(|&p| !seen[p]).collect();
    let kept_off = subset_offsets(n, count, keep);
    let traced_off = subset_offsets(n, count, &traced);

    let dim_out = kept_off.len();
    let mut out = ComplexMatrix::zeros(dim_out, dim_out);
    for (r, &ro) in kept_off.iter().enumerate() {
        for (s, &so) in kept_off.iter().enumerate() {
            out[(r, s)] = traced_off.iter().map(|&t| a[(ro + t, so + t)]).sum();
        }
    }
    Ok(out)
}

/// `a` acting on the factor positions `positions` (in that order) of an
/// `count`-factor space, identity elsewhere.
pub fn embed_operator(a: &ComplexMatrix, n: usize, count: usize, positions: &[usize]) -> Result<ComplexMatrix> {
    check_dim(checked_pow(n, positions.len())?, a.nrows())?;
    let mut seen = vec![false; count];
    for &p in positions {
        if p >= count || seen[p] {
            return Err(Error::InvalidArgument(format!("position {p} is out of range or repeated")));
        }
        seen[p] = true;
    }
    let rest: Vec<usize> = (0..count).filter(|&p| !seen[p]).collect();
    let act_off = subset_offsets(n, count, positions);
    let rest_off = subset_offsets(n, count, &rest);
    let dim = checked_pow(n, count)?;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for &t in &rest_off {
        for (r, &ro) in act_off.iter().enumerate() {
            for (s, &so) in act_off.iter().enumerate() {
                out[(ro + t, so + t)] = a[(r, s)];
            }
        }
    }
    Ok(out)
}

/// `Re Tr(rho a)`.
pub fn expectation(rho: &DensityMatrix, a: &HermitianOperator) -> Result<f64> {
    check_dim(rho.dim(), a.dim())?;
    let (r, m) = (rho.matrix(), a.matrix());
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..r.nrows() {
        for j in 0..r.ncols() {
            tr += r[(i, j)] * m[(j, i)];
        }
    }
    let scale = 1.0 + max_abs(m);
    if tr.im.abs() > DEFAULT_TOL * scale {
        return Err(Error::Consistency(format!("expectation has imaginary part {:e}", tr.im)));
    }
    Ok(tr.re)
}

/// `<v|a|v>` for a (not necessarily normalized) vector.
pub fn expectation_vector(v: &ComplexVector, a: &ComplexMatrix) -> f64 {
    v.dotc(&(a * v)).re
}

/// Sum of the eigenprojections of `rho` with eigenvalue above `eps`.
pub fn support_projector(rho: &DensityMatrix, eps: f64) -> Projector {
    let eig = eigh(rho.matrix());
    let dim = rho.dim();
    let mut p = ComplexMatrix::zeros(dim, dim);
    for (i, &lambda) in eig.values.iter().enumerate() {
        if lambda > eps {
            let v = eig.vector(i);
            p += outer(&v, &v);
        }
    }
    Projector(hermitize(&p))
}

/// Whether `||(I - p) rho||_max <= eps`, i.e. `im(rho)` lies in `im(p)`.
pub fn is_supported_on(rho: &DensityMatrix, p: &Projector, eps: f64) -> Result<bool> {
    check_dim(p.dim(), rho.dim())?;
    Ok(support_residual(rho.matrix(), p) <= eps)
}

pub(crate) fn support_residual(m: &ComplexMatrix, p: &Projector) -> f64 {
    max_abs(&(m - p.matrix() * m))
}

/// Pauli matrices and small fixed operators.
pub mod pauli {
    use super::{c, ComplexMatrix, HermitianOperator};

    fn op(entries: [[(f64, f64); 2]; 2]) -> HermitianOperator {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| c(entries[i][j].0, entries[i][j].1));
        HermitianOperator::new(m).expect("pauli matrices are hermitian")
    }

    pub fn x() -> HermitianOperator {
        op([[(0.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (0.0, 0.0)]])
    }

    pub fn y() -> HermitianOperator {
        op([[(0.0, 0.0), (0.0, -1.0)], [(0.0, 1.0), (0.0, 0.0)]])
    }

    pub fn z() -> HermitianOperator {
        op([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (-1.0, 0.0)]])
    }

    pub fn id() -> HermitianOperator {
        HermitianOperator::identity(2)
    }
}
