//! Separable and symmetric-product decompositions, their symmetrization, and
//! entanglement witnesses.
//!
//! A separable decomposition whose assembled state is supported on the
//! symmetric subspace has every product vector in that subspace, so each term
//! is `psi^{(x) N}` with `psi` read off from the one-particle marginal.

use crate::error::{check_dim, Error, Result};
use crate::ops::{
    checked_pow, digits, eigh, max_abs, outer, partial_trace, place_values, support_projector, ComplexMatrix,
    ComplexVector, DensityMatrix, Projector, PureState,
};
use crate::symmetric::dicke_basis;

/// Weight tolerance for decompositions.
pub const WEIGHT_TOL: f64 = 1e-10;

/// Default tolerance for accepting a numerically almost symmetric state.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PureProductTerm {
    pub weight: f64,
    pub factors: Vec<PureState>,
}

impl PureProductTerm {
    pub fn product_vector(&self) -> ComplexVector {
        let mut iter = self.factors.iter();
        let first = iter.next().expect("product term has at least one factor").amplitudes().clone();
        iter.fold(first, |acc, f| acc.kronecker(f.amplitudes()))
    }
}

/// A weight together with a pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedState {
    pub weight: f64,
    pub state: PureState,
}

fn check_weights<'a>(weights: impl Iterator<Item = &'a f64>) -> Result<()> {
    let mut total = 0.0;
    for &w in weights {
        if !(w > 0.0 && w <= 1.0 + WEIGHT_TOL) {
            return Err(Error::InvalidArgument(format!("weight {w} is outside (0, 1]")));
        }
        total += w;
    }
    if (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::InvalidArgument(format!("weights sum to {total}, expected 1")));
    }
    Ok(())
}

fn check_shape(n: usize, count: usize) -> Result<()> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidArgument("n and N must be positive".into()));
    }
    Ok(())
}

/// `sum_i w_i |phi_i><phi_i|` over pure product terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableDecomposition {
    n: usize,
    count: usize,
    terms: Vec<PureProductTerm>,
}

impl SeparableDecomposition {
    pub fn new(n: usize, count: usize, terms: Vec<PureProductTerm>) -> Result<Self> {
        check_shape(n, count)?;
        if terms.is_empty() {
            return Err(Error::InvalidArgument("decomposition has no terms".into()));
        }
        for term in &terms {
            check_dim(count, term.factors.len())?;
            for f in &term.factors {
                check_dim(n, f.dim())?;
            }
        }
        check_weights(terms.iter().map(|t| &t.weight))?;
        Ok(Self { n, count, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn particle_count(&self) -> usize {
        self.count
    }

    pub fn terms(&self) -> &[PureProductTerm] {
        &self.terms
    }

    pub fn assemble(&self) -> Result<DensityMatrix> {
        assemble_terms(self.terms.iter().map(|t| (t.weight, t.product_vector())))
    }
}

/// `sum_i w_i (|psi_i><psi_i|)^{(x) N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricProductDecomposition {
    n: usize,
    count: usize,
    terms: Vec<WeightedState>,
}

impl SymmetricProductDecomposition {
    pub fn new(n: usize, count: usize, terms: Vec<WeightedState>) -> Result<Self> {
        check_shape(n, count)?;
        if terms.is_empty() {
            return Err(Error::InvalidArgument("decomposition has no terms".into()));
        }
        for t in &terms {
            check_dim(n, t.state.dim())?;
        }
        check_weights(terms.iter().map(|t| &t.weight))?;
        Ok(Self { n, count, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn particle_count(&self) -> usize {
        self.count
    }

    pub fn terms(&self) -> &[WeightedState] {
        &self.terms
    }

    pub fn assemble(&self) -> Result<DensityMatrix> {
        assemble_terms(self.terms.iter().map(|t| (t.weight, t.state.tensor_power(self.count))))
    }

    /// Writes each `psi^{(x) N}` as an explicit product term.
    pub fn to_separable(&self) -> SeparableDecomposition {
        SeparableDecomposition {
            n: self.n,
            count: self.count,
            terms: self
                .terms
                .iter()
                .map(|t| PureProductTerm { weight: t.weight, factors: vec![t.state.clone(); self.count] })
                .collect(),
        }
    }
}

fn assemble_terms(terms: impl Iterator<Item = (f64, ComplexVector)>) -> Result<DensityMatrix> {
    let mut rho: Option<ComplexMatrix> = None;
    for (w, phi) in terms {
        let term = outer(&phi, &phi).scale(w);
        rho = Some(match rho {
            Some(acc) => acc + term,
            None => term,
        });
    }
    let rho = rho.ok_or_else(|| Error::InvalidArgument("decomposition has no terms".into()))?;
    DensityMatrix::new(crate::ops::hermitize(&rho))
}

/// Result of rewriting a separable decomposition of a symmetric state as a
/// symmetric product decomposition.
#[derive(Debug, Clone)]
pub struct Symmetrized {
    pub decomposition: SymmetricProductDecomposition,
    /// `||(I - P_sym) phi_i||` for every input product vector.
    pub term_residuals: Vec<f64>,
    /// `1 - lambda_max` of every one-particle marginal.
    pub marginal_impurities: Vec<f64>,
    /// Max-norm distance between the input and output assembled states.
    pub reassembly_error: f64,
}

pub fn symmetrize_decomposition(d: &SeparableDecomposition, eps: f64) -> Result<Symmetrized> {
    let (n, count) = (d.n, d.count);
    let iso = dicke_basis(n, count)?;
    let v = iso.columns();
    let rho = d.assemble()?;
    let m = rho.matrix();
    let state_residual = max_abs(&(m - v * (v.adjoint() * m)));
    if state_residual > eps {
        return Err(Error::NonSymmetricState { residual: state_residual });
    }

    let mut term_residuals = Vec::with_capacity(d.terms.len());
    let mut marginal_impurities = Vec::with_capacity(d.terms.len());
    let mut terms = Vec::with_capacity(d.terms.len());
    for (index, term) in d.terms.iter().enumerate() {
        let phi = term.product_vector();
        let residual = iso.residual(&phi);
        if residual > eps {
            return Err(Error::NonSymmetricTerm { index, residual });
        }
        term_residuals.push(residual);
        let marginal = partial_trace(&outer(&phi, &phi), n, count, &[0])?;
        let eig = eigh(&marginal);
        let top = eig.values[n - 1];
        marginal_impurities.push(1.0 - top);
        let mut psi = PureState::normalized(eig.vector(n - 1))?;
        psi.fix_phase_largest();
        terms.push(WeightedState { weight: term.weight, state: psi });
    }
    let decomposition = SymmetricProductDecomposition::new(n, count, terms)?;
    let reassembly_error = max_abs(&(decomposition.assemble()?.matrix() - m));
    if reassembly_error > 10.0 * eps {
        return Err(Error::Consistency(format!(
            "symmetrized decomposition reassembles with error {reassembly_error:e}"
        )));
    }
    Ok(Symmetrized { decomposition, term_residuals, marginal_impurities, reassembly_error })
}

/// Spectral decomposition restricted to eigenvalues above `eps`.
pub fn spectral_decomposition(rho: &DensityMatrix, eps: f64) -> Vec<WeightedState> {
    let eig = eigh(rho.matrix());
    eig.values
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &l)| l > eps)
        .map(|(i, &l)| WeightedState {
            weight: l,
            state: PureState::normalized(eig.vector(i)).expect("eigenvectors are unit vectors"),
        })
        .collect()
}

/// Outcome of checking that every term of a decomposition lives in the range
/// of a projector.
#[derive(Debug, Clone)]
pub struct ComponentSupport {
    /// Whether the assembled state itself is supported on the projector.
    pub precondition_met: bool,
    pub term_residuals: Vec<f64>,
    pub all_terms_supported: bool,
}

impl ComponentSupport {
    pub fn passed(&self) -> bool {
        self.precondition_met && self.all_terms_supported
    }
}

pub fn verify_component_support(d: &SeparableDecomposition, p: &Projector, eps: f64) -> Result<ComponentSupport> {
    check_dim(checked_pow(d.n, d.count)?, p.dim())?;
    let rho = d.assemble()?;
    let precondition_met = crate::ops::is_supported_on(&rho, p, eps)?;
    let term_residuals: Vec<f64> = d.terms.iter().map(|t| p.residual(&t.product_vector())).collect();
    let all_terms_supported = term_residuals.iter().all(|&r| r <= eps);
    Ok(ComponentSupport { precondition_met, term_residuals, all_terms_supported })
}

/// `Tr(F rho)` for the swap `F` of a two-particle system.
pub fn swap_witness(rho: &DensityMatrix, n: usize) -> Result<f64> {
    check_dim(n * n, rho.dim())?;
    let m = rho.matrix();
    // F|ij> = |ji>, so Tr(F rho) = sum_ij rho[(j,i),(i,j)]
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += m[(j * n + i, i * n + j)].re;
        }
    }
    Ok(total)
}

/// Partial transpose over the factor positions in `subset`.
pub fn partial_transpose(m: &ComplexMatrix, n: usize, count: usize, subset: &[usize]) -> Result<ComplexMatrix> {
    let dim = checked_pow(n, count)?;
    check_dim(dim, m.nrows())?;
    if subset.is_empty() || subset.len() >= count || subset.iter().any(|&p| p >= count) {
        return Err(Error::InvalidArgument(format!(
            "transposed subset {subset:?} must be a nonempty proper subset of 0..{count}"
        )));
    }
    let place = place_values(n, count);
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        let rd = digits(r, n, count);
        for s in 0..dim {
            let sd = digits(s, n, count);
            let (mut r2, mut s2) = (r, s);
            for &p in subset {
                let delta = (sd[p] as isize - rd[p] as isize) * place[p] as isize;
                r2 = (r2 as isize + delta) as usize;
                s2 = (s2 as isize - delta) as usize;
            }
            out[(r2, s2)] = m[(r, s)];
        }
    }
    Ok(out)
}

pub fn ppt_min_eigenvalue(rho: &DensityMatrix, n: usize, count: usize, subset: &[usize]) -> Result<f64> {
    let pt = partial_transpose(rho.matrix(), n, count, subset)?;
    Ok(eigh(&pt).values[0])
}

/// Eigenvectors of `rho` with eigenvalue above `eps` all lie in its support.
pub fn spectral_terms_supported(rho: &DensityMatrix, eps: f64) -> bool {
    let p = support_projector(rho, eps);
    spectral_decomposition(rho, eps).iter().all(|t| p.residual(t.state.amplitudes()) <= 1e-8)
}
