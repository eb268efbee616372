//! Ground-state energies of translation-invariant k-local bosonic
//! Hamiltonians: mean-field minimization over symmetric product states, exact
//! finite-N diagonalization on the symmetric subspace, and the convergence of
//! the latter to the former.
//!
//! Energies are reported per k-subset: the finite-N ground energy of
//! `sum_{|mu| = k} A_mu` is divided by `C(N, k)`.

use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::ops::{
    checked_pow, eigh, expectation_vector, factor_count, hermitize, ComplexMatrix, ComplexVector, HermitianOperator,
    PureState, C64,
};
use crate::random::{haar_state, stream_rng};
use crate::symmetric::{compress_to_symmetric, dicke_basis, dicke_labels, label_index, multinomial, DickeLabel};

/// Largest symmetric-subspace dimension handled by `finite_n_energy`.
pub const FINITE_N_BUDGET: usize = 4096;

/// Slack for the monotonicity and mean-field dominance assertions.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// Eigenvalue gap below which the lowest eigenvector of the effective
/// operator is treated as degenerate.
const TANGENT_DEGENERACY: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct KLocalTerm {
    pub name: String,
    pub operator: HermitianOperator,
}

/// `H(x) = sum_i x_i H_i`, each `H_i` acting on `k` particles of dimension
/// `n` and repeated on every k-subset.
#[derive(Debug, Clone, PartialEq)]
pub struct KLocalSpec {
    n: usize,
    k: usize,
    terms: Vec<KLocalTerm>,
    x: Vec<f64>,
}

impl KLocalSpec {
    pub fn new(n: usize, k: usize, terms: Vec<KLocalTerm>, x: Vec<f64>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidArgument("n and k must be positive".into()));
        }
        if terms.is_empty() {
            return Err(Error::InvalidArgument("spec has no terms".into()));
        }
        let dim = checked_pow(n, k)?;
        for t in &terms {
            check_dim(dim, t.operator.dim())?;
        }
        check_dim(terms.len(), x.len())?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("coefficients must be finite".into()));
        }
        Ok(Self { n, k, terms, x })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &[KLocalTerm] {
        &self.terms
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.x
    }

    pub fn with_coefficients(&self, x: Vec<f64>) -> Result<Self> {
        Self::new(self.n, self.k, self.terms.clone(), x)
    }
}

/// `sum_i x_i H_i` on a single k-subset.
pub fn assemble_weighted(spec: &KLocalSpec) -> HermitianOperator {
    let dim = spec.terms[0].operator.dim();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (t, &x) in spec.terms.iter().zip(&spec.x) {
        m += t.operator.matrix().scale(x);
    }
    HermitianOperator::from_hermitian_part(&m)
}

fn particle_count_of(a: &HermitianOperator, n: usize) -> Result<usize> {
    factor_count(a.dim(), n).ok_or(Error::DimensionMismatch { expected: n, found: a.dim() })
}

/// `f(psi) = <psi^{(x) k}| a |psi^{(x) k}>`.
pub fn product_energy(a: &HermitianOperator, psi: &PureState, k: usize) -> Result<f64> {
    check_dim(checked_pow(psi.dim(), k)?, a.dim())?;
    Ok(expectation_vector(&psi.tensor_power(k), a.matrix()))
}

/// `B(psi) = sum_j Tr_{slots != j}(a (|psi><psi| on every other slot))`, so
/// that `<psi|B|psi> = k f(psi)` and `B psi` is the Wirtinger derivative of
/// `f` with respect to `conj(psi)`.
pub fn effective_operator(a: &HermitianOperator, psi: &PureState) -> Result<HermitianOperator> {
    let n = psi.dim();
    let k = particle_count_of(a, n)?;
    let mut b = ComplexMatrix::zeros(n, n);
    for slot in 0..k {
        // columns: psi on every slot except `slot`, basis vector r on `slot`
        let mut w = ComplexMatrix::zeros(a.dim(), n);
        for r in 0..n {
            let mut v = ComplexVector::from_element(1, C64::new(1.0, 0.0));
            for j in 0..k {
                let factor = if j == slot { PureState::basis(n, r).into_vector() } else { psi.amplitudes().clone() };
                v = v.kronecker(&factor);
            }
            w.set_column(r, &v);
        }
        b += w.adjoint() * a.matrix() * &w;
    }
    Ok(HermitianOperator::from_hermitian_part(&b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldConfig {
    pub restarts: usize,
    pub max_iter: usize,
    pub damping: f64,
    pub tol: f64,
    pub seed: u64,
}

impl Default for MeanFieldConfig {
    fn default() -> Self {
        Self { restarts: 16, max_iter: 500, damping: 0.5, tol: 1e-10, seed: 0 }
    }
}

impl MeanFieldConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iter == 0 {
            return Err(Error::InvalidArgument("restarts and max_iter must be positive".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidArgument(format!("damping {} is outside (0, 1]", self.damping)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument("tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldResult {
    pub energy: f64,
    pub minimizer: PureState,
    /// Iterations used by the winning restart.
    pub iterations: usize,
    pub converged: bool,
    pub restart_energies: Vec<f64>,
}

#[derive(Debug, Clone)]
struct RestartOutcome {
    energy: f64,
    psi: PureState,
    iterations: usize,
    converged: bool,
}

/// Lowest eigenvector of `b`; inside a degenerate ground cluster, the
/// normalized projection of `psi` onto the cluster.
fn tangent_minimizer(b: &HermitianOperator, psi: &PureState) -> ComplexVector {
    let eig = b.eigh();
    let lowest = eig.values[0];
    let cluster = eig.values.iter().take_while(|&&v| v - lowest < TANGENT_DEGENERACY).count();
    let mut phi = eig.vector(0);
    if cluster > 1 {
        let mut proj = ComplexVector::zeros(psi.dim());
        for i in 0..cluster {
            let v = eig.vector(i);
            proj += &v * v.dotc(psi.amplitudes());
        }
        let norm = proj.norm();
        if norm > 1e-12 {
            phi = proj.unscale(norm);
        }
    }
    // align the phase so that <phi|psi> is real and non-negative
    let overlap = phi.dotc(psi.amplitudes());
    if overlap.norm() > 1e-14 {
        phi *= overlap / overlap.norm();
    }
    phi
}

fn stationarity_residual(b: &HermitianOperator, psi: &PureState) -> f64 {
    let bpsi = b.matrix() * psi.amplitudes();
    let mu = psi.amplitudes().dotc(&bpsi);
    (bpsi - psi.amplitudes() * mu).norm()
}

fn run_restart(
    a: &HermitianOperator,
    k: usize,
    n: usize,
    cfg: &MeanFieldConfig,
    index: usize,
) -> Result<RestartOutcome> {
    let mut psi = haar_state(&mut stream_rng(cfg.seed, index as u64), n);
    let mut f = product_energy(a, &psi, k)?;
    let scale = 1.0 + crate::ops::max_abs(a.matrix());
    let residual_tol = cfg.tol.sqrt() * scale;
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=cfg.max_iter {
        iterations = it;
        let b = effective_operator(a, &psi)?;
        let phi = tangent_minimizer(&b, &psi);
        let mut step = cfg.damping;
        let mut accepted = None;
        for _ in 0..60 {
            let cand = PureState::normalized(psi.amplitudes().scale(1.0 - step) + phi.scale(step))?;
            let fc = product_energy(a, &cand, k)?;
            if fc <= f {
                accepted = Some((cand, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((mut cand, mut fc)) = accepted else {
            // no descent along the tangent path
            converged = stationarity_residual(&b, &psi) <= residual_tol;
            break;
        };
        // Near a degenerate (e.g. quartic) minimum the full step barely moves;
        // extend along the same great circle while the energy keeps falling.
        if step == cfg.damping {
            for _ in 0..50 {
                step *= 2.0;
                let Ok(next) = PureState::normalized(psi.amplitudes().scale(1.0 - step) + phi.scale(step)) else {
                    break;
                };
                let f_next = product_energy(a, &next, k)?;
                if f_next >= fc {
                    break;
                }
                cand = next;
                fc = f_next;
            }
        }
        let delta = f - fc;
        psi = cand;
        f = fc;
        if delta <= cfg.tol {
            let b = effective_operator(a, &psi)?;
            if stationarity_residual(&b, &psi) <= residual_tol {
                converged = true;
                break;
            }
        }
    }
    psi.fix_phase_largest();
    let energy = product_energy(a, &psi, k)?;
    Ok(RestartOutcome { energy, psi, iterations, converged })
}

/// Minimizes `f(psi) = <psi^{(x) k}| a |psi^{(x) k}>` over unit vectors by
/// damped self-consistent iteration from `cfg.restarts` Haar-random starts.
/// Each step mixes the iterate with the lowest eigenvector of the effective
/// operator and halves the mixing until the energy does not increase.
pub fn mean_field_minimize(a: &HermitianOperator, k: usize, cfg: &MeanFieldConfig) -> Result<MeanFieldResult> {
    cfg.validate()?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let n = nth_root(a.dim(), k).ok_or(Error::DimensionMismatch { expected: a.dim(), found: k })?;
    let outcomes: Vec<RestartOutcome> =
        (0..cfg.restarts).into_par_iter().map(|i| run_restart(a, k, n, cfg, i)).collect::<Result<_>>()?;
    // lowest energy, then lowest restart index
    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(i, x), (j, y)| x.energy.total_cmp(&y.energy).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let restart_energies = outcomes.iter().map(|o| o.energy).collect();
    let winner = &outcomes[best];
    Ok(MeanFieldResult {
        energy: winner.energy,
        minimizer: winner.psi.clone(),
        iterations: winner.iterations,
        converged: winner.converged,
        restart_energies,
    })
}

/// Integer `n` with `n^k = dim`.
pub(crate) fn nth_root(dim: usize, k: usize) -> Option<usize> {
    let guess = (dim as f64).powf(1.0 / k as f64).round() as usize;
    (guess.saturating_sub(1)..=guess + 1).find(|&n| n > 0 && n.checked_pow(k as u32) == Some(dim))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BruteForce {
    /// Qubit Bloch-angle grid, `theta` in `[0, pi]` and `phi` in `[0, 2 pi)`.
    Grid { theta_steps: usize, phi_steps: usize },
    /// Haar-random states.
    Random { samples: usize, seed: u64 },
}

/// Minimum of `f` over a grid or a sample set; an upper bound on the true
/// minimum.
pub fn brute_force_minimize(a: &HermitianOperator, k: usize, mode: BruteForce) -> Result<f64> {
    let n = nth_root(a.dim(), k).ok_or(Error::DimensionMismatch { expected: a.dim(), found: k })?;
    let energies: Vec<f64> = match mode {
        BruteForce::Grid { theta_steps, phi_steps } => {
            if n != 2 {
                return Err(Error::InvalidArgument("grid mode needs n = 2".into()));
            }
            if theta_steps < 2 || phi_steps == 0 {
                return Err(Error::InvalidArgument("grid needs theta_steps >= 2 and phi_steps >= 1".into()));
            }
            (0..theta_steps)
                .into_par_iter()
                .flat_map_iter(|i| {
                    let theta = std::f64::consts::PI * i as f64 / (theta_steps - 1) as f64;
                    (0..phi_steps).map(move |j| {
                        let phi = 2.0 * std::f64::consts::PI * j as f64 / phi_steps as f64;
                        product_energy(a, &PureState::bloch(theta, phi), k).expect("dimensions checked")
                    })
                })
                .collect()
        }
        BruteForce::Random { samples, seed } => (0..samples)
            .into_par_iter()
            .map(|i| {
                let psi = haar_state(&mut stream_rng(seed, i as u64), n);
                product_energy(a, &psi, k).expect("dimensions checked")
            })
            .collect(),
    };
    energies.into_iter().min_by(f64::total_cmp).ok_or_else(|| Error::InvalidArgument("empty brute-force set".into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteNResult {
    pub particle_count: usize,
    /// Ground energy of `sum_{|mu|=k} A_mu` on the symmetric subspace divided
    /// by `C(N, k)`.
    pub energy_per_subset: f64,
    pub ground_multiplicity: usize,
}

/// Matrix of `A (x) I_{N-k}` in the N-particle Dicke basis. Because Dicke
/// vectors are permutation invariant this equals the compression of
/// `sum_{|mu|=k} A_mu` divided by `C(N, k)`.
///
/// Uses `phi_T = sum_S sqrt(M(S) M(T-S) / M(T)) phi_S (x) phi_{T-S}`, where
/// `M` counts basis strings with a given occupation, so only the k-particle
/// compression of `a` is needed.
pub fn symmetric_subset_operator(a: &HermitianOperator, n: usize, k: usize, count: usize) -> Result<ComplexMatrix> {
    if count < k {
        return Err(Error::InvalidArgument(format!("N = {count} is smaller than k = {k}")));
    }
    check_dim(checked_pow(n, k)?, a.dim())?;
    let labels = dicke_labels(n, count);
    if labels.len() > FINITE_N_BUDGET {
        return Err(Error::BudgetExceeded { size: labels.len(), budget: FINITE_N_BUDGET });
    }
    let small = compress_to_symmetric(a, &dicke_basis(n, k)?)?;
    let small_labels = dicke_labels(n, k);
    let index = label_index(&labels);
    let mut h = ComplexMatrix::zeros(labels.len(), labels.len());
    for rest in dicke_labels(n, count - k) {
        let members: Vec<(usize, usize, f64)> = small_labels
            .iter()
            .enumerate()
            .map(|(s, sl)| {
                let t: Vec<usize> = sl.counts().iter().zip(rest.counts()).map(|(x, y)| x + y).collect();
                let coef = (multinomial(sl.counts()) * multinomial(rest.counts()) / multinomial(&t)).sqrt();
                (s, index[&DickeLabel::new(t)], coef)
            })
            .collect();
        for &(si, ti, ci) in &members {
            for &(sj, tj, cj) in &members {
                h[(ti, tj)] += small.matrix()[(si, sj)] * (ci * cj);
            }
        }
    }
    Ok(hermitize(&h))
}

pub fn finite_n_energy(spec: &KLocalSpec, count: usize) -> Result<FiniteNResult> {
    let a = assemble_weighted(spec);
    let h = symmetric_subset_operator(&a, spec.n, spec.k, count)?;
    let eig = eigh(&h);
    Ok(FiniteNResult {
        particle_count: count,
        energy_per_subset: eig.values[0],
        ground_multiplicity: eig.ground_multiplicity(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeFinettiEntry {
    pub particle_count: usize,
    pub energy_per_subset: f64,
    /// `e_inf - e_N`, non-negative.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeFinettiReport {
    pub entries: Vec<DeFinettiEntry>,
    pub mean_field: MeanFieldResult,
}

/// Finite-N energies for `N = k ..= n_max` and the mean-field limit. Fails
/// with `Error::Consistency` if the sequence is not non-decreasing or exceeds
/// the mean-field value.
pub fn definetti_convergence(spec: &KLocalSpec, n_max: usize, cfg: &MeanFieldConfig) -> Result<DeFinettiReport> {
    if n_max < spec.k {
        return Err(Error::InvalidArgument(format!("N_max = {n_max} is smaller than k = {}", spec.k)));
    }
    let finite: Vec<FiniteNResult> =
        (spec.k..=n_max).into_par_iter().map(|count| finite_n_energy(spec, count)).collect::<Result<_>>()?;
    for pair in finite.windows(2) {
        if pair[0].energy_per_subset > pair[1].energy_per_subset + CONSISTENCY_TOL {
            return Err(Error::Consistency(format!(
                "energy per subset decreases from N = {} ({}) to N = {} ({})",
                pair[0].particle_count, pair[0].energy_per_subset, pair[1].particle_count, pair[1].energy_per_subset
            )));
        }
    }
    let mean_field = mean_field_minimize(&assemble_weighted(spec), spec.k, cfg)?;
    let last = finite.last().expect("n_max >= k");
    if last.energy_per_subset > mean_field.energy + CONSISTENCY_TOL {
        return Err(Error::Consistency(format!(
            "finite-N energy {} at N = {} exceeds the mean-field energy {}",
            last.energy_per_subset, last.particle_count, mean_field.energy
        )));
    }
    let entries = finite
        .into_iter()
        .map(|r| DeFinettiEntry {
            particle_count: r.particle_count,
            energy_per_subset: r.energy_per_subset,
            gap: mean_field.energy - r.energy_per_subset,
        })
        .collect();
    Ok(DeFinettiReport { entries, mean_field })
}
