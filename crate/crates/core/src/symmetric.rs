//! Permutations of tensor factors, (anti)symmetrizers, and the Dicke basis of
//! the symmetric subspace.

use std::collections::HashMap;

use crate::error::{check_dim, Error, Result};
use crate::ops::{
    c, checked_pow, digits, hermitize, place_values, support_residual, ComplexMatrix, ComplexVector, DensityMatrix,
    HermitianOperator, Projector,
};

/// Largest factor count for which the symmetrizer is summed over all `N!`
/// permutations.
pub const SYMMETRIZER_MAX_FACTORS: usize = 8;

/// Largest full tensor dimension `n^N` for dense projector construction.
pub const MAX_DENSE_DIM: usize = 4096;

/// Largest full tensor dimension for which the Dicke isometry is materialized.
pub const MAX_ISOMETRY_DIM: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

/// A bijection of `{0, ..., N-1}`; position `i` is sent to `images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(len: usize) -> Self {
        Self { images: (0..len).collect() }
    }

    pub fn transposition(len: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..len).collect();
        if a >= len || b >= len {
            return Err(Error::InvalidArgument(format!("transposition ({a} {b}) out of range")));
        }
        images.swap(a, b);
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Self { images: inv }
    }

    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.len()];
        let mut cycles = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
            }
        }
        if (self.len() - cycles).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// All permutations of `len` elements in lexicographic order of images.
    pub fn all(len: usize) -> Vec<Self> {
        let mut current: Vec<usize> = (0..len).collect();
        let mut out = vec![Self { images: current.clone() }];
        // next_permutation
        loop {
            let Some(i) = (1..len).rev().find(|&i| current[i - 1] < current[i]) else {
                return out;
            };
            let j = (i..len).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
            out.push(Self { images: current.clone() });
        }
    }

    /// Image of a tensor basis index: the factor at position `i` moves to
    /// position `images[i]`.
    fn map_index(&self, index: usize, n: usize, place: &[usize]) -> usize {
        digits(index, n, self.len()).iter().enumerate().map(|(i, &b)| b * place[self.images[i]]).sum()
    }
}

/// Action of a permutation on `(C^n)^{(x) N}`: `|b_0 ... b_{N-1}>` is sent to
/// the basis vector whose factor `pi(i)` is `b_i`.
pub fn permute_factors(v: &ComplexVector, pi: &Permutation, n: usize) -> Result<ComplexVector> {
    let count = pi.len();
    check_dim(checked_pow(n, count)?, v.len())?;
    let place = place_values(n, count);
    let mut out = ComplexVector::zeros(v.len());
    for (b, &amp) in v.iter().enumerate() {
        out[pi.map_index(b, n, &place)] = amp;
    }
    Ok(out)
}

pub fn permutation_matrix(pi: &Permutation, n: usize) -> Result<ComplexMatrix> {
    let dim = checked_pow(n, pi.len())?;
    let place = place_values(n, pi.len());
    let mut m = ComplexMatrix::zeros(dim, dim);
    for b in 0..dim {
        m[(pi.map_index(b, n, &place), b)] = c(1.0, 0.0);
    }
    Ok(m)
}

/// `(1/N!) sum_pi pi` or `(1/N!) sum_pi sgn(pi) pi`, summed explicitly over
/// all permutations. Limited to `N <= SYMMETRIZER_MAX_FACTORS` and
/// `n^N <= MAX_DENSE_DIM`.
pub fn symmetrizer(n: usize, count: usize, parity: Parity) -> Result<Projector> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidArgument("n and N must be positive".into()));
    }
    if count > SYMMETRIZER_MAX_FACTORS {
        return Err(Error::BudgetExceeded { size: count, budget: SYMMETRIZER_MAX_FACTORS });
    }
    let dim = checked_pow(n, count)?;
    if dim > MAX_DENSE_DIM {
        return Err(Error::BudgetExceeded { size: dim, budget: MAX_DENSE_DIM });
    }
    let place = place_values(n, count);
    let perms = Permutation::all(count);
    let weight = 1.0 / perms.len() as f64;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for pi in &perms {
        let w = match parity {
            Parity::Symmetric => weight,
            Parity::Antisymmetric => weight * pi.sign() as f64,
        };
        for b in 0..dim {
            m[(pi.map_index(b, n, &place), b)] += c(w, 0.0);
        }
    }
    Ok(Projector::from_matrix_unchecked(hermitize(&m)))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `N! / prod_i T_i!`, the number of basis strings with occupation `T`.
pub fn multinomial(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    counts.iter().fold(factorial(total), |acc, &t| acc / factorial(t))
}

/// Occupation numbers `T = (T_0, ..., T_{n-1})` of a symmetric basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DickeLabel(Vec<usize>);

impl DickeLabel {
    pub fn new(counts: Vec<usize>) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Occupation numbers of the tensor basis string with the given index.
    pub fn of_index(index: usize, n: usize, count: usize) -> Self {
        let mut counts = vec![0; n];
        for d in digits(index, n, count) {
            counts[d] += 1;
        }
        Self(counts)
    }

    /// Canonical basis string `|0...0 1...1 ...>` with this occupation.
    pub fn canonical_string(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(level, &t)| std::iter::repeat_n(level, t)).collect()
    }
}

/// All labels with `n` entries summing to `count`, lexicographically ascending.
pub fn dicke_labels(n: usize, count: usize) -> Vec<DickeLabel> {
    fn rec(n: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<DickeLabel>) {
        if prefix.len() + 1 == n {
            prefix.push(remaining);
            out.push(DickeLabel(prefix.clone()));
            prefix.pop();
            return;
        }
        for t in 0..=remaining {
            prefix.push(t);
            rec(n, remaining - t, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(n + count - 1, count));
    if n > 0 {
        rec(n, count, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

pub(crate) fn label_index(labels: &[DickeLabel]) -> HashMap<DickeLabel, usize> {
    labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect()
}

/// Isometry from the symmetric subspace onto `(C^n)^{(x) N}` whose columns are
/// the Dicke vectors.
#[derive(Debug, Clone)]
pub struct SymmetricIsometry {
    n: usize,
    count: usize,
    labels: Vec<DickeLabel>,
    columns: ComplexMatrix,
}

impl SymmetricIsometry {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn particle_count(&self) -> usize {
        self.count
    }

    pub fn labels(&self) -> &[DickeLabel] {
        &self.labels
    }

    pub fn columns(&self) -> &ComplexMatrix {
        &self.columns
    }

    pub fn sym_dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn full_dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn projector(&self) -> Projector {
        Projector::from_orthonormal_columns(&self.columns)
    }

    /// `||(I - V V^dagger) v||`.
    pub fn residual(&self, v: &ComplexVector) -> f64 {
        let coeffs = self.columns.adjoint() * v;
        (v - &self.columns * coeffs).norm()
    }
}

/// Dicke basis with columns in ascending lexicographic order of `T`. Each
/// string with occupation `T` carries amplitude `c_T * prod_i T_i!`, where
/// `c_T = (N! prod_i T_i!)^{-1/2}` and the factor `prod_i T_i!` counts the
/// permutations fixing the string.
pub fn dicke_basis(n: usize, count: usize) -> Result<SymmetricIsometry> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidArgument("n and N must be positive".into()));
    }
    let dim = checked_pow(n, count)?;
    if dim > MAX_ISOMETRY_DIM {
        return Err(Error::BudgetExceeded { size: dim, budget: MAX_ISOMETRY_DIM });
    }
    let labels = dicke_labels(n, count);
    let index = label_index(&labels);
    let amplitude: Vec<f64> = labels
        .iter()
        .map(|l| {
            let fixers: f64 = l.counts().iter().map(|&t| factorial(t)).product();
            fixers / (factorial(count) * fixers).sqrt()
        })
        .collect();
    let mut columns = ComplexMatrix::zeros(dim, labels.len());
    for b in 0..dim {
        let col = index[&DickeLabel::of_index(b, n, count)];
        columns[(b, col)] = c(amplitude[col], 0.0);
    }
    Ok(SymmetricIsometry { n, count, labels, columns })
}

/// `V^dagger a V`.
pub fn compress_to_symmetric(a: &HermitianOperator, v: &SymmetricIsometry) -> Result<HermitianOperator> {
    check_dim(v.full_dim(), a.dim())?;
    let m = v.columns.adjoint() * a.matrix() * &v.columns;
    Ok(HermitianOperator::from_hermitian_part(&m))
}

pub fn is_symmetric_state(rho: &DensityMatrix, n: usize, count: usize, parity: Parity, eps: f64) -> Result<bool> {
    check_dim(checked_pow(n, count)?, rho.dim())?;
    Ok(parity_residual(rho.matrix(), n, count, parity)? <= eps)
}

/// `||(I - P) m||_max` for the (anti)symmetrizer `P`.
pub(crate) fn parity_residual(m: &ComplexMatrix, n: usize, count: usize, parity: Parity) -> Result<f64> {
    match parity {
        Parity::Symmetric if count > SYMMETRIZER_MAX_FACTORS || m.nrows() > MAX_DENSE_DIM => {
            let v = dicke_basis(n, count)?;
            let proj = &v.columns * (v.columns.adjoint() * m);
            Ok(crate::ops::max_abs(&(m - proj)))
        }
        _ => Ok(support_residual(m, &symmetrizer(n, count, parity)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{kron, max_abs, pauli, trace, PureState, C64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vector(rng: &mut impl Rng, dim: usize) -> ComplexVector {
        ComplexVector::from_fn(dim, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn basis_vec(dim: usize, entries: &[(usize, f64)]) -> ComplexVector {
        let mut v = ComplexVector::zeros(dim);
        for &(i, a) in entries {
            v[i] = c(a, 0.0);
        }
        v
    }

    fn rank(p: &Projector) -> usize {
        p.matrix().clone().symmetric_eigenvalues().iter().filter(|&&l| l > 0.5).count()
    }

    #[test]
    fn permutation_basics() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert_eq!(Permutation::all(3).len(), 6);
        assert_eq!(Permutation::transposition(3, 0, 2).unwrap().sign(), -1);
        assert_eq!(Permutation::new(vec![1, 2, 0]).unwrap().sign(), 1);
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(4));
    }

    #[test]
    fn permute_identity_and_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = random_vector(&mut rng, 8);
        assert_eq!(permute_factors(&v, &Permutation::identity(3), 2).unwrap(), v);
        let swap = Permutation::transposition(2, 0, 1).unwrap();
        let ket01 = basis_vec(4, &[(1, 1.0)]);
        assert_eq!(permute_factors(&ket01, &swap, 2).unwrap(), basis_vec(4, &[(2, 1.0)]));
        assert!(permute_factors(&ket01, &swap, 3).is_err());
    }

    #[test]
    fn permute_moves_factor_to_image_position() {
        // |0 1 2> with pi = (0->1, 1->2, 2->0) becomes |2 0 1>
        let pi = Permutation::new(vec![1, 2, 0]).unwrap();
        let v = basis_vec(27, &[(5, 1.0)]);
        let w = permute_factors(&v, &pi, 3).unwrap();
        assert_eq!(w[2 * 9 + 1], c(1.0, 0.0));
    }

    #[test]
    fn permutation_action_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = random_vector(&mut rng, 27);
        for pi in Permutation::all(3) {
            for tau in Permutation::all(3) {
                let two_step = permute_factors(&permute_factors(&v, &pi, 3).unwrap(), &tau, 3).unwrap();
                let direct = permute_factors(&v, &tau.compose(&pi), 3).unwrap();
                assert!((two_step - direct).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn two_qubit_symmetrizers() {
        let s = 1.0 / 2f64.sqrt();
        let sym = symmetrizer(2, 2, Parity::Symmetric).unwrap();
        assert_eq!(rank(&sym), 3);
        for v in [basis_vec(4, &[(0, 1.0)]), basis_vec(4, &[(3, 1.0)]), basis_vec(4, &[(1, s), (2, s)])] {
            assert!((sym.matrix() * &v - &v).norm() < 1e-12);
        }
        let anti = symmetrizer(2, 2, Parity::Antisymmetric).unwrap();
        let singlet = basis_vec(4, &[(1, s), (2, -s)]);
        assert!(max_abs(&(anti.matrix() - &singlet * singlet.adjoint())) < 1e-12);
    }

    #[test]
    fn three_qubit_ranks() {
        let sym = symmetrizer(2, 3, Parity::Symmetric).unwrap();
        let anti = symmetrizer(2, 3, Parity::Antisymmetric).unwrap();
        assert_eq!(binomial(4, 3), 4);
        assert_eq!(rank(&sym), 4);
        assert_eq!(rank(&anti), 0);
        assert!(max_abs(anti.matrix()) < 1e-12);
        assert!(Projector::new(anti.matrix().clone()).is_ok());
    }

    #[test]
    fn symmetrizer_budget() {
        assert!(matches!(symmetrizer(2, 9, Parity::Symmetric), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(symmetrizer(3, 8, Parity::Symmetric), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn dicke_two_qubits() {
        let v = dicke_basis(2, 2).unwrap();
        let labels: Vec<_> = v.labels().iter().map(|l| l.counts().to_vec()).collect();
        assert_eq!(labels, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let s = 1.0 / 2f64.sqrt();
        let expected = [basis_vec(4, &[(3, 1.0)]), basis_vec(4, &[(1, s), (2, s)]), basis_vec(4, &[(0, 1.0)])];
        for (j, e) in expected.iter().enumerate() {
            assert!((v.columns().column(j) - e).norm() < 1e-12);
        }
    }

    #[test]
    fn dicke_column_from_permutation_sum() {
        // expand c_T sum_sigma sigma(|0 0 1>) over all 6 permutations
        let label = DickeLabel::new(vec![2, 1]);
        let c_t = 1.0 / (6.0f64 * 2.0 * 1.0).sqrt();
        let seed_index = 1; // |001>
        let mut oracle = ComplexVector::zeros(8);
        for pi in Permutation::all(3) {
            oracle += permute_factors(&basis_vec(8, &[(seed_index, 1.0)]), &pi, 2).unwrap().scale(c_t);
        }
        let t = 1.0 / 3f64.sqrt();
        assert!((&oracle - basis_vec(8, &[(1, t), (2, t), (4, t)])).norm() < 1e-12);
        let v = dicke_basis(2, 3).unwrap();
        let col = v.labels().iter().position(|l| *l == label).unwrap();
        assert!((v.columns().column(col) - oracle).norm() < 1e-12);
        assert_eq!(label.canonical_string(), vec![0, 0, 1]);
    }

    #[test]
    fn dicke_isometry_properties() {
        for n in 1..=3 {
            for count in 1..=4 {
                let v = dicke_basis(n, count).unwrap();
                assert_eq!(v.sym_dim(), binomial(n + count - 1, count));
                let gram = v.columns().adjoint() * v.columns();
                assert!(max_abs(&(gram - ComplexMatrix::identity(v.sym_dim(), v.sym_dim()))) < 1e-12);
                let sym = symmetrizer(n, count, Parity::Symmetric).unwrap();
                assert!(max_abs(&(v.projector().matrix() - sym.matrix())) < 1e-10);
            }
        }
    }

    #[test]
    fn dicke_columns_are_sz_eigenvectors() {
        for count in 1..=5 {
            let v = dicke_basis(2, count).unwrap();
            let dim = v.full_dim();
            let mut sz = ComplexMatrix::zeros(dim, dim);
            for b in 0..dim {
                let ones = digits(b, 2, count).iter().filter(|&&d| d == 1).count();
                sz[(b, b)] = c(count as f64 - 2.0 * ones as f64, 0.0);
            }
            for (j, label) in v.labels().iter().enumerate() {
                let k = label.counts()[1];
                let col = v.columns().column(j).into_owned();
                let expected = (count as f64) - 2.0 * k as f64;
                assert!((&sz * &col - col.scale(expected)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn compression_examples() {
        let v = dicke_basis(2, 2).unwrap();
        let id = compress_to_symmetric(&HermitianOperator::identity(4), &v).unwrap();
        assert!(max_abs(&(id.matrix() - ComplexMatrix::identity(3, 3))) < 1e-12);

        let zz = pauli::z().kron(&pauli::z());
        let cz = compress_to_symmetric(&zz, &v).unwrap();
        // 3x3 oracle: <col_i| zz |col_j> with zz diagonal (1, -1, -1, 1)
        let diag = [1.0, -1.0, -1.0, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                let e: C64 =
                    diag.iter().enumerate().map(|(b, d)| v.columns()[(b, i)].conj() * v.columns()[(b, j)] * *d).sum();
                assert!((cz.matrix()[(i, j)] - e).norm() < 1e-12);
            }
        }
        for (i, e) in [1.0, -1.0, 1.0].into_iter().enumerate() {
            assert!((cz.matrix()[(i, i)].re - e).abs() < 1e-12);
        }
        assert!(compress_to_symmetric(&pauli::z(), &v).is_err());
    }

    #[test]
    fn compression_of_invariant_operator_keeps_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = ComplexMatrix::from_fn(3, 3, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let h = HermitianOperator::from_hermitian_part(&g);
        let id = HermitianOperator::identity(3);
        let a = &h.kron(&id) + &id.kron(&h);
        let v = dicke_basis(3, 2).unwrap();
        let comp = compress_to_symmetric(&a, &v).unwrap();
        let full = a.eigh().values;
        for lambda in comp.eigh().values {
            assert!(full.iter().any(|&mu| (mu - lambda).abs() < 1e-9));
        }
        let random = HermitianOperator::from_hermitian_part(&ComplexMatrix::from_fn(9, 9, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        }));
        let comp = compress_to_symmetric(&random, &v).unwrap();
        assert!(crate::ops::hermitian_deviation(comp.matrix()) < 1e-10);
    }

    #[test]
    fn symmetric_state_checks() {
        let psi = PureState::bloch(1.2, 0.4);
        let rho = psi.density();
        let rho3 = rho.kron(&rho).kron(&rho);
        assert!(is_symmetric_state(&rho3, 2, 3, Parity::Symmetric, 1e-10).unwrap());

        let s = 1.0 / 2f64.sqrt();
        let singlet = PureState::new(basis_vec(4, &[(1, s), (2, -s)])).unwrap().density();
        assert!(is_symmetric_state(&singlet, 2, 2, Parity::Antisymmetric, 1e-10).unwrap());
        assert!(!is_symmetric_state(&singlet, 2, 2, Parity::Symmetric, 1e-10).unwrap());

        let ket01 = PureState::basis(4, 1).density();
        // (I - P_sym)|01><01| has entries +-1/2, likewise for P_anti
        for parity in [Parity::Symmetric, Parity::Antisymmetric] {
            let r = parity_residual(ket01.matrix(), 2, 2, parity).unwrap();
            assert!((r - 0.5).abs() < 1e-12);
            assert!(!is_symmetric_state(&ket01, 2, 2, parity, 1e-10).unwrap());
        }
        assert!(is_symmetric_state(&ket01, 2, 3, Parity::Symmetric, 1e-10).is_err());
        assert!((trace(rho3.matrix()).re - 1.0).abs() < 1e-12);
        let _ = kron(rho.matrix(), rho.matrix());
    }

    #[test]
    fn sym_times_anti_is_zero() {
        for n in 2..=3 {
            for count in 2..=4 {
                let s = symmetrizer(n, count, Parity::Symmetric).unwrap();
                let a = symmetrizer(n, count, Parity::Antisymmetric).unwrap();
                assert!(max_abs(&(s.matrix() * a.matrix())) < 1e-10);
                assert_eq!(rank(&a), binomial(n, count));
            }
        }
    }

    #[test]
    fn symmetrizer_invariance_under_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for count in 2..=4 {
            let dim = 2usize.pow(count as u32);
            let s = symmetrizer(2, count, Parity::Symmetric).unwrap();
            let a = symmetrizer(2, count, Parity::Antisymmetric).unwrap();
            let v = random_vector(&mut rng, dim);
            let sv = s.matrix() * &v;
            let av = a.matrix() * &v;
            for pi in Permutation::all(count) {
                assert!((permute_factors(&sv, &pi, 2).unwrap() - &sv).norm() < 1e-10);
                let signed = av.scale(pi.sign() as f64);
                assert!((permute_factors(&av, &pi, 2).unwrap() - signed).norm() < 1e-10);
            }
        }
    }
}
