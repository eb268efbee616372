//! JSON encodings. A complex number is `[re, im]`, a vector is an array of
//! complex numbers and a matrix is an array of rows.
//!
//! Parsing happens in two steps: serde turns text into the `*Json` structs
//! (shape errors), then `into_*` validates dimensions and physics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{KLocalSpec, KLocalTerm};
use crate::ops::{ComplexMatrix, ComplexVector, DensityMatrix, HermitianOperator, PureState, C64};
use crate::range::ObservableTuple;
use crate::separable::{PureProductTerm, SeparableDecomposition, SymmetricProductDecomposition};

pub type JsonComplex = [f64; 2];

pub fn vector_to_json(v: &ComplexVector) -> Vec<JsonComplex> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_json(v: &[JsonComplex]) -> ComplexVector {
    ComplexVector::from_iterator(v.len(), v.iter().map(|&[re, im]| C64::new(re, im)))
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Vec<Vec<JsonComplex>> {
    m.row_iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn matrix_from_json(rows: &[Vec<JsonComplex>]) -> Result<ComplexMatrix> {
    let dim = rows.len();
    if dim == 0 {
        return Err(Error::InvalidArgument("matrix has no rows".into()));
    }
    for row in rows {
        if row.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
        }
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedMatrixJson {
    pub name: String,
    pub matrix: Vec<Vec<JsonComplex>>,
}

impl NamedMatrixJson {
    fn into_term(self) -> Result<KLocalTerm> {
        let operator = HermitianOperator::new(matrix_from_json(&self.matrix)?)?;
        Ok(KLocalTerm { name: self.name, operator })
    }
}

/// `{"n", "k", "terms": [{"name", "matrix"}], "x"}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KLocalSpecJson {
    pub n: usize,
    pub k: usize,
    pub terms: Vec<NamedMatrixJson>,
    pub x: Vec<f64>,
}

impl KLocalSpecJson {
    pub fn into_spec(self) -> Result<KLocalSpec> {
        let terms = self.terms.into_iter().map(NamedMatrixJson::into_term).collect::<Result<_>>()?;
        KLocalSpec::new(self.n, self.k, terms, self.x)
    }
}

/// `{"n", "k", "observables": [{"name", "matrix"}]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableTupleJson {
    pub n: usize,
    pub k: usize,
    pub observables: Vec<NamedMatrixJson>,
}

impl ObservableTupleJson {
    pub fn into_tuple(self) -> Result<ObservableTuple> {
        let terms = self.observables.into_iter().map(NamedMatrixJson::into_term).collect::<Result<_>>()?;
        ObservableTuple::from_terms(self.n, self.k, terms)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductTermJson {
    pub weight: f64,
    pub factors: Vec<Vec<JsonComplex>>,
}

/// `{"n", "N", "terms": [{"weight", "factors": [vector, ...]}]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionJson {
    pub n: usize,
    #[serde(rename = "N")]
    pub particle_count: usize,
    pub terms: Vec<ProductTermJson>,
}

impl DecompositionJson {
    pub fn into_decomposition(self) -> Result<SeparableDecomposition> {
        let terms = self
            .terms
            .into_iter()
            .map(|t| {
                let factors = t.factors.iter().map(|f| PureState::new(vector_from_json(f))).collect::<Result<_>>()?;
                Ok(PureProductTerm { weight: t.weight, factors })
            })
            .collect::<Result<_>>()?;
        SeparableDecomposition::new(self.n, self.particle_count, terms)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedStateJson {
    pub weight: f64,
    pub state: Vec<JsonComplex>,
}

/// `{"n", "N", "terms": [{"weight", "state"}]}`; `state` is the one-particle
/// vector whose N-th tensor power is the term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricDecompositionJson {
    pub n: usize,
    #[serde(rename = "N")]
    pub particle_count: usize,
    pub terms: Vec<WeightedStateJson>,
}

impl From<&SymmetricProductDecomposition> for SymmetricDecompositionJson {
    fn from(d: &SymmetricProductDecomposition) -> Self {
        Self {
            n: d.n(),
            particle_count: d.particle_count(),
            terms: d
                .terms()
                .iter()
                .map(|t| WeightedStateJson { weight: t.weight, state: vector_to_json(t.state.amplitudes()) })
                .collect(),
        }
    }
}

/// `{"n", "N", "matrix"}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityMatrixJson {
    pub n: usize,
    #[serde(rename = "N")]
    pub particle_count: usize,
    pub matrix: Vec<Vec<JsonComplex>>,
}

impl DensityMatrixJson {
    pub fn into_state(self) -> Result<(usize, usize, DensityMatrix)> {
        let rho = DensityMatrix::new(matrix_from_json(&self.matrix)?)?;
        let dim = crate::ops::checked_pow(self.n, self.particle_count)?;
        crate::error::check_dim(dim, rho.dim())?;
        Ok((self.n, self.particle_count, rho))
    }
}
