//! Face combinatorics of a product of simplices `Δ^{n_1} × … × Δ^{n_m}`.
//!
//! Facets are `F^i_k` for a factor `i` and an index `0 ≤ k ≤ n_i`; the facet
//! `F^i_k` is the product of the `k`-th codimension-one face of `Δ^{n_i}` with
//! the remaining simplices. A vertex is a choice `(j_1, …, j_m)`, and it lies
//! on every facet except the `F^i_{j_i}`.
//!
//! Factors are numbered from zero in code. The canonical facet order is
//! factor-major, index-ascending, and every matrix and polynomial in the crate
//! indexes against it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<usize>")]
pub struct SimplexProduct {
    dims: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacetId {
    pub factor: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub choices: Vec<usize>,
}

impl FacetId {
    pub fn new(factor: usize, index: usize) -> Self {
        FacetId { factor, index }
    }
}

impl SimplexProduct {
    pub fn new(dims: &[i64]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptyDims);
        }
        let mut out = Vec::with_capacity(dims.len());
        for (factor, &dim) in dims.iter().enumerate() {
            if dim < 1 {
                return Err(Error::NonPositiveDim { factor, dim });
            }
            out.push(dim as usize);
        }
        Ok(SimplexProduct { dims: out })
    }

    pub fn from_dims(dims: &[usize]) -> Result<Self> {
        let signed: Vec<i64> = dims.iter().map(|&d| d as i64).collect();
        Self::new(&signed)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of simplex factors `m`.
    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    /// Total dimension `n = Σ n_i`.
    pub fn dimension(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn facet_count(&self) -> usize {
        self.dimension() + self.factors()
    }

    pub fn vertex_count(&self) -> usize {
        self.dims.iter().map(|&d| d + 1).product()
    }

    pub fn is_cube(&self) -> bool {
        self.dims.iter().all(|&d| d == 1)
    }

    /// Offset of factor `i`'s block in a length-`n` row vector.
    pub fn block_offset(&self, factor: usize) -> usize {
        self.dims[..factor].iter().sum()
    }

    /// Column of `(factor, k)` with `1 ≤ k ≤ n_factor` in a length-`n` row.
    pub fn column(&self, factor: usize, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.dims[factor]);
        self.block_offset(factor) + k - 1
    }

    pub fn facets(&self) -> Vec<FacetId> {
        self.dims
            .iter()
            .enumerate()
            .flat_map(|(factor, &d)| (0..=d).map(move |index| FacetId { factor, index }))
            .collect()
    }

    pub fn is_vertex(&self, v: &VertexId) -> bool {
        v.choices.len() == self.factors() && v.choices.iter().zip(&self.dims).all(|(&j, &d)| j <= d)
    }

    /// The `n` facets containing `v`, in canonical order.
    pub fn facets_at_vertex(&self, v: &VertexId) -> Vec<FacetId> {
        assert!(self.is_vertex(v), "vertex {:?} not in {:?}", v.choices, self.dims);
        self.facets()
            .into_iter()
            .filter(|f| f.index != v.choices[f.factor])
            .collect()
    }

    /// All vertices in lexicographic order of `(j_1, …, j_m)`.
    pub fn vertices(&self) -> Vertices<'_> {
        Vertices {
            dims: &self.dims,
            next: Some(vec![0; self.dims.len()]),
        }
    }

    /// Minimal non-faces: the full facet set of each factor.
    pub fn sr_generators(&self) -> Vec<Vec<FacetId>> {
        self.dims
            .iter()
            .enumerate()
            .map(|(factor, &d)| (0..=d).map(|index| FacetId { factor, index }).collect())
            .collect()
    }

    /// The product with factors reordered so that new factor `p` is old
    /// factor `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> SimplexProduct {
        SimplexProduct {
            dims: perm.iter().map(|&i| self.dims[i]).collect(),
        }
    }
}

impl TryFrom<Vec<i64>> for SimplexProduct {
    type Error = Error;

    fn try_from(dims: Vec<i64>) -> Result<Self> {
        SimplexProduct::new(&dims)
    }
}

impl From<SimplexProduct> for Vec<usize> {
    fn from(p: SimplexProduct) -> Vec<usize> {
        p.dims
    }
}

pub struct Vertices<'a> {
    dims: &'a [usize],
    next: Option<Vec<usize>>,
}

impl Iterator for Vertices<'_> {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] < self.dims[i] {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(VertexId { choices: current })
    }
}
