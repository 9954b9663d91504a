//! Reduced vector matrices.
//!
//! Over a product of simplices `P = Δ^{n_1} × … × Δ^{n_m}` a characteristic
//! function is normalized at the base vertex `v_{0…0}`: the facets
//! `F^j_k` (`k ≥ 1`) meeting it are sent to the standard basis, and only the
//! images `a_i = λ(F^i_0)` of the `m` remaining facets are recorded. Row `i`
//! of a [`ReducedVectorMatrix`] is `a_i`, a length-`n` vector blocked as
//! `(a_i^1, …, a_i^m)` with `a_i^j ∈ Z^{n_j}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{SimplexProduct, VertexId};

/// Upper bound on the number of factors accepted by [`ReducedVectorMatrix::triangularize`].
pub const MAX_FACTORS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Small covers: entries in `Z/2`.
    #[serde(rename = "Z2")]
    ModTwo,
    /// Quasitoric manifolds: entries in `Z`.
    #[serde(rename = "Z")]
    Integer,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::ModTwo => "Z2",
            Mode::Integer => "Z",
        }
    }

    fn is_unit(self, det: i64) -> bool {
        match self {
            Mode::ModTwo => det.rem_euclid(2) == 1,
            Mode::Integer => det == 1 || det == -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedVectorMatrix {
    polytope: SimplexProduct,
    mode: Mode,
    rows: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexFailure {
    pub vertex: Vec<usize>,
    pub determinant: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub failures: Vec<VertexFailure>,
}

/// A factor permutation together with the conjugated matrix.
///
/// New factor `p` is old factor `permutation[p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangularization {
    pub permutation: Vec<usize>,
    pub matrix: ReducedVectorMatrix,
}

impl ReducedVectorMatrix {
    pub fn new(polytope: SimplexProduct, mode: Mode, rows: Vec<Vec<i64>>) -> Result<Self> {
        let m = polytope.factors();
        let n = polytope.dimension();
        if rows.len() != m {
            return Err(Error::ShapeMismatch(format!(
                "expected {m} rows (one per factor), got {}",
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if mode == Mode::ModTwo {
                if let Some((column, &value)) = row.iter().enumerate().find(|(_, &x)| x != 0 && x != 1) {
                    return Err(Error::EntryOutOfRange { row: i, column, value });
                }
            }
        }
        for (factor, &d) in polytope.dims().iter().enumerate() {
            for k in 1..=d {
                let column = polytope.column(factor, k);
                let value = rows[factor][column];
                if value != 1 {
                    return Err(Error::DiagonalNotOne { factor, column, value });
                }
            }
        }
        Ok(ReducedVectorMatrix { polytope, mode, rows })
    }

    /// Convenience constructor from raw dims.
    pub fn parse(dims: &[i64], mode: Mode, rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(SimplexProduct::new(dims)?, mode, rows)
    }

    /// The matrix with all off-diagonal blocks zero.
    pub fn identity(polytope: SimplexProduct, mode: Mode) -> Self {
        let n = polytope.dimension();
        let mut rows = vec![vec![0; n]; polytope.factors()];
        for (i, row) in rows.iter_mut().enumerate() {
            for k in 1..=polytope.dims()[i] {
                row[polytope.column(i, k)] = 1;
            }
        }
        ReducedVectorMatrix { polytope, mode, rows }
    }

    pub fn polytope(&self) -> &SimplexProduct {
        &self.polytope
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `a^j_{ik}`: row `i`, column `k` (1-based) of block `j`.
    pub fn entry(&self, row: usize, block: usize, k: usize) -> i64 {
        self.rows[row][self.polytope.column(block, k)]
    }

    /// `A_{k_1…k_m}` restricted to the factors in `support` (principal
    /// submatrix on those rows and block columns).
    fn sub_block(&self, ks: &[usize], support: &[usize]) -> Vec<Vec<i64>> {
        support
            .iter()
            .map(|&r| support.iter().map(|&c| self.entry(r, c, ks[c])).collect())
            .collect()
    }

    /// Determinant of the vertex condition at `v`: the principal minor of
    /// `A_{j_1…j_m}` on the factors with `j_i ≥ 1`.
    pub fn vertex_determinant(&self, v: &VertexId) -> i64 {
        let support: Vec<usize> = (0..v.choices.len()).filter(|&i| v.choices[i] >= 1).collect();
        let det = determinant(&self.sub_block(&v.choices, &support));
        match self.mode {
            Mode::ModTwo => det.rem_euclid(2),
            Mode::Integer => det,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let failures: Vec<VertexFailure> = self
            .polytope
            .vertices()
            .filter_map(|v| {
                let det = self.vertex_determinant(&v);
                (!self.mode.is_unit(det)).then_some(VertexFailure {
                    vertex: v.choices,
                    determinant: det,
                })
            })
            .collect();
        ValidationReport {
            valid: failures.is_empty(),
            failures,
        }
    }

    pub fn is_characteristic(&self) -> bool {
        self.polytope
            .vertices()
            .all(|v| self.mode.is_unit(self.vertex_determinant(&v)))
    }

    pub fn require_characteristic(&self) -> Result<()> {
        let report = self.validate();
        if report.valid {
            Ok(())
        } else {
            Err(Error::NotCharacteristic(report.failures.len()))
        }
    }

    /// Whether every principal minor of every `A_{k_1…k_m}` is exactly 1
    /// (odd, in mod-two mode).
    pub fn principal_minors_all_one(&self) -> bool {
        let dims = self.polytope.dims();
        let m = dims.len();
        let mut ks = vec![1usize; m];
        loop {
            for mask in 1u32..(1 << m) {
                let support: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
                // Minors only depend on the k's inside the support; skip repeats.
                if (0..m).any(|i| mask & (1 << i) == 0 && ks[i] != 1) {
                    continue;
                }
                let det = determinant(&self.sub_block(&ks, &support));
                let one = match self.mode {
                    Mode::ModTwo => det.rem_euclid(2) == 1,
                    Mode::Integer => det == 1,
                };
                if !one {
                    return false;
                }
            }
            // advance the k-tuple
            let mut i = m;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                if ks[i] < dims[i] {
                    ks[i] += 1;
                    break;
                }
                ks[i] = 1;
            }
        }
    }

    /// Whether block `(row, block)` has a nonzero entry.
    pub fn block_nonzero(&self, row: usize, block: usize) -> bool {
        let off = self.polytope.block_offset(block);
        self.rows[row][off..off + self.polytope.dims()[block]]
            .iter()
            .any(|&x| x != 0)
    }

    /// All blocks strictly below the diagonal vanish.
    pub fn is_unipotent_upper_triangular(&self) -> bool {
        let m = self.polytope.factors();
        (0..m).all(|r| (0..r).all(|c| !self.block_nonzero(r, c)))
    }

    /// Conjugate by a factor permutation: new factor `p` is old factor `perm[p]`.
    pub fn conjugate(&self, perm: &[usize]) -> ReducedVectorMatrix {
        let polytope = self.polytope.permuted(perm);
        let rows = perm
            .iter()
            .map(|&old_row| {
                perm.iter()
                    .flat_map(|&old_block| {
                        let off = self.polytope.block_offset(old_block);
                        let d = self.polytope.dims()[old_block];
                        self.rows[old_row][off..off + d].iter().copied()
                    })
                    .collect()
            })
            .collect();
        ReducedVectorMatrix {
            polytope,
            mode: self.mode,
            rows,
        }
    }

    /// Find a factor permutation making the matrix unipotent upper triangular.
    ///
    /// A nonzero block at `(row l, block j)` forces `l` before `j`, so valid
    /// permutations are exactly the topological orders of that relation. The
    /// lexicographically first one is returned, which is what an exhaustive
    /// search over all `m!` orderings in lexicographic order would find.
    pub fn triangularize(&self) -> Result<Triangularization> {
        let m = self.polytope.factors();
        if m > MAX_FACTORS {
            return Err(Error::TooManyFactors(m));
        }
        let mut indegree = vec![0usize; m];
        for l in 0..m {
            for (j, deg) in indegree.iter_mut().enumerate() {
                if l != j && self.block_nonzero(l, j) {
                    *deg += 1;
                }
            }
        }
        let mut ready: BTreeSet<usize> = (0..m).filter(|&j| indegree[j] == 0).collect();
        let mut permutation = Vec::with_capacity(m);
        while let Some(next) = ready.pop_first() {
            permutation.push(next);
            for (j, deg) in indegree.iter_mut().enumerate() {
                if j != next && self.block_nonzero(next, j) {
                    *deg -= 1;
                    if *deg == 0 {
                        ready.insert(j);
                    }
                }
            }
        }
        if permutation.len() < m {
            return Err(Error::NotTriangularizable);
        }
        let matrix = self.conjugate(&permutation);
        debug_assert!(matrix.is_unipotent_upper_triangular());
        Ok(Triangularization { permutation, matrix })
    }

    /// Orientability test for small covers over a cube.
    ///
    /// Sums the entries of `E_n + A` along each characteristic vector
    /// `λ(F_i^*) + e_i`; with vectors stored as rows this is a row sum. The
    /// manifold is orientable iff every sum vanishes mod 2.
    pub fn orientability_column_test(&self) -> Result<bool> {
        if !self.polytope.is_cube() {
            return Err(Error::NotACube);
        }
        if self.mode != Mode::ModTwo {
            return Err(Error::ModeMismatch("orientability test needs Z2 entries".into()));
        }
        Ok(self.rows.iter().enumerate().all(|(i, row)| {
            let off_diagonal: i64 = row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).sum();
            off_diagonal.rem_euclid(2) == 0
        }))
    }

    /// Entrywise reduction mod 2.
    pub fn mod2_reduce(&self) -> Result<ReducedVectorMatrix> {
        if self.mode != Mode::Integer {
            return Err(Error::ModeMismatch("mod-2 reduction needs an integer matrix".into()));
        }
        let reduced = ReducedVectorMatrix {
            polytope: self.polytope.clone(),
            mode: Mode::ModTwo,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x.rem_euclid(2)).collect())
                .collect(),
        };
        if !reduced.is_characteristic() {
            return Err(Error::ReducedNotCharacteristic);
        }
        Ok(reduced)
    }
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
pub fn determinant(matrix: &[Vec<i64>]) -> i64 {
    let n = matrix.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}
