//! Matrix families, random instance generators, and the JSONL batch runner.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::charmatrix::{Mode, ReducedVectorMatrix};
use crate::cobordism::{verdict, CobordismVerdict};
use crate::error::{Error, Result};
use crate::par::{map_ordered, Execution};
use crate::polytope::SimplexProduct;

/// Families larger than this must carry an explicit cap.
pub const MAX_CANDIDATES: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Unipotent upper triangular vector matrices in canonical factor order.
    Triangular,
    /// Cube matrices with ones on the diagonal, `b_i` on the cyclic
    /// superdiagonal, and a prescribed product `Π b_i`.
    Cyclic,
    /// Every matrix with off-diagonal-block entries in `[-bound, bound]`,
    /// filtered by the vertex condition.
    Bounded,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub dims: Vec<i64>,
    pub mode: Mode,
    pub kind: FamilyKind,
    /// Entry bound for integer families; `|b_i|` bound for cyclic ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    /// Target `Π b_i` for the cyclic family, `(-1)^n · 2` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub tasks: Analyses,
}

impl FamilySpec {
    pub fn new(dims: &[i64], mode: Mode, kind: FamilyKind) -> Self {
        FamilySpec {
            dims: dims.to_vec(),
            mode,
            kind,
            bound: None,
            product: None,
            cap: None,
            matrices: Vec::new(),
            tasks: Analyses::default(),
        }
    }

    pub fn with_bound(mut self, bound: i64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_product(mut self, product: i64) -> Self {
        self.product = Some(product);
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = Some(cap);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analyses {
    pub sw: bool,
    pub pontryagin: bool,
}

impl Default for Analyses {
    fn default() -> Self {
        Analyses {
            sw: true,
            pontryagin: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub matrices: Vec<ReducedVectorMatrix>,
    /// Candidates rejected by the vertex condition.
    pub skipped: usize,
}

/// `0, 1, -1, 2, -2, …` up to `bound`, or `0, 1` in mod-two mode.
fn entry_values(mode: Mode, bound: i64) -> Vec<i64> {
    match mode {
        Mode::ModTwo => vec![0, 1],
        Mode::Integer => {
            let mut v = vec![0];
            for b in 1..=bound {
                v.push(b);
                v.push(-b);
            }
            v
        }
    }
}

/// Positions `(row, column)` outside the diagonal blocks; `upper_only`
/// restricts to blocks right of the diagonal.
fn free_positions(p: &SimplexProduct, upper_only: bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for row in 0..p.factors() {
        for (block, &d) in p.dims().iter().enumerate() {
            if block == row || (upper_only && block < row) {
                continue;
            }
            for k in 1..=d {
                out.push((row, p.column(block, k)));
            }
        }
    }
    out
}

fn candidate_count(values: usize, slots: usize) -> Option<u64> {
    (values as u64).checked_pow(u32::try_from(slots).ok()?)
}

/// Mixed-radix counter over `slots` digits, most significant first.
struct Odometer {
    radix: usize,
    digits: Option<Vec<usize>>,
}

impl Odometer {
    fn new(radix: usize, slots: usize) -> Self {
        Odometer {
            radix,
            digits: if radix == 0 && slots > 0 {
                None
            } else {
                Some(vec![0; slots])
            },
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.digits.take()?;
        let mut succ = current.clone();
        for i in (0..succ.len()).rev() {
            if succ[i] + 1 < self.radix {
                succ[i] += 1;
                self.digits = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

fn check_bound(spec: &FamilySpec, default: i64) -> Result<i64> {
    let bound = spec.bound.unwrap_or(default);
    if bound < 1 {
        return Err(Error::InfeasibleSpec(format!(
            "entry bound must be positive, got {bound}"
        )));
    }
    Ok(bound)
}

fn fill_family(
    p: &SimplexProduct,
    mode: Mode,
    positions: &[(usize, usize)],
    values: &[i64],
    cap: Option<usize>,
) -> Result<Family> {
    let total = candidate_count(values.len(), positions.len());
    if cap.is_none() && total.is_none_or(|t| t > MAX_CANDIDATES) {
        return Err(Error::InfeasibleSpec(format!(
            "{} free entries with {} values each exceed the enumeration limit; set a cap",
            positions.len(),
            values.len()
        )));
    }
    let base = ReducedVectorMatrix::identity(p.clone(), mode);
    let mut matrices = Vec::new();
    let mut skipped = 0;
    for digits in Odometer::new(values.len(), positions.len()) {
        if cap.is_some_and(|c| matrices.len() >= c) {
            break;
        }
        let mut rows = base.rows().to_vec();
        for (&(r, c), &d) in positions.iter().zip(&digits) {
            rows[r][c] = values[d];
        }
        let a = ReducedVectorMatrix::new(p.clone(), mode, rows)?;
        if a.is_characteristic() {
            matrices.push(a);
        } else {
            skipped += 1;
        }
    }
    Ok(Family { matrices, skipped })
}

/// Rows of the cyclic cube matrix: `1` on the diagonal, `b_i` at
/// `(i, i+1)` and `b_n` at `(n, 1)`.
pub fn cyclic_rows(b: &[i64]) -> Vec<Vec<i64>> {
    let n = b.len();
    let mut rows = vec![vec![0; n]; n];
    for i in 0..n {
        rows[i][i] = 1;
        let j = (i + 1) % n;
        rows[i][j] += b[i];
    }
    rows
}

/// Every `b ∈ ([-bound, bound] \ {0})^n` with `Π b = product`, lexicographic.
pub fn cyclic_b_vectors(n: usize, product: i64, bound: i64) -> Vec<Vec<i64>> {
    let values: Vec<i64> = (-bound..=bound).filter(|&b| b != 0).collect();
    Odometer::new(values.len(), n)
        .map(|digits| digits.iter().map(|&d| values[d]).collect::<Vec<i64>>())
        .filter(|b| b.iter().product::<i64>() == product)
        .collect()
}

/// The instances of a family in deterministic order.
pub fn enum_family(spec: &FamilySpec) -> Result<Family> {
    let p = SimplexProduct::new(&spec.dims).map_err(|e| Error::InfeasibleSpec(e.to_string()))?;
    match spec.kind {
        FamilyKind::Triangular => {
            let bound = check_bound(spec, 1)?;
            let positions = free_positions(&p, true);
            fill_family(&p, spec.mode, &positions, &entry_values(spec.mode, bound), spec.cap)
        }
        FamilyKind::Bounded => {
            let bound = check_bound(spec, 1)?;
            let positions = free_positions(&p, false);
            fill_family(&p, spec.mode, &positions, &entry_values(spec.mode, bound), spec.cap)
        }
        FamilyKind::Cyclic => {
            if !p.is_cube() || p.factors() < 2 {
                return Err(Error::InfeasibleSpec(
                    "cyclic family needs dims all 1 with n ≥ 2".into(),
                ));
            }
            if spec.mode != Mode::Integer {
                return Err(Error::InfeasibleSpec("cyclic family is an integer family".into()));
            }
            let n = p.factors();
            let bound = check_bound(spec, 2)?;
            let product = spec.product.unwrap_or(if n % 2 == 0 { 2 } else { -2 });
            if product == 0 {
                return Err(Error::InfeasibleSpec("cyclic product must be nonzero".into()));
            }
            if candidate_count(2 * bound as usize, n).is_none_or(|t| t > MAX_CANDIDATES) {
                return Err(Error::InfeasibleSpec("cyclic b-vector search too large".into()));
            }
            let mut matrices = Vec::new();
            let mut skipped = 0;
            for b in cyclic_b_vectors(n, product, bound) {
                if spec.cap.is_some_and(|c| matrices.len() >= c) {
                    break;
                }
                let a = ReducedVectorMatrix::new(p.clone(), Mode::Integer, cyclic_rows(&b))?;
                if a.is_characteristic() {
                    matrices.push(a);
                } else {
                    skipped += 1;
                }
            }
            Ok(Family { matrices, skipped })
        }
        FamilyKind::Explicit => {
            let mut matrices = Vec::new();
            let mut skipped = 0;
            for rows in &spec.matrices {
                if spec.cap.is_some_and(|c| matrices.len() >= c) {
                    break;
                }
                let a = ReducedVectorMatrix::new(p.clone(), spec.mode, rows.clone())
                    .map_err(|e| Error::InfeasibleSpec(e.to_string()))?;
                if a.is_characteristic() {
                    matrices.push(a);
                } else {
                    skipped += 1;
                }
            }
            Ok(Family { matrices, skipped })
        }
    }
}

/// A random unipotent upper triangular matrix over `dims`.
pub fn random_triangular<R: Rng>(p: &SimplexProduct, mode: Mode, bound: i64, rng: &mut R) -> ReducedVectorMatrix {
    let values = entry_values(mode, bound);
    let mut rows = ReducedVectorMatrix::identity(p.clone(), mode).rows().to_vec();
    for (r, c) in free_positions(p, true) {
        rows[r][c] = *values.choose(rng).expect("nonempty values");
    }
    ReducedVectorMatrix::new(p.clone(), mode, rows).expect("triangular shape is well formed")
}

/// A random matrix satisfying the vertex condition, by rejection sampling
/// over entries in `[-bound, bound]`. `None` after `max_tries` rejections.
pub fn random_valid<R: Rng>(
    p: &SimplexProduct,
    mode: Mode,
    bound: i64,
    max_tries: usize,
    rng: &mut R,
) -> Option<ReducedVectorMatrix> {
    let values = entry_values(mode, bound);
    let positions = free_positions(p, false);
    let base = ReducedVectorMatrix::identity(p.clone(), mode).rows().to_vec();
    for _ in 0..max_tries {
        let mut rows = base.clone();
        for &(r, c) in &positions {
            rows[r][c] = *values.choose(rng).expect("nonempty values");
        }
        let a = ReducedVectorMatrix::new(p.clone(), mode, rows).expect("shape is well formed");
        if a.is_characteristic() {
            return Some(a);
        }
    }
    None
}

/// A uniformly random factor permutation.
pub fn random_permutation<R: Rng>(m: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    perm
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub dims: Vec<usize>,
    pub mode: Mode,
    pub rows: Vec<Vec<i64>>,
    pub sw_all_zero: Option<bool>,
    pub pontryagin_all_zero: Option<bool>,
    pub oriented_obstruction: Option<String>,
    pub sw_numbers: BTreeMap<String, i64>,
    pub pontryagin_numbers: BTreeMap<String, i64>,
    pub timestamp_ms: u64,
}

impl ResultRecord {
    pub fn from_verdict(a: &ReducedVectorMatrix, v: &CobordismVerdict, tasks: Analyses, timestamp_ms: u64) -> Self {
        let pontryagin = if tasks.pontryagin { v.pontryagin.as_ref() } else { None };
        ResultRecord {
            dims: a.polytope().dims().to_vec(),
            mode: a.mode(),
            rows: a.rows().to_vec(),
            sw_all_zero: tasks.sw.then_some(v.sw_all_zero),
            pontryagin_all_zero: if tasks.pontryagin { v.pontryagin_all_zero } else { None },
            oriented_obstruction: (tasks.sw && tasks.pontryagin).then(|| v.oriented_obstruction.label().to_string()),
            sw_numbers: if tasks.sw { v.sw.to_map() } else { BTreeMap::new() },
            pontryagin_numbers: pontryagin.map(|r| r.to_map()).unwrap_or_default(),
            timestamp_ms,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BatchSummary {
    pub total: usize,
    pub skipped: usize,
    pub sw_nonzero: usize,
    pub pontryagin_nonzero: usize,
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// Evaluate every instance of `spec` and write one JSON line per instance to
/// `out`, in enumeration order.
pub fn batch_run(spec: &FamilySpec, out: &Path, exec: Execution) -> Result<BatchSummary> {
    let family = enum_family(spec)?;
    let verdicts = map_ordered(&family.matrices, exec, verdict);
    let file = File::create(out)?;
    let mut writer = BufWriter::new(file);
    let mut summary = BatchSummary {
        skipped: family.skipped,
        ..BatchSummary::default()
    };
    for (a, v) in family.matrices.iter().zip(verdicts) {
        let v = v?;
        let record = ResultRecord::from_verdict(a, &v, spec.tasks, now_ms());
        summary.total += 1;
        if record.sw_all_zero == Some(false) {
            summary.sw_nonzero += 1;
        }
        if record.pontryagin_all_zero == Some(false) {
            summary.pontryagin_nonzero += 1;
        }
        serde_json::to_writer(&mut writer, &record)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(summary)
}
