//! Cobordism verdicts and the built-in theorem verifiers.
//!
//! Stiefel–Whitney numbers detect unoriented cobordism (Thom); together with
//! Pontryagin numbers they determine the oriented class (Wall). A verdict
//! reports both families and draws only those conclusions.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::charclass::{
    facet_power_sum, first_sw, pontryagin_numbers, power_sum_obstruction, quasitoric_sw_numbers_integral,
    sigma_vanishing_condition, sw_numbers, total_sw, CharNumberReport,
};
use crate::charmatrix::{determinant, Mode, ReducedVectorMatrix};
use crate::enumerate::{
    cyclic_b_vectors, cyclic_rows, enum_family, random_permutation, random_triangular, random_valid, FamilyKind,
    FamilySpec,
};
use crate::error::{Error, Result};
use crate::par::{map_ordered, Execution};
use crate::poly::{Coefficient, Gf2, Monomial, Polynomial, Q};
use crate::polytope::SimplexProduct;
use crate::ring::{CohomologyRing, DegreeScale, RingScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    None,
    Sw,
    Pontryagin,
    Both,
}

impl Obstruction {
    pub fn label(self) -> &'static str {
        match self {
            Obstruction::None => "none",
            Obstruction::Sw => "sw",
            Obstruction::Pontryagin => "pontryagin",
            Obstruction::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CobordismVerdict {
    pub mode: Mode,
    pub sw_all_zero: bool,
    /// `None` for small covers, where no Pontryagin numbers are computed.
    pub pontryagin_all_zero: Option<bool>,
    pub unoriented_boundary: bool,
    pub oriented_obstruction: Obstruction,
    pub notes: Vec<String>,
    pub sw: CharNumberReport,
    pub pontryagin: Option<CharNumberReport>,
}

/// Stiefel–Whitney numbers of a quasitoric manifold through the mod-two
/// reduced ring, labeled with real degrees.
pub fn quasitoric_sw_numbers(a: &ReducedVectorMatrix) -> Result<CharNumberReport> {
    let reduced = a.mod2_reduce()?;
    let ring = CohomologyRing::<Gf2>::build(&reduced, DegreeScale::Quasitoric)?;
    sw_numbers(&ring)
}

pub fn verdict(a: &ReducedVectorMatrix) -> Result<CobordismVerdict> {
    let (sw, pontryagin) = match a.mode() {
        Mode::ModTwo => {
            let ring = CohomologyRing::<Gf2>::build(a, DegreeScale::SmallCover)?;
            (sw_numbers(&ring)?, None)
        }
        Mode::Integer => {
            let sw = quasitoric_sw_numbers(a)?;
            let ring = CohomologyRing::<Q>::build(a, DegreeScale::Quasitoric)?;
            (sw, Some(pontryagin_numbers(&ring)?))
        }
    };
    let sw_all_zero = sw.all_zero;
    let pontryagin_all_zero = pontryagin.as_ref().map(|p| p.all_zero);
    let oriented_obstruction = match (sw_all_zero, pontryagin_all_zero.unwrap_or(true)) {
        (true, true) => Obstruction::None,
        (false, true) => Obstruction::Sw,
        (true, false) => Obstruction::Pontryagin,
        (false, false) => Obstruction::Both,
    };
    let mut notes = Vec::new();
    notes.push(if sw_all_zero {
        "all Stiefel-Whitney numbers vanish: unoriented boundary (Thom)".to_string()
    } else {
        "a nonzero Stiefel-Whitney number: not an unoriented boundary (Thom)".to_string()
    });
    match &pontryagin {
        None => notes.push("small cover: Pontryagin numbers not computed".into()),
        Some(p) if p.no_numbers => notes.push("real dimension not divisible by 4: no Pontryagin numbers".into()),
        Some(_) => notes.push("Pontryagin signs depend on the orientation convention".into()),
    }
    if a.mode() == Mode::Integer && oriented_obstruction == Obstruction::None {
        notes.push("no oriented obstruction found (Wall)".into());
    }
    Ok(CobordismVerdict {
        mode: a.mode(),
        sw_all_zero,
        pontryagin_all_zero,
        unoriented_boundary: sw_all_zero,
        oriented_obstruction,
        notes,
        sw,
        pontryagin,
    })
}

/// Compare quasitoric Stiefel–Whitney numbers computed in `H^*(M; Z)` with
/// those of the mod-two reduction. True when both agree entrywise, which
/// in particular gives the implication from the reduced small cover.
pub fn lemma41_crosscheck(a: &ReducedVectorMatrix) -> Result<bool> {
    if a.mode() != Mode::Integer {
        return Err(Error::ModeMismatch("cross-check needs an integer matrix".into()));
    }
    let via_reduction = quasitoric_sw_numbers(a)?;
    let ring = CohomologyRing::<Q>::build(a, DegreeScale::Quasitoric)?;
    let integral = quasitoric_sw_numbers_integral(&ring)?;
    let implication = !via_reduction.all_zero || integral.all_zero;
    Ok(implication && via_reduction.to_map() == integral.to_map())
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerifyParams {
    pub dims: Option<Vec<i64>>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub bound: Option<i64>,
    pub samples: Option<usize>,
    pub b: Option<Vec<i64>>,
    /// Block orders for the block-diagonal cyclic construction.
    pub orders: Option<Vec<usize>>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub dims: Vec<usize>,
    pub rows: Vec<Vec<i64>>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationResult {
    pub theorem: String,
    pub passed: bool,
    pub instances: usize,
    pub counterexamples: Vec<Counterexample>,
    #[serde(flatten)]
    pub details: BTreeMap<String, Value>,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub const THEOREMS: &[&str] = &[
    "thm_2_5",
    "thm_3_4",
    "thm_3_6",
    "example_3_7",
    "thm_4_3",
    "thm_4_5",
    "example_4_6",
    "thm_4_7",
    "lemma_3_3",
    "lemma_2_4",
    "prop_3_5",
    "lemma_4_1",
];

/// Outcome of one instance: a failure reason, and tags tallied into details.
#[derive(Debug, Default)]
struct Check {
    failure: Option<String>,
    tags: Vec<String>,
}

impl Check {
    fn fail_unless(cond: bool, reason: impl FnOnce() -> String) -> Check {
        Check {
            failure: (!cond).then(reason),
            tags: Vec::new(),
        }
    }

    fn tag(mut self, cond: bool, tag: &str) -> Check {
        if cond {
            self.tags.push(tag.to_string());
        }
        self
    }

    fn and(mut self, other: Check) -> Check {
        if self.failure.is_none() {
            self.failure = other.failure;
        }
        self.tags.extend(other.tags);
        self
    }
}

struct Tally {
    instances: usize,
    counterexamples: Vec<Counterexample>,
    details: BTreeMap<String, Value>,
}

fn run_checks<F>(matrices: &[ReducedVectorMatrix], exec: Execution, check: F) -> Result<Tally>
where
    F: Fn(&ReducedVectorMatrix) -> Result<Check> + Sync + Send,
{
    let outcomes = map_ordered(matrices, exec, &check);
    let mut counterexamples = Vec::new();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (a, outcome) in matrices.iter().zip(outcomes) {
        let outcome = outcome?;
        for t in outcome.tags {
            *counts.entry(t).or_default() += 1;
        }
        if let Some(reason) = outcome.failure {
            counterexamples.push(Counterexample {
                dims: a.polytope().dims().to_vec(),
                rows: a.rows().to_vec(),
                reason,
            });
        }
    }
    let details = counts.into_iter().map(|(k, v)| (k, json!(v))).collect();
    Ok(Tally {
        instances: matrices.len(),
        counterexamples,
        details,
    })
}

fn family(spec: FamilySpec) -> Result<Vec<ReducedVectorMatrix>> {
    enum_family(&spec)
        .map(|f| f.matrices)
        .map_err(|e| Error::BadParams(e.to_string()))
}

fn dims_or(params: &VerifyParams, default: &[i64]) -> Result<SimplexProduct> {
    let dims = params.dims.clone().unwrap_or_else(|| default.to_vec());
    SimplexProduct::new(&dims).map_err(|e| Error::BadParams(e.to_string()))
}

fn sw_zero_check(a: &ReducedVectorMatrix) -> Result<Check> {
    let ring = CohomologyRing::<Gf2>::build(a, DegreeScale::SmallCover)?;
    let rep = sw_numbers(&ring)?;
    Ok(Check::fail_unless(rep.all_zero, || {
        let nonzero: Vec<_> = rep
            .numbers
            .iter()
            .filter(|c| c.value != 0)
            .map(|c| c.label.clone())
            .collect();
        format!("nonzero Stiefel-Whitney numbers: {}", nonzero.join(", "))
    }))
}

fn verify_thm_2_5(params: &VerifyParams, exec: Execution) -> Result<Tally> {
    let n = params.n.unwrap_or(4);
    if n == 0 {
        return Err(Error::BadParams("n must be positive".into()));
    }
    let mut spec = FamilySpec::new(&vec![1; n], Mode::ModTwo, FamilyKind::Triangular);
    spec.cap = params.samples;
    let matrices = family(spec)?;
    run_checks(&matrices, exec, sw_zero_check)
}

fn verify_thm_3_4(params: &VerifyParams, exec: Execution) -> Result<Tally> {
    let p = dims_or(params, &[2, 1])?;
    if p.dims().last() != Some(&1) {
        return Err(Error::BadParams("the last factor must be Δ^1".into()));
    }
    let mut spec = FamilySpec::new(
        &params.dims.clone().unwrap_or(vec![2, 1]),
        Mode::ModTwo,
        FamilyKind::Bounded,
    );
    spec.cap = params.samples;
    let matrices = family(spec)?;
    let last = p.factors() - 1;
    let mut tally = run_checks(&matrices, exec, |a| {
        let Ok(t) = a.triangularize() else {
            return Ok(Check::fail_unless(false, || "not triangularizable".into()));
        };
        // position of the Δ^1 factor in the tower; the argument needs it on top
        let position = t
            .permutation
            .iter()
            .position(|&f| f == last)
            .expect("permutation covers all factors");
        let on_top = position == last;
        let mut check = sw_zero_check(a)?;
        if let Some(reason) = check.failure.as_mut() {
            reason.push_str(&format!(" (Δ^1 at tower position {position} of {last})"));
        }
        Ok(check
            .tag(a.is_unipotent_upper_triangular(), "already_triangular")
            .tag(on_top, "delta1_on_top")
            .tag(!on_top, "delta1_below_top"))
    })?;
    tally.details.insert("polytope".into(), json!(p.dims()));
    Ok(tally)
}

fn verify_thm_3_6(params: &VerifyParams, exec: Execution) -> Result<Tally> {
    let l = params.l.unwrap_or(3);
    crate::charclass::required_sigma_indices(l).map_err(|e| Error::BadParams(e.to_string()))?;
    let mut dims = params.dims.clone().unwrap_or(vec![1]);
    dims.push(l as i64);
    let mut spec = FamilySpec::new(&dims, Mode::ModTwo, FamilyKind::Triangular);
    spec.cap = params.samples;
    let matrices = family(spec)?;
    let mut tally = run_checks(&matrices, exec, |a| {
        let ring = CohomologyRing::<Gf2>::build(a, DegreeScale::SmallCover)?;
        let last = ring.variable_of_factor(ring.nvars() - 1);
        let holds = sigma_vanishing_condition(&ring, &ring.y_forms(last), l)?;
        let zero = sw_numbers(&ring)?.all_zero;
        Ok(Check::fail_unless(!holds || zero, || {
            "condition holds but a Stiefel-Whitney number is nonzero".into()
        })
        .tag(holds, "condition_holds")
        .tag(!holds && !zero, "condition_fails_and_nonzero"))
    })?;
    tally.details.insert("dims".into(), json!(dims));
    Ok(tally)
}

/// The `Δ^3 × Δ^3` instance with `y_1 = y_2 = y_3 = u_1`.
pub fn example_3_7_matrix() -> ReducedVectorMatrix {
    ReducedVectorMatrix::parse(
        &[3, 3],
        Mode::ModTwo,
        vec![vec![1, 1, 1, 1, 1, 1], vec![0, 0, 0, 1, 1, 1]],
    )
    .expect("fixed matrix is well formed")
}

fn verify_example_3_7() -> Result<Tally> {
    let a = example_3_7_matrix();
    let ring = CohomologyRing::<Gf2>::build(&a, DegreeScale::SmallCover)?;
    let one = Polynomial::<Gf2>::one(2);
    let u1 = Polynomial::<Gf2>::var(2, 0);
    let u2 = Polynomial::<Gf2>::var(2, 1);
    let s = &u1 + &u2;
    let expected_relations = vec![u1.pow(4), &u2 * &s.pow(3)];
    let mut failures = Vec::new();
    if ring.relations() != expected_relations.as_slice() {
        failures.push("relations differ from u1^4, u2(u1+u2)^3".to_string());
    }
    let w_expected = &(&(&one + &u1).pow(4) * &(&one + &s).pow(3)) * &(&one + &u2);
    if total_sw(&ring).total() != ring.normal_form(&w_expected) {
        failures.push("total class differs from (1+u1)^4(1+u1+u2)^3(1+u2)".into());
    }
    let w3 = total_sw(&ring).component(3).clone();
    let w3_squared = ring.pair_top(&ring.mul(&w3, &w3))?;
    let number = sw_numbers(&ring)?.value("w3^2").unwrap_or(-1);
    let value = i64::from(w3_squared.0);
    if value != 1 || number != 1 {
        failures.push(format!("w3^2 pairs to {value} (report {number}), expected 1"));
    }
    let mut details = BTreeMap::new();
    details.insert("w3_squared".into(), json!(value));
    Ok(Tally {
        instances: 1,
        counterexamples: failures
            .into_iter()
            .map(|reason| Counterexample {
                dims: a.polytope().dims().to_vec(),
                rows: a.rows().to_vec(),
                reason,
            })
            .collect(),
        details,
    })
}

fn verify_thm_4_3(params: &VerifyParams, exec: Execution) -> Result<Tally> {
    let p = dims_or(params, &[1, 1, 1, 1])?;
    if p.dims().last() != Some(&1) {
        return Err(Error::BadParams("the last factor must be Δ^1".into()));
    }
    let dims: Vec<i64> = p.dims().iter().map(|&d| d as i64).collect();
    let mut spec = FamilySpec::new(&dims, Mode::Integer, FamilyKind::Triangular).with_bound(params.bound.unwrap_or(1));
    spec.cap = params.samples;
    let matrices = family(spec)?;
    run_checks(&matrices, exec, |a| {
        let v = verdict(a)?;
        Ok(
            Check::fail_unless(a.principal_minors_all_one(), || "principal minors are not all 1".into())
                .and(Check::fail_unless(v.sw_all_zero, || {
                    "nonzero Stiefel-Whitney number".into()
                }))
                .and(Check::fail_unless(v.pontryagin_all_zero != Some(false), || {
                    "nonzero Pontryagin number".into()
                })),
        )
    })
}

/// Whether every proper principal minor of a square matrix equals 1.
pub fn proper_principal_minors_one(rows: &[Vec<i64>]) -> bool {
    let n = rows.len();
    (1u32..(1u32 << n) - 1).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<i64>> = idx.iter().map(|&i| idx.iter().map(|&j| rows[i][j]).collect()).collect();
        determinant(&sub) == 1
    })
}

/// `Σ_j (b_j u_j)^n` paired with the fundamental class, for a cyclic matrix.
pub fn cyclic_power_pairing(ring: &CohomologyRing<Q>) -> Result<Q> {
    let rows = ring.input_matrix().rows();
    let n = rows.len();
    let m = ring.nvars();
    let mut sum = Polynomial::<Q>::zero(m);
    for (j, row) in rows.iter().enumerate() {
        let b = Q::from_i64(row[(j + 1) % n]);
        let u = ring.generator(ring.variable_of_factor(j));
        sum = &sum + &u.scale(&b).pow(n as u32);
    }
    ring.pair_top(&sum)
}

fn verify_thm_4_5(params: &VerifyParams, exec: Execution) -> Result<Tally> {
    let k = params.k.unwrap_or(1);
    if k == 0 {
        return Err(Error::BadParams("k must be positive".into()));
    }
    let n = 2 * k;
    let p = SimplexProduct::from_dims(&vec![1; n])?;
    let matrices = match &params.b {
        Some(b) => {
            if b.len() != n || b.iter().product::<i64>() != 2 {
                return Err(Error::BadParams(format!("b must have {n} entries with product 2")));
            }
            vec![ReducedVectorMatrix::new(p, Mode::Integer, cyclic_rows(b))
                .map_err(|e| Error::BadParams(e.to_string()))?]
        }
        None => {
            let mut spec = FamilySpec::new(&vec![1; n], Mode::Integer, FamilyKind::Cyclic)
                .with_product(2)
                .with_bound(params.bound.unwrap_or(2));
            spec.cap = params.samples;
            family(spec)?
        }
    };
    let outcomes = map_ordered(&matrices, exec, |a| -> Result<(Check, Option<i64>)> {
        let v = verdict(a)?;
        let ring = CohomologyRing::<Q>::build(a, DegreeScale::Quasitoric)?;
        let shape = proper_principal_minors_one(a.rows()) && determinant(a.rows()) == -1;
        let pairing = cyclic_power_pairing(&ring)?;
        let mut check = Check::fail_unless(shape, || "proper principal minors not all 1 or det ≠ -1".into())
            .and(Check::fail_unless(v.sw_all_zero, || {
                "nonzero Stiefel-Whitney number".into()
            }))
            .and(Check::fail_unless(
                v.oriented_obstruction == Obstruction::Pontryagin,
                || format!("oriented obstruction is {}", v.oriented_obstruction.label()),
            ))
            .and(Check::fail_unless(crate::charclass::is_nonzero(&pairing), || {
                "Σ (b_j u_j)^n pairs to zero".into()
            }));
        let mut p1 = None;
        if k == 1 {
            let value = v.pontryagin.as_ref().and_then(|r| r.value("p1")).unwrap_or(0);
            let (b1, b2) = (a.rows()[0][1], a.rows()[1][0]);
            check = check.and(Check::fail_unless(value.abs() == (2 * (b1 + b2)).abs(), || {
                format!("|p1| = {} but |2(b1+b2)| = {}", value.abs(), (2 * (b1 + b2)).abs())
            }));
            p1 = Some(value.abs());
        }
        Ok((check, p1))
    });
    let mut counterexamples = Vec::new();
    let mut p1_values = std::collections::BTreeSet::new();
    for (a, outcome) in matrices.iter().zip(outcomes) {
        let (check, p1) = outcome?;
        p1_values.extend(p1);
        if let Some(reason) = check.failure {
            counterexamples.push(Counterexample {
                dims: a.polytope().dims().to_vec(),
                rows: a.rows().to_vec(),
                reason,
            });
        }
    }
    let mut details = BTreeMap::new();
    details.insert("n".into(), json!(n));
    match p1_values.len() {
        0 => {}
        1 => {
            details.insert("p1_abs".into(), json!(p1_values.first()));
        }
        _ => {
            details.insert("p1_abs".into(), json!(p1_values));
        }
    }
    Ok(Tally {
        instances: matrices.len(),
        counterexamples,
        details,
    })
}

/// Block-diagonal cube matrix with cyclic blocks.
pub fn block_diagonal_cyclic(blocks: &[Vec<i64>]) -> Result<ReducedVectorMatrix> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut rows = vec![vec![0; n]; n];
    let mut offset = 0;
    for b in blocks {
        for (i, row) in cyclic_rows(b).into_iter().enumerate() {
            rows[offset + i][offset..offset + b.len()].copy_from_slice(&row);
        }
        offset += b.len();
    }
    ReducedVectorMatrix::new(SimplexProduct::from_dims(&vec![1; n])?, Mode::Integer, rows)
}

fn verify_example_4_6(params: &VerifyParams, exec: Execution) -> Result<Tally> {
    let orders = params.orders.clone().unwrap_or(vec![3, 3]);
    if orders.len() != 2 || orders.iter().any(|&o| o < 3 || o % 2 == 0) {
        return Err(Error::BadParams("need two odd block orders ≥ 3".into()));
    }
    let bound = params.bound.unwrap_or(2);
    let first = cyclic_b_vectors(orders[0], -2, bound);
    let second = cyclic_b_vectors(orders[1], -2, bound);
    let mut pairs: Vec<(usize, usize)> = (0..first.len())
        .flat_map(|i| (0..second.len()).map(move |j| (i, j)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rand::seq::SliceRandom::shuffle(pairs.as_mut_slice(), &mut rng);
    pairs.truncate(params.samples.unwrap_or(16));
    let matrices = pairs
        .iter()
        .map(|&(i, j)| block_diagonal_cyclic(&[first[i].clone(), second[j].clone()]))
        .collect::<Result<Vec<_>>>()?;
    let mut tally = run_checks(&matrices, exec, |a| {
        let ring = CohomologyRing::<Q>::build(a, DegreeScale::Quasitoric)?;
        let rep = pontryagin_numbers(&ring)?;
        Ok(Check::fail_unless(rep.all_zero && !rep.no_numbers, || {
            format!("Pontryagin numbers {:?}", rep.to_map())
        }))
    })?;
    tally
        .details
        .insert("available_assignments".into(), json!(first.len() * second.len()));
    Ok(tally)
}

fn verify_thm_4_7(params: &VerifyParams, exec: Execution) -> Result<Tally> {
    let p = dims_or(params, &[1, 1, 2])?;
    if p.dimension() % 2 == 1 {
        return Err(Error::BadParams("total dimension must be even".into()));
    }
    let dims: Vec<i64> = p.dims().iter().map(|&d| d as i64).collect();
    let mut spec = FamilySpec::new(&dims, Mode::Integer, FamilyKind::Triangular).with_bound(params.bound.unwrap_or(1));
    spec.cap = params.samples;
    let matrices = family(spec)?;
    run_checks(&matrices, exec, |a| {
        let ring = CohomologyRing::<Q>::build(a, DegreeScale::Quasitoric)?;
        let predicate = power_sum_obstruction(&ring)?;
        let full = facet_power_sum(&ring)?;
        let nonzero = crate::charclass::is_nonzero(&predicate);
        let pont_zero = pontryagin_numbers(&ring)?.all_zero;
        Ok(Check::fail_unless(!nonzero || !pont_zero, || {
            "predicate nonzero but Pontryagin numbers vanish".into()
        })
        .and(Check::fail_unless(full == predicate, || {
            format!("facet power sum {full} differs from last-factor sum {predicate}")
        }))
        .tag(nonzero, "predicate_nonzero")
        .tag(!pont_zero, "pontryagin_nonzero"))
    })
}

const LEMMA_DIMS: &[&[usize]] = &[
    &[1, 1],
    &[2, 1],
    &[1, 2],
    &[2, 2],
    &[3, 1],
    &[1, 1, 1],
    &[2, 1, 1],
    &[1, 2, 2],
];

/// Random triangular instances, conjugated by a random factor permutation.
fn scrambled_triangular(
    params: &VerifyParams,
    pool: &[&[usize]],
    cube_only: bool,
) -> Result<Vec<(ReducedVectorMatrix, u64)>> {
    let samples = params.samples.unwrap_or(100);
    let fixed = match &params.dims {
        Some(d) => Some(SimplexProduct::new(d).map_err(|e| Error::BadParams(e.to_string()))?),
        None => params.n.map(|n| SimplexProduct::from_dims(&vec![1; n])).transpose()?,
    };
    if cube_only && fixed.as_ref().is_some_and(|p| !p.is_cube()) {
        return Err(Error::BadParams("dims must be all 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let bound = params.bound.unwrap_or(2);
    let mut out = Vec::with_capacity(samples);
    for i in 0..samples {
        let p = match &fixed {
            Some(p) => p.clone(),
            None if cube_only => SimplexProduct::from_dims(&vec![1; rng.gen_range(2..=6)])?,
            None => SimplexProduct::from_dims(pool[rng.gen_range(0..pool.len())])?,
        };
        let mode = if cube_only || i % 2 == 0 {
            Mode::ModTwo
        } else {
            Mode::Integer
        };
        let a = random_triangular(&p, mode, bound, &mut rng);
        let perm = random_permutation(p.factors(), &mut rng);
        out.push((a.conjugate(&perm), rng.gen()));
    }
    Ok(out)
}

/// Random composition of `total` into `parts` nonnegative integers.
fn random_composition<R: Rng>(total: usize, parts: usize, rng: &mut R) -> Vec<u16> {
    let mut out = vec![0u16; parts];
    for _ in 0..total {
        out[rng.gen_range(0..parts)] += 1;
    }
    out
}

/// `u_1^{l_1} … u_k^{l_k}` with `Σ l = Σ_{i≤k} n_i + 1` in triangular order.
fn lemma_3_3_check<C: RingScalar>(ring: &CohomologyRing<C>, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = ring.nvars();
    let dims = ring.polytope().dims().to_vec();
    for _ in 0..4 {
        let k = rng.gen_range(1..=m);
        let total: usize = dims[..k].iter().sum::<usize>() + 1;
        let mut exps = random_composition(total, k, &mut rng);
        exps.resize(m, 0);
        let mono = Monomial::new(exps.clone());
        let nf = ring.normal_form(&Polynomial::term(mono, C::one()));
        if !nf.is_zero() {
            return Check::fail_unless(false, || format!("u^{exps:?} has nonzero normal form {nf}"));
        }
    }
    Check::default()
}

fn verify_lemma_3_3(params: &VerifyParams, exec: Execution) -> Result<Tally> {
    let instances = scrambled_triangular(params, LEMMA_DIMS, false)?;
    let matrices: Vec<_> = instances.iter().map(|(a, _)| a.clone()).collect();
    let seeds: BTreeMap<_, _> = instances.iter().map(|(a, s)| (a.rows().to_vec(), *s)).collect();
    run_checks(&matrices, exec, |a| {
        let seed = seeds[a.rows()];
        Ok(match a.mode() {
            Mode::ModTwo => lemma_3_3_check(&CohomologyRing::<Gf2>::build(a, DegreeScale::SmallCover)?, seed),
            Mode::Integer => lemma_3_3_check(&CohomologyRing::<Q>::build(a, DegreeScale::Quasitoric)?, seed),
        })
    })
}

fn verify_lemma_2_4(params: &VerifyParams, exec: Execution) -> Result<Tally> {
    let instances = scrambled_triangular(params, &[], true)?;
    let matrices: Vec<_> = instances.iter().map(|(a, _)| a.clone()).collect();
    let seeds: BTreeMap<_, _> = instances.iter().map(|(a, s)| (a.rows().to_vec(), *s)).collect();
    run_checks(&matrices, exec, |a| {
        let ring = CohomologyRing::<Gf2>::build(a, DegreeScale::SmallCover)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seeds[a.rows()]);
        let n = ring.nvars();
        let ys: Vec<Polynomial<Gf2>> = (0..n).map(|j| ring.y_forms(j)[0].clone()).collect();
        for _ in 0..4 {
            // y_2^{l_2} … y_k^{l_k} with Σ l = k, one-based
            let k = rng.gen_range(2..=n);
            let exps = random_composition(k, k - 1, &mut rng);
            let prod = exps
                .iter()
                .enumerate()
                .fold(Polynomial::one(n), |acc, (j, &e)| &acc * &ys[j + 1].pow(e as u32));
            let nf = ring.normal_form(&prod);
            if !nf.is_zero() {
                return Ok(Check::fail_unless(false, || {
                    format!("y-product {exps:?} has normal form {nf}")
                }));
            }
        }
        Ok(Check::default())
    })
}

fn verify_prop_3_5(params: &VerifyParams, exec: Execution) -> Result<Tally> {
    let max_n = params.n.unwrap_or(5);
    let mut matrices = Vec::new();
    for n in 1..=max_n {
        matrices.extend(family(FamilySpec::new(
            &vec![1; n],
            Mode::ModTwo,
            FamilyKind::Triangular,
        ))?);
    }
    run_checks(&matrices, exec, |a| {
        let ring = CohomologyRing::<Gf2>::build(a, DegreeScale::SmallCover)?;
        let w1_zero = first_sw(&ring).is_zero();
        let test = a.orientability_column_test()?;
        Ok(Check::fail_unless(w1_zero == test, || {
            format!("w1 = 0 is {w1_zero} but the sum test gives {test}")
        })
        .tag(w1_zero, "orientable"))
    })
}

const LEMMA_4_1_DIMS: &[&[usize]] = &[&[1, 1], &[2, 1], &[1, 1, 1]];

fn verify_lemma_4_1(params: &VerifyParams, exec: Execution) -> Result<Tally> {
    let samples = params.samples.unwrap_or(100);
    let bound = params.bound.unwrap_or(2);
    let fixed = params
        .dims
        .as_ref()
        .map(|d| SimplexProduct::new(d).map_err(|e| Error::BadParams(e.to_string())))
        .transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut matrices = Vec::with_capacity(samples);
    for _ in 0..samples {
        let p = match &fixed {
            Some(p) => p.clone(),
            None => SimplexProduct::from_dims(LEMMA_4_1_DIMS[rng.gen_range(0..LEMMA_4_1_DIMS.len())])?,
        };
        let a = random_valid(&p, Mode::Integer, bound, 100_000, &mut rng)
            .ok_or_else(|| Error::BadParams(format!("no valid integer matrix found over {:?}", p.dims())))?;
        matrices.push(a);
    }
    run_checks(&matrices, exec, |a| {
        let agree = lemma41_crosscheck(a)?;
        let zero = quasitoric_sw_numbers(a)?.all_zero;
        Ok(
            Check::fail_unless(agree, || "integral and mod-two Stiefel-Whitney numbers differ".into())
                .tag(!zero, "sw_nonzero"),
        )
    })
}

pub fn verify(theorem_id: &str, params: &VerifyParams) -> Result<VerificationResult> {
    verify_with(theorem_id, params, Execution::default())
}

pub fn verify_with(theorem_id: &str, params: &VerifyParams, exec: Execution) -> Result<VerificationResult> {
    let start = Instant::now();
    let tally = match theorem_id {
        "thm_2_5" => verify_thm_2_5(params, exec)?,
        "thm_3_4" => verify_thm_3_4(params, exec)?,
        "thm_3_6" => verify_thm_3_6(params, exec)?,
        "example_3_7" => verify_example_3_7()?,
        "thm_4_3" => verify_thm_4_3(params, exec)?,
        "thm_4_5" => verify_thm_4_5(params, exec)?,
        "example_4_6" => verify_example_4_6(params, exec)?,
        "thm_4_7" => verify_thm_4_7(params, exec)?,
        "lemma_3_3" => verify_lemma_3_3(params, exec)?,
        "lemma_2_4" => verify_lemma_2_4(params, exec)?,
        "prop_3_5" => verify_prop_3_5(params, exec)?,
        "lemma_4_1" => verify_lemma_4_1(params, exec)?,
        other => return Err(Error::UnknownTheorem(other.to_string())),
    };
    Ok(VerificationResult {
        theorem: theorem_id.to_string(),
        passed: tally.counterexamples.is_empty(),
        instances: tally.instances,
        counterexamples: tally.counterexamples,
        details: tally.details,
        elapsed: start.elapsed(),
    })
}
