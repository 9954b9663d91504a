//! Stiefel–Whitney and Pontryagin classes and numbers.
//!
//! The total classes are products over all facets,
//! `w = Π_F (1 + v_F)` and `p = Π_F (1 - v_F^2)`, evaluated in the quotient
//! ring. Characteristic numbers pair partition-indexed products of the
//! graded components with the fundamental class.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{integer_value, Coefficient, Gf2, Polynomial, Q};
use crate::ring::{CohomologyRing, DegreeScale, EngineKind, RingScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    StiefelWhitney,
    Pontryagin,
}

/// Components `c_0, …, c_n` of a total class, `c_t` homogeneous of internal
/// degree `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedClass<C> {
    pub kind: ClassKind,
    pub scale: DegreeScale,
    pub components: Vec<Polynomial<C>>,
}

impl<C: Coefficient> GradedClass<C> {
    pub fn component(&self, t: usize) -> &Polynomial<C> {
        &self.components[t]
    }

    /// `c_0 + c_1 + … + c_n`.
    pub fn total(&self) -> Polynomial<C> {
        let nvars = self.components[0].nvars();
        self.components.iter().fold(Polynomial::zero(nvars), |acc, c| &acc + c)
    }
}

/// Normal form of `Π factors`, split into graded components.
fn graded_product<C: RingScalar>(
    ring: &CohomologyRing<C>,
    factors: impl Iterator<Item = Polynomial<C>>,
) -> Vec<Polynomial<C>> {
    let n = ring.top_degree();
    let total = factors.fold(Polynomial::one(ring.nvars()), |acc, f| ring.mul(&acc, &f));
    (0..=n).map(|t| total.homogeneous_part(t)).collect()
}

pub fn total_sw(ring: &CohomologyRing<Gf2>) -> GradedClass<Gf2> {
    let m = ring.nvars();
    let one = Polynomial::one(m);
    let components = graded_product(ring, ring.all_facet_classes().map(|v| &one + v));
    GradedClass {
        kind: ClassKind::StiefelWhitney,
        scale: ring.scale(),
        components,
    }
}

/// `Π_F (1 + v_F)` computed in the rational ring of an integer matrix. Its
/// reduction mod 2 is the total Stiefel–Whitney class of the quasitoric
/// manifold.
pub fn total_facet_product(ring: &CohomologyRing<Q>) -> GradedClass<Q> {
    let m = ring.nvars();
    let one = Polynomial::one(m);
    let components = graded_product(ring, ring.all_facet_classes().map(|v| &one + v));
    GradedClass {
        kind: ClassKind::StiefelWhitney,
        scale: ring.scale(),
        components,
    }
}

pub fn total_pontryagin(ring: &CohomologyRing<Q>) -> Result<GradedClass<Q>> {
    if ring.scale() != DegreeScale::Quasitoric {
        return Err(Error::ModeMismatch(
            "Pontryagin classes are computed for quasitoric rings".into(),
        ));
    }
    let m = ring.nvars();
    let one = Polynomial::one(m);
    let components = graded_product(ring, ring.all_facet_classes().map(|v| &one - &(v * v)));
    Ok(GradedClass {
        kind: ClassKind::Pontryagin,
        scale: ring.scale(),
        components,
    })
}

/// Degree-one part of the total Stiefel–Whitney class; zero iff orientable.
pub fn first_sw(ring: &CohomologyRing<Gf2>) -> Polynomial<Gf2> {
    let m = ring.nvars();
    let sum = ring.all_facet_classes().fold(Polynomial::zero(m), |acc, v| &acc + v);
    ring.normal_form(&sum)
}

/// Multiplicities `i_1, …, i_r` of a partition, `Σ j·i_j = weight`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionIndex {
    pub multiplicities: Vec<u32>,
}

impl PartitionIndex {
    pub fn weight(&self) -> usize {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(j, &i)| (j + 1) * i as usize)
            .sum()
    }

    /// Parts in nonincreasing order.
    pub fn parts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, &i) in self.multiplicities.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(j + 1, i as usize));
        }
        out
    }

    pub fn length(&self) -> u32 {
        self.multiplicities.iter().sum()
    }

    /// Monomial label such as `w1^2 w2`, with part `j` printed as `j·index_scale`.
    pub fn label(&self, symbol: &str, index_scale: usize) -> String {
        self.multiplicities
            .iter()
            .enumerate()
            .filter(|(_, &i)| i > 0)
            .map(|(j, &i)| {
                let idx = (j + 1) * index_scale;
                if i == 1 {
                    format!("{symbol}{idx}")
                } else {
                    format!("{symbol}{idx}^{i}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn from_parts(parts: &[usize], max_part: usize) -> Self {
        let mut multiplicities = vec![0u32; max_part];
        for &p in parts {
            multiplicities[p - 1] += 1;
        }
        while multiplicities.last() == Some(&0) {
            multiplicities.pop();
        }
        PartitionIndex { multiplicities }
    }
}

impl fmt::Display for PartitionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts().iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `target` with parts at most `max_part`, ordered by
/// largest part, then recursively by the remainder: `[1,1] < [2]`.
pub fn partitions(target: usize, max_part: usize) -> Vec<PartitionIndex> {
    fn rec(left: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in 1..=cap.min(left) {
            prefix.push(p);
            rec(left - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    rec(target, max_part, &mut Vec::new(), &mut raw);
    raw.iter()
        .map(|parts| PartitionIndex::from_parts(parts, max_part.max(1)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharNumber {
    pub partition: PartitionIndex,
    pub label: String,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharNumberReport {
    pub kind: ClassKind,
    pub numbers: Vec<CharNumber>,
    pub all_zero: bool,
    /// Set when the top degree admits no numbers of this kind (Pontryagin
    /// numbers need real dimension divisible by 4).
    pub no_numbers: bool,
    /// Pontryagin values depend on the orientation and sign conventions.
    pub sign_convention_dependent: bool,
}

impl CharNumberReport {
    fn from_numbers(kind: ClassKind, numbers: Vec<CharNumber>) -> Self {
        let all_zero = numbers.iter().all(|c| c.value == 0);
        CharNumberReport {
            kind,
            numbers,
            all_zero,
            no_numbers: false,
            sign_convention_dependent: kind == ClassKind::Pontryagin,
        }
    }

    pub fn to_map(&self) -> BTreeMap<String, i64> {
        self.numbers.iter().map(|c| (c.label.clone(), c.value)).collect()
    }

    pub fn value(&self, label: &str) -> Option<i64> {
        self.numbers.iter().find(|c| c.label == label).map(|c| c.value)
    }
}

/// Pair `Π_j component(j·step)^{i_j}` for every partition of `weight`.
fn partition_pairings<C: RingScalar>(
    ring: &CohomologyRing<C>,
    components: &[Polynomial<C>],
    weight: usize,
    step: usize,
) -> Result<Vec<(PartitionIndex, C)>> {
    let m = ring.nvars();
    partitions(weight, weight)
        .into_iter()
        .map(|part| {
            let mut prod = Polynomial::one(m);
            for (j, &i) in part.multiplicities.iter().enumerate() {
                for _ in 0..i {
                    prod = ring.mul(&prod, &components[(j + 1) * step]);
                }
            }
            let top = prod.homogeneous_part(ring.top_degree());
            Ok((part, ring.pair_top(&top)?))
        })
        .collect()
}

/// Characteristic numbers of a graded class built from `ring`.
pub fn char_numbers<C: RingScalar>(ring: &CohomologyRing<C>, class: &GradedClass<C>) -> Result<CharNumberReport> {
    let n = ring.top_degree();
    let d = ring.scale().factor();
    match class.kind {
        ClassKind::StiefelWhitney => {
            let numbers = partition_pairings(ring, &class.components, n, 1)?
                .into_iter()
                .map(|(partition, value)| {
                    Ok(CharNumber {
                        label: partition.label("w", d),
                        partition,
                        value: integer_value(&value)?.rem_euclid(2),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CharNumberReport::from_numbers(ClassKind::StiefelWhitney, numbers))
        }
        ClassKind::Pontryagin => {
            if n % 2 == 1 {
                return Ok(CharNumberReport {
                    kind: ClassKind::Pontryagin,
                    numbers: Vec::new(),
                    all_zero: true,
                    no_numbers: true,
                    sign_convention_dependent: true,
                });
            }
            let numbers = partition_pairings(ring, &class.components, n / 2, 2)?
                .into_iter()
                .map(|(partition, value)| {
                    Ok(CharNumber {
                        label: partition.label("p", 1),
                        partition,
                        value: integer_value(&value)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CharNumberReport::from_numbers(ClassKind::Pontryagin, numbers))
        }
    }
}

pub fn sw_numbers(ring: &CohomologyRing<Gf2>) -> Result<CharNumberReport> {
    char_numbers(ring, &total_sw(ring))
}

pub fn pontryagin_numbers(ring: &CohomologyRing<Q>) -> Result<CharNumberReport> {
    char_numbers(ring, &total_pontryagin(ring)?)
}

/// Stiefel–Whitney numbers of a quasitoric manifold computed over the
/// integers: pair `Π_F (1 + v_F)` products in `H^*(M; Z)` and reduce mod 2.
/// Labels use real degrees (`w2`, `w4`, …).
pub fn quasitoric_sw_numbers_integral(ring: &CohomologyRing<Q>) -> Result<CharNumberReport> {
    let class = total_facet_product(ring);
    let d = ring.scale().factor();
    let numbers = partition_pairings(ring, &class.components, ring.top_degree(), 1)?
        .into_iter()
        .map(|(partition, value)| {
            Ok(CharNumber {
                label: partition.label("w", d),
                partition,
                value: integer_value(&value)?.rem_euclid(2),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CharNumberReport::from_numbers(ClassKind::StiefelWhitney, numbers))
}

/// Scalars and polynomials over `Q`, where Newton–Girard sums are evaluated.
pub trait RationalAlgebra: Clone {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;
}

impl RationalAlgebra for Q {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Q) -> Self {
        self * c
    }
}

impl RationalAlgebra for Polynomial<Q> {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Q) -> Self {
        Polynomial::scale(self, c)
    }
}

/// Power sum `s_k` from elementary symmetric values `sigma = [σ_1, …, σ_k, …]`:
///
/// `(-1)^k s_k / k = Σ_{i_1+2i_2+…+k i_k = k} (-1)^{i_1+…+i_k}
///  (i_1+…+i_k - 1)! / (i_1!…i_k!) · σ_1^{i_1}…σ_k^{i_k}`.
pub fn newton_power_sum<T: RationalAlgebra>(sigma: &[T], k: usize) -> T {
    assert!(k >= 1 && sigma.len() >= k, "need σ_1..σ_k");
    let factorial = |x: u32| (1..=x as i64).fold(Q::from_i64(1), |acc, i| acc * Q::from_i64(i));
    let mut acc: Option<T> = None;
    for part in partitions(k, k) {
        let len = part.length();
        let mut coeff = factorial(len - 1);
        for &i in &part.multiplicities {
            coeff /= factorial(i);
        }
        if len % 2 == 1 {
            coeff = -coeff;
        }
        let mut term: Option<T> = None;
        for (j, &i) in part.multiplicities.iter().enumerate() {
            for _ in 0..i {
                term = Some(match term {
                    None => sigma[j].clone(),
                    Some(t) => t.mul(&sigma[j]),
                });
            }
        }
        let term = term.expect("partition has a part").scale(&coeff);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    let mut outer = Q::from_i64(k as i64);
    if k % 2 == 1 {
        outer = -outer;
    }
    acc.expect("k >= 1").scale(&outer)
}

/// `σ_0, …, σ_l` of the given polynomials.
pub fn elementary_symmetric<C: Coefficient>(values: &[Polynomial<C>], nvars: usize) -> Vec<Polynomial<C>> {
    let mut sigma = vec![Polynomial::one(nvars)];
    for v in values {
        sigma.push(Polynomial::zero(nvars));
        for i in (1..sigma.len()).rev() {
            let next = &sigma[i] + &(&sigma[i - 1] * v);
            sigma[i] = next;
        }
    }
    sigma
}

/// Indices `i ∈ 1..=l` with `i ∉ {l + 1 - 2^j}`, for `l = 2^k - 1`.
pub fn required_sigma_indices(l: usize) -> Result<Vec<usize>> {
    if l == 0 || !(l + 1).is_power_of_two() {
        return Err(Error::BadL(l));
    }
    let excluded: Vec<usize> = (0..)
        .map(|j| 1usize << j)
        .take_while(|&p| p <= l + 1)
        .map(|p| l + 1 - p)
        .collect();
    Ok((1..=l).filter(|i| !excluded.contains(i)).collect())
}

/// Whether every required elementary symmetric polynomial of the `y` forms
/// of the last factor vanishes in the ring. A sufficient condition for all
/// Stiefel–Whitney numbers to vanish.
pub fn sigma_vanishing_condition(ring: &CohomologyRing<Gf2>, y_forms: &[Polynomial<Gf2>], l: usize) -> Result<bool> {
    let required = required_sigma_indices(l)?;
    if y_forms.len() != l {
        return Err(Error::BadParams(format!("expected {l} y forms, got {}", y_forms.len())));
    }
    let sigma = elementary_symmetric(y_forms, ring.nvars());
    Ok(required.iter().all(|&i| ring.normal_form(&sigma[i]).is_zero()))
}

fn require_even_top(ring: &CohomologyRing<Q>) -> Result<usize> {
    let n = ring.top_degree();
    if n % 2 == 1 {
        return Err(Error::OddDegree(n));
    }
    Ok(n)
}

/// Pairing of `u_m^n + Σ_k (u_m + y_k)^n` for the last factor of a
/// triangular ring. When nonzero, some Pontryagin number is nonzero.
pub fn power_sum_obstruction(ring: &CohomologyRing<Q>) -> Result<Q> {
    if ring.scale() != DegreeScale::Quasitoric {
        return Err(Error::ModeMismatch(
            "power-sum obstruction needs a quasitoric ring".into(),
        ));
    }
    let n = require_even_top(ring)?;
    if ring.engine() != EngineKind::Triangular {
        return Err(Error::NotTriangularizable);
    }
    let last = ring.nvars() - 1;
    let u = ring.generator(last);
    let sum = ring
        .y_forms(last)
        .iter()
        .fold(u.pow(n as u32), |acc, y| &acc + &(&u + y).pow(n as u32));
    ring.pair_top(&sum)
}

/// Pairing of `Σ_F v_F^n` over all facets: the power sum of the squared facet
/// classes in degree `n/2`, a rational combination of Pontryagin numbers.
pub fn facet_power_sum(ring: &CohomologyRing<Q>) -> Result<Q> {
    let n = require_even_top(ring)?;
    let m = ring.nvars();
    let sum = ring
        .all_facet_classes()
        .fold(Polynomial::zero(m), |acc, v| &acc + &v.pow(n as u32));
    ring.pair_top(&sum)
}

/// Whether a rational value is nonzero; helper for reports.
pub fn is_nonzero(q: &Q) -> bool {
    !num_traits::Zero::is_zero(q)
}

/// Absolute value of a rational pairing.
pub fn abs(q: &Q) -> Q {
    q.abs()
}
