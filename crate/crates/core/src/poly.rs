//! Sparse multivariate polynomials over `Z/2` and `Q`.
//!
//! Variables are `u_1, …, u_m` (index `0..m` in code). Monomials are ordered
//! graded-lexicographically with `u_1 < … < u_m`: total degree first, then
//! the exponent of the highest-indexed variable, and so on downwards.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

pub trait Coefficient: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    fn from_i64(x: i64) -> Self;
    /// The value as an integer, if it is one.
    fn to_integer(&self) -> Option<BigInt>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// The field with two elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf2(pub bool);

impl fmt::Display for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl Coefficient for Gf2 {
    fn zero() -> Self {
        Gf2(false)
    }
    fn one() -> Self {
        Gf2(true)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn plus(&self, other: &Self) -> Self {
        Gf2(self.0 ^ other.0)
    }
    fn minus(&self, other: &Self) -> Self {
        Gf2(self.0 ^ other.0)
    }
    fn times(&self, other: &Self) -> Self {
        Gf2(self.0 & other.0)
    }
    fn negate(&self) -> Self {
        *self
    }
    fn inverse(&self) -> Option<Self> {
        self.0.then_some(*self)
    }
    fn from_i64(x: i64) -> Self {
        Gf2(x.rem_euclid(2) == 1)
    }
    fn to_integer(&self) -> Option<BigInt> {
        Some(BigInt::from(u8::from(self.0)))
    }
}

impl Coefficient for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
    fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.to_integer())
    }
}

/// Convert an integral scalar to `i64`.
pub fn integer_value<C: Coefficient>(c: &C) -> crate::Result<i64> {
    let z = c.to_integer().ok_or_else(|| crate::Error::NonIntegral(c.to_string()))?;
    z.to_i64().ok_or_else(|| crate::Error::Overflow(z.to_string()))
}

pub fn rational(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_negative(q: &Q) -> bool {
    q.is_negative()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
            degree: 0,
        }
    }

    pub fn new(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (&a, &b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(b)?);
        }
        Some(Monomial {
            exps,
            degree: self.degree - other.degree,
        })
    }

    /// All monomials of total degree `degree` in `nvars` variables, ascending.
    pub fn all_of_degree(nvars: usize, degree: usize) -> Vec<Monomial> {
        fn rec(out: &mut Vec<Monomial>, cur: &mut Vec<u16>, i: usize, left: usize) {
            if i + 1 == cur.len() {
                cur[i] = left as u16;
                out.push(Monomial::new(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e as u16;
                rec(out, cur, i + 1, left - e);
            }
        }
        if nvars == 0 {
            return if degree == 0 { vec![Monomial::one(0)] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(&mut out, &mut vec![0; nvars], 0, degree);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "u{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    /// Linear form `Σ coeffs[i]·u_i`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::zero(nvars);
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(nvars, i), C::from_i64(c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Largest monomial in the graded order.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<usize> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous_of(&self, degree: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().plus(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn remove_term(&mut self, m: &Monomial) -> Option<C> {
        self.terms.remove(m)
    }

    /// Remove and return the largest term.
    pub fn pop_leading(&mut self) -> Option<(Monomial, C)> {
        self.terms.pop_last()
    }

    /// `self += c · m · other`
    pub fn add_scaled_shifted(&mut self, c: &C, m: &Monomial, other: &Polynomial<C>) {
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), c.times(oc));
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.times(c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Product with all terms above `max_degree` dropped.
    pub fn mul_truncated(&self, other: &Self, max_degree: usize) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Self::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.degree() + b.degree() <= max_degree {
                    out.add_term(a.mul(b), x.times(y));
                }
            }
        }
        out
    }

    pub fn homogeneous_part(&self, degree: usize) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitute `u_i ↦ images[i]`.
    pub fn substitute(&self, images: &[Polynomial<C>]) -> Polynomial<C> {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |p| p.nvars);
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e as u32);
                }
            }
            out = &out + &t;
        }
        out
    }
}

impl<'a, C: Coefficient> Add<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, other: &'a Polynomial<C>) -> Polynomial<C> {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, C: Coefficient> Sub<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, other: &'a Polynomial<C>) -> Polynomial<C> {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.negate());
        }
        out
    }
}

impl<'a, C: Coefficient> Mul<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, other: &'a Polynomial<C>) -> Polynomial<C> {
        self.mul_truncated(other, usize::MAX)
    }
}

impl<C: Coefficient> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        self.scale(&C::one().negate())
    }
}

impl<C: Coefficient> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.degree() == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}
