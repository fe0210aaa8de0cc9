//! Truncated multivariate power series with exact rational coefficients.
//!
//! A [`Series`] is an element of `Q[[x_1, ..., x_n]] / m^prec`: only the
//! coefficients of monomials of total degree `< prec` are known. Every
//! operation reports the tightest precision it can guarantee.
//!
//! Invariants:
//! - every stored exponent has total degree `< prec`
//! - no stored coefficient is zero
//! - terms iterate in graded-lexicographic order

mod arith;
mod compose;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use arith::dot;
pub use text::{parse_rational, rational_to_string, SeriesText, TermText};

/// Exponent vector of a monomial, ordered by total degree and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    degree: u32,
    entries: Vec<u32>,
}

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        let degree = entries.iter().sum();
        Exponent { degree, entries }
    }

    pub fn zero(nvars: usize) -> Self {
        Exponent {
            degree: 0,
            entries: vec![0; nvars],
        }
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut entries = vec![0; nvars];
        entries[var] = 1;
        Exponent { degree: 1, entries }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, var: usize) -> u32 {
        self.entries[var]
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent {
            degree: self.degree + other.degree,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Order of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// Least total degree of a nonzero term.
    Finite(u32),
    /// No term below `below`: the series is `0 mod m^below`, its true order is unknown.
    Vanishes { below: u32 },
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Vanishes { .. } => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Order::Vanishes { .. })
    }

    /// A certified lower bound for the true order.
    pub fn lower_bound(self) -> u32 {
        match self {
            Order::Finite(k) => k,
            Order::Vanishes { below } => below,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Vanishes { below } => write!(f, "inf (>= {below})"),
        }
    }
}

/// Truncated power series in `nvars` variables known modulo `m^prec`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    nvars: usize,
    prec: u32,
    terms: BTreeMap<Exponent, BigRational>,
}

impl Series {
    pub fn zero(nvars: usize, prec: u32) -> Self {
        Series {
            nvars,
            prec,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: BigRational, prec: u32) -> Self {
        let mut s = Series::zero(nvars, prec);
        s.insert(Exponent::zero(nvars), value);
        s
    }

    pub fn one(nvars: usize, prec: u32) -> Self {
        Series::constant(nvars, BigRational::one(), prec)
    }

    pub fn from_int(nvars: usize, value: i64, prec: u32) -> Self {
        Series::constant(nvars, BigRational::from_integer(value.into()), prec)
    }

    /// The coordinate function `x_var`.
    pub fn var(nvars: usize, var: usize, prec: u32) -> Self {
        assert!(var < nvars, "variable {var} out of range for {nvars}");
        let mut s = Series::zero(nvars, prec);
        s.insert(Exponent::unit(nvars, var), BigRational::one());
        s
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, coef: BigRational, prec: u32) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut s = Series::zero(nvars, prec);
        s.insert(Exponent::new(exps), coef);
        s
    }

    /// Build from `(exponents, coefficient)` pairs; terms of degree `>= prec` are dropped and
    /// repeated exponents are summed.
    pub fn from_terms<I>(nvars: usize, prec: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut s = Series::zero(nvars, prec);
        for (exps, coef) in terms {
            if exps.len() != nvars {
                return Err(Error::Arity {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            s.accumulate(Exponent::new(exps), coef);
        }
        Ok(s)
    }

    /// Small-integer convenience constructor used heavily in tests and fixtures.
    pub fn from_int_terms(nvars: usize, prec: u32, terms: &[(&[u32], i64)]) -> Self {
        Series::from_terms(
            nvars,
            prec,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), BigRational::from_integer((*c).into()))),
        )
        .expect("exponent length matches nvars")
    }

    pub(crate) fn from_map(
        nvars: usize,
        prec: u32,
        terms: BTreeMap<Exponent, BigRational>,
    ) -> Self {
        let mut s = Series { nvars, prec, terms };
        s.terms.retain(|e, c| e.degree < prec && !c.is_zero());
        s
    }

    pub(crate) fn insert(&mut self, e: Exponent, c: BigRational) {
        debug_assert_eq!(e.len(), self.nvars);
        if e.degree < self.prec && !c.is_zero() {
            self.terms.insert(e, c);
        }
    }

    pub(crate) fn accumulate(&mut self, e: Exponent, c: BigRational) {
        if e.degree >= self.prec || c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(&Exponent::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Exponent::zero(self.nvars))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// True when no term is stored, i.e. the series is `0 mod m^prec`.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.prec > 0 && !self.constant_term().is_zero()
    }

    pub fn order(&self) -> Order {
        match self.terms.keys().next() {
            Some(e) => Order::Finite(e.degree),
            None => Order::Vanishes { below: self.prec },
        }
    }

    /// Certified lower bound for the true order: `min(order, prec)`.
    pub fn valuation_bound(&self) -> u32 {
        self.order().lower_bound()
    }

    /// Largest exponent of `var` among stored terms.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e.entries[var]).max()
    }

    /// Reduce to `min(self.prec, prec)`.
    pub fn truncate(&self, prec: u32) -> Series {
        if prec >= self.prec {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.degree < prec)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Series {
            nvars: self.nvars,
            prec,
            terms,
        }
    }

    /// Reassign the precision label. Only for internal use where a sharper bound has been
    /// established by the caller; terms at or above the new precision are dropped.
    pub(crate) fn with_prec(mut self, prec: u32) -> Series {
        self.prec = prec;
        self.terms.retain(|e, _| e.degree < prec);
        self
    }

    /// Equality of the known parts at the common precision.
    pub fn agrees_with(&self, other: &Series) -> bool {
        let p = self.prec.min(other.prec);
        self.nvars == other.nvars && self.truncate(p) == other.truncate(p)
    }

    /// Order of `self - other` as a certified bound (capped by the common precision).
    pub fn agreement_order(&self, other: &Series) -> u32 {
        (self - other).valuation_bound()
    }

    pub fn map_coeffs(&self, f: impl Fn(&BigRational) -> BigRational) -> Series {
        Series::from_map(
            self.nvars,
            self.prec,
            self.terms.iter().map(|(e, c)| (e.clone(), f(c))).collect(),
        )
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, k) in e.entries.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", v + 1)?,
                    _ => write!(f, "*x{}^{}", v + 1, k)?,
                }
            }
        }
        write!(f, " + O(m^{})", self.prec)
    }
}

/// Convenience for building rationals in tests and fixtures.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Check that a slice of series shares `nvars`.
pub fn check_uniform(items: &[Series]) -> Result<usize> {
    let nvars = items.first().map(|s| s.nvars()).unwrap_or(0);
    for s in items {
        if s.nvars() != nvars {
            return Err(Error::NvarsMismatch {
                left: nvars,
                right: s.nvars(),
            });
        }
    }
    Ok(nvars)
}

/// Minimum precision over a collection, or `None` when empty.
pub fn min_prec<'a>(items: impl IntoIterator<Item = &'a Series>) -> Option<u32> {
    items.into_iter().map(|s| s.prec()).min()
}

#[cfg(test)]
mod tests;
