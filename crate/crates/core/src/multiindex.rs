//! Finitely supported exponent sequences and the truncation window they live in.
//!
//! A [`MultiIndex`] is stored sparsely as `(position, exponent)` pairs with
//! 1-based, strictly increasing positions and non-zero exponents, so every
//! index has exactly one representation. The total order on indices is
//! graded lexicographic: lower total degree first, and within one degree the
//! dense exponent vector that is lexicographically *larger* comes first, so
//! `(1,0) < (0,1)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Default upper bound on the number of indices [`enumerate`] may produce.
pub const DEFAULT_ENUMERATION_CAP: usize = 5_000_000;

/// Window of admitted indices: support inside `1..=num_vars`, total degree at
/// most `max_degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub num_vars: usize,
    pub max_degree: u32,
}

impl TruncationSpec {
    pub fn new(num_vars: usize, max_degree: u32) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::InvalidSpec("num_vars must be positive".into()));
        }
        Ok(Self {
            num_vars,
            max_degree,
        })
    }

    pub fn admits(&self, alpha: &MultiIndex) -> bool {
        alpha.degree() <= self.max_degree as u64
            && alpha.max_position().is_none_or(|p| p <= self.num_vars)
    }

    /// Number of admitted indices, `C(m + d, d)`.
    pub fn index_count(&self) -> u128 {
        binomial((self.num_vars + self.max_degree as usize) as u128, self.max_degree as u128)
    }

    pub(crate) fn check_same(&self, other: &TruncationSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpecMismatch {
                left: *self,
                right: *other,
            })
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// A finitely supported sequence of non-negative integers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    terms: SmallVec<[(u32, u32); 4]>,
}

impl MultiIndex {
    /// The zero index `(0, 0, ...)`.
    pub fn zero() -> Self {
        Self::default()
    }

    /// `e_position`, the index with a single 1 at the given 1-based position.
    pub fn unit(position: usize) -> Self {
        assert!(position >= 1, "positions are 1-based");
        Self {
            terms: smallvec::smallvec![(position as u32, 1)],
        }
    }

    /// Builds an index from a dense exponent slice; `dense[0]` is position 1.
    pub fn from_dense(dense: &[u32]) -> Self {
        let terms = dense
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i as u32 + 1, e))
            .collect();
        Self { terms }
    }

    /// Builds an index from `(position, exponent)` pairs in any order.
    /// Zero exponents are dropped and repeated positions are summed.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut v: Vec<(u32, u32)> = pairs
            .into_iter()
            .filter(|&(_, e)| e != 0)
            .map(|(p, e)| {
                assert!(p >= 1, "positions are 1-based");
                (p as u32, e)
            })
            .collect();
        v.sort_unstable_by_key(|&(p, _)| p);
        let mut terms: SmallVec<[(u32, u32); 4]> = SmallVec::new();
        for (p, e) in v {
            match terms.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => terms.push((p, e)),
            }
        }
        Self { terms }
    }

    /// Dense exponents of length `num_vars`; fails when the support reaches
    /// past `num_vars`.
    pub fn to_dense(&self, num_vars: usize) -> Option<Vec<u32>> {
        if self.max_position().is_some_and(|p| p > num_vars) {
            return None;
        }
        let mut dense = vec![0; num_vars];
        for &(p, e) in &self.terms {
            dense[p as usize - 1] = e;
        }
        Some(dense)
    }

    /// Exponent at a 1-based position.
    pub fn exponent(&self, position: usize) -> u32 {
        self.terms
            .binary_search_by_key(&(position as u32), |&(p, _)| p)
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    /// Non-zero `(position, exponent)` pairs in increasing position.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.terms.iter().map(|&(p, e)| (p as usize, e))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.terms.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn max_position(&self) -> Option<usize> {
        self.terms.last().map(|&(p, _)| p as usize)
    }

    /// Componentwise sum.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let (a, b) = (&self.terms, &other.terms);
        let mut terms = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    terms.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    terms.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&a[i..]);
        terms.extend_from_slice(&b[j..]);
        MultiIndex { terms }
    }

    /// `α!`, the product of the component factorials.
    pub fn factorial(&self) -> Result<u128> {
        let mut acc: u128 = 1;
        for &(_, e) in &self.terms {
            for n in 2..=e as u128 {
                acc = acc
                    .checked_mul(n)
                    .ok_or_else(|| Error::FactorialOverflow(self.to_string()))?;
            }
        }
        Ok(acc)
    }

    /// `∏_j (2j)^{s·α_j}`. With `s = 1` this is the weight `(2ℕ)^α`.
    ///
    /// The result may underflow to `0.0` or overflow to `+∞`.
    pub fn weight2n(&self, s: f64) -> f64 {
        let integral = s.fract() == 0.0 && s.abs() <= i32::MAX as f64;
        if integral {
            let s = s as i64;
            let mut acc = 1.0f64;
            for &(p, e) in &self.terms {
                let power = s.saturating_mul(e as i64);
                let power = power.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
                acc *= (2.0 * p as f64).powi(power);
            }
            acc
        } else {
            let log: f64 = self
                .terms
                .iter()
                .map(|&(p, e)| e as f64 * (2.0 * p as f64).ln())
                .sum();
            (s * log).exp()
        }
    }

    /// `z^α` for a point with at least `max_position()` coordinates.
    pub(crate) fn monomial_value(&self, z: &[num_complex::Complex64]) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(1.0, 0.0);
        for &(p, e) in &self.terms {
            acc *= z[p as usize - 1].powu(e);
        }
        acc
    }

    /// `|z|^α` for real non-negative moduli.
    pub(crate) fn modulus_value(&self, moduli: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|&(p, e)| moduli[p as usize - 1].powi(e as i32))
            .product()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                // the side with a positive exponent at the earliest differing
                // position is lexicographically larger and sorts first
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(&(pa, ea)), Some(&(pb, eb))) => {
                    if pa < pb {
                        return Ordering::Less;
                    }
                    if pb < pa {
                        return Ordering::Greater;
                    }
                    match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord.reverse(),
                    }
                }
            }
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = self.max_position().unwrap_or(1);
        let dense = self.to_dense(len).unwrap_or_default();
        write!(f, "(")?;
        for (i, e) in dense.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Every index admitted by `spec`, in graded lexicographic order.
pub fn enumerate(spec: &TruncationSpec) -> Result<Vec<MultiIndex>> {
    enumerate_capped(spec, DEFAULT_ENUMERATION_CAP)
}

/// [`enumerate`] with an explicit cap on the output size.
pub fn enumerate_capped(spec: &TruncationSpec, cap: usize) -> Result<Vec<MultiIndex>> {
    let needed = spec.index_count();
    if needed > cap as u128 {
        return Err(Error::ResourceLimit { needed, cap });
    }
    let mut out = Vec::with_capacity(needed as usize);
    let mut dense = vec![0u32; spec.num_vars];
    for degree in 0..=spec.max_degree {
        compositions(&mut dense, 0, degree, &mut out);
    }
    Ok(out)
}

fn compositions(dense: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == dense.len() {
        dense[pos] = remaining;
        out.push(MultiIndex::from_dense(dense));
        dense[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        dense[pos] = e;
        compositions(dense, pos + 1, remaining - e, out);
    }
    dense[pos] = 0;
}
