//! The truncated graded ring Λ⟦t⟧ of symmetric functions with a
//! cohomological grading variable `t`.
//!
//! A [`SymPoly`] is a sparse map `(λ, k) → c` meaning `Σ c · b_λ · t^k` in one
//! of the bases `b = h, p, s`. Every value carries its truncation caps
//! `(cap_n, cap_k)`: all stored keys satisfy `|λ| ≤ cap_n` and `k ≤ cap_k`,
//! and binary operations refuse operands with different caps.

mod basis;
mod inner;
mod schur;
mod specialize;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::coeff::{as_integer, Coeff};
use crate::error::{Error, Result};
use crate::partition::Partition;

pub use basis::{h_to_p, p_to_h, p_to_h_integral, power_sum_in_h};
pub use inner::internal_product;
pub use schur::{h_in_schur, mult_lambda, schur_to_h, to_h, to_schur};
pub use specialize::{inv_project, rank_specialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    H,
    P,
    S,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::H => "H",
            Basis::P => "P",
            Basis::S => "S",
        }
    }
}

/// Maximal x-degree and t-degree retained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Caps {
    pub n: u32,
    pub k: u32,
}

impl Caps {
    pub fn new(n: u32, k: u32) -> Self {
        Caps { n, k }
    }

    pub fn admits(&self, lambda_size: u32, t: u32) -> bool {
        lambda_size <= self.n && t <= self.k
    }

    pub fn dominates(&self, other: &Caps) -> bool {
        self.n >= other.n && self.k >= other.k
    }
}

pub type Key = (Partition, u32);

#[derive(Clone, Debug, PartialEq)]
pub struct SymPoly<C: Coeff> {
    basis: Basis,
    caps: Caps,
    terms: BTreeMap<Key, C>,
}

pub type IntSym = SymPoly<BigInt>;
pub type RatSym = SymPoly<BigRational>;

impl<C: Coeff> SymPoly<C> {
    pub fn zero(basis: Basis, caps: Caps) -> Self {
        SymPoly { basis, caps, terms: BTreeMap::new() }
    }

    pub fn one(basis: Basis, caps: Caps) -> Self {
        Self::monomial(basis, caps, Partition::empty(), 0, C::one())
    }

    /// `c · b_λ · t^k`, or zero if the term lies beyond the caps.
    pub fn monomial(basis: Basis, caps: Caps, lambda: Partition, k: u32, c: C) -> Self {
        let mut out = Self::zero(basis, caps);
        if caps.admits(lambda.size(), k) && !c.is_zero() {
            out.terms.insert((lambda, k), c);
        }
        out
    }

    /// Sums repeated keys, drops zeros and anything beyond the caps.
    pub fn from_terms(basis: Basis, caps: Caps, terms: impl IntoIterator<Item = (Partition, u32, C)>) -> Self {
        let mut out = Self::zero(basis, caps);
        for (lambda, k, c) in terms {
            out.add_term(lambda, k, &c);
        }
        out
    }

    pub(crate) fn from_map(basis: Basis, caps: Caps, map: FxHashMap<Key, C>) -> Self {
        let terms = map
            .into_iter()
            .filter(|((l, k), c)| !c.is_zero() && caps.admits(l.size(), *k))
            .collect();
        SymPoly { basis, caps, terms }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn terms(&self) -> &BTreeMap<Key, C> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, u32, &C)> {
        self.terms.iter().map(|((l, k), c)| (l, *k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, lambda: &Partition, k: u32) -> C {
        self.terms.get(&(lambda.clone(), k)).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Partition::empty(), 0)
    }

    pub fn add_term(&mut self, lambda: Partition, k: u32, c: &C) {
        if c.is_zero() || !self.caps.admits(lambda.size(), k) {
            return;
        }
        let key = (lambda, k);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.caps != other.caps {
            return Err(Error::CapMismatch { left: self.caps, right: other.caps });
        }
        if self.basis != other.basis {
            return Err(Error::WrongBasis { op: "mixed-basis arithmetic", basis: other.basis.name() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for ((l, k), c) in &other.terms {
            out.add_term(l.clone(), *k, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SymPoly {
            basis: self.basis,
            caps: self.caps,
            terms: self.terms.iter().map(|(key, c)| (key.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero(self.basis, self.caps);
        }
        SymPoly {
            basis: self.basis,
            caps: self.caps,
            terms: self.terms.iter().map(|(key, c)| (key.clone(), c.clone() * s)).collect(),
        }
    }

    /// Multiplies by `t^j`, dropping what falls beyond `cap_k`.
    pub fn mul_t(&self, j: u32) -> Self {
        SymPoly {
            basis: self.basis,
            caps: self.caps,
            terms: self
                .terms
                .iter()
                .filter(|((_, k), _)| k + j <= self.caps.k)
                .map(|((l, k), c)| ((l.clone(), k + j), c.clone()))
                .collect(),
        }
    }

    /// Product in the h or p basis, where `b_λ · b_μ = b_{λ∪μ}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.basis == Basis::S {
            return Err(Error::WrongBasis { op: "mul", basis: "S" });
        }
        let mut acc = FxHashMap::default();
        mul_into(&mut acc, self, other, 0, self.caps);
        Ok(Self::from_map(self.basis, self.caps, acc))
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut out = Self::one(self.basis, self.caps);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// F_{≤(n,k)} with the caps tightened to `(n, k)`.
    pub fn trunc(&self, n: u32, k: u32) -> Result<Self> {
        if n > self.caps.n || k > self.caps.k {
            return Err(Error::TruncationOutOfRange { n, k, caps: self.caps });
        }
        Ok(self.truncate_unchecked(Caps::new(n, k)))
    }

    /// Truncates to `caps` without requiring that they be tighter. Only sound
    /// when the caller knows no information beyond `self.caps` is needed.
    pub(crate) fn truncate_unchecked(&self, caps: Caps) -> Self {
        SymPoly {
            basis: self.basis,
            caps,
            terms: self
                .terms
                .iter()
                .filter(|((l, k), _)| caps.admits(l.size(), *k))
                .map(|(key, c)| (key.clone(), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous component of x-degree `n`.
    pub fn degree_part(&self, n: u32) -> Self {
        SymPoly {
            basis: self.basis,
            caps: self.caps,
            terms: self
                .terms
                .iter()
                .filter(|((l, _), _)| l.size() == n)
                .map(|(key, c)| (key.clone(), c.clone()))
                .collect(),
        }
    }

    /// The coefficient of `t^k`, as a value with no t-dependence.
    pub fn t_part(&self, k: u32) -> Self {
        SymPoly {
            basis: self.basis,
            caps: self.caps,
            terms: self
                .terms
                .iter()
                .filter(|((_, j), _)| *j == k)
                .map(|((l, _), c)| ((l.clone(), 0), c.clone()))
                .collect(),
        }
    }

    pub fn x_degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().map(|(l, _)| l.size())
    }

    pub fn max_t(&self) -> Option<u32> {
        self.terms.keys().map(|(_, k)| *k).max()
    }

    pub fn min_t(&self) -> Option<u32> {
        self.terms.keys().map(|(_, k)| *k).min()
    }

    /// Some(n) when every term has x-degree n.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.x_degrees();
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn to_rational(&self) -> RatSym {
        SymPoly {
            basis: self.basis,
            caps: self.caps,
            terms: self.terms.iter().map(|(key, c)| (key.clone(), c.to_rational())).collect(),
        }
    }
}

impl RatSym {
    /// Asserts that every coefficient is an integer.
    pub fn to_integral(&self, context: &str) -> Result<IntSym> {
        let mut terms = BTreeMap::new();
        for ((l, k), c) in &self.terms {
            let v = as_integer(c).ok_or_else(|| Error::NonIntegral {
                location: format!("{context}: {}{l} t^{k}", self.basis.name()),
                value: c.to_string(),
            })?;
            terms.insert((l.clone(), *k), v);
        }
        Ok(SymPoly { basis: self.basis, caps: self.caps, terms })
    }
}

impl IntSym {
    /// h_n
    pub fn h(n: u32, caps: Caps) -> Self {
        Self::monomial(Basis::H, caps, Partition::single(n), 0, BigInt::one())
    }

    /// h_λ
    pub fn h_lambda(lambda: Partition, caps: Caps) -> Self {
        Self::monomial(Basis::H, caps, lambda, 0, BigInt::one())
    }

    /// s_λ, stored in the S basis.
    pub fn s(lambda: Partition, caps: Caps) -> Self {
        Self::monomial(Basis::S, caps, lambda, 0, BigInt::one())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| *c >= BigInt::zero())
    }
}

/// `acc += a · b · t^shift`, keeping only terms within `caps`. Both operands
/// must be in a basis where products are part unions (h or p).
pub(crate) fn mul_into<C: Coeff>(
    acc: &mut FxHashMap<Key, C>,
    a: &SymPoly<C>,
    b: &SymPoly<C>,
    shift: u32,
    caps: Caps,
) {
    let b_terms: Vec<(&Partition, u32, u32, &C)> =
        b.terms.iter().map(|((l, k), c)| (l, l.size(), *k, c)).collect();
    for ((la, ka), ca) in &a.terms {
        let na = la.size();
        let ka = ka + shift;
        if na > caps.n || ka > caps.k {
            continue;
        }
        for &(lb, nb, kb, cb) in &b_terms {
            if na + nb > caps.n || ka + kb > caps.k {
                continue;
            }
            let prod = ca.clone() * cb;
            let key = (la.union(lb), ka + kb);
            match acc.get_mut(&key) {
                Some(v) => *v += &prod,
                None => {
                    acc.insert(key, prod);
                }
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    lambda: Partition,
    t: u32,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct WireSymPoly {
    basis: Basis,
    cap_n: u32,
    cap_k: u32,
    terms: Vec<WireTerm>,
}

impl<C: Coeff> Serialize for SymPoly<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireSymPoly {
            basis: self.basis,
            cap_n: self.caps.n,
            cap_k: self.caps.k,
            terms: self
                .terms
                .iter()
                .map(|((l, k), c)| WireTerm { lambda: l.clone(), t: *k, c: c.to_decimal() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, C: Coeff> Deserialize<'de> for SymPoly<C> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = WireSymPoly::deserialize(d)?;
        let caps = Caps::new(wire.cap_n, wire.cap_k);
        let mut out = SymPoly::zero(wire.basis, caps);
        for term in wire.terms {
            let c = C::parse_decimal(&term.c).ok_or_else(|| D::Error::custom(format!("bad coefficient {:?}", term.c)))?;
            if c.is_zero() {
                return Err(D::Error::custom("stored coefficient is zero"));
            }
            if !caps.admits(term.lambda.size(), term.t) {
                return Err(D::Error::custom(format!("term {} t^{} beyond caps", term.lambda, term.t)));
            }
            if out.terms.insert((term.lambda, term.t), c).is_some() {
                return Err(D::Error::custom("duplicate term"));
            }
        }
        Ok(out)
    }
}
