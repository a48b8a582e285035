//! Truncated bivariate power series in q and t.
//!
//! Storage is dense: the invariant path fills almost every coefficient below
//! the diagonal k ≤ n − 2, so a flat vector beats a map. Serialization lists
//! only nonzero coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::symfun::Caps;

#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<C: Coeff> {
    cap_n: u32,
    cap_k: u32,
    data: Vec<C>,
}

pub type IntSeries = BiSeries<BigInt>;
pub type RatSeries = BiSeries<BigRational>;

impl<C: Coeff> BiSeries<C> {
    pub fn zero(cap_n: u32, cap_k: u32) -> Self {
        let len = (cap_n as usize + 1) * (cap_k as usize + 1);
        BiSeries { cap_n, cap_k, data: vec![C::zero(); len] }
    }

    pub fn one(cap_n: u32, cap_k: u32) -> Self {
        Self::monomial(cap_n, cap_k, 0, 0, C::one())
    }

    /// `c·qⁿt^k`, or zero beyond the caps.
    pub fn monomial(cap_n: u32, cap_k: u32, n: u32, k: u32, c: C) -> Self {
        let mut s = Self::zero(cap_n, cap_k);
        if n <= cap_n && k <= cap_k {
            s.set(n, k, c);
        }
        s
    }

    /// Builds a series whose q^n coefficient is the t-polynomial `rows[n]`.
    pub fn from_rows(cap_n: u32, cap_k: u32, rows: &[Vec<C>]) -> Self {
        let mut s = Self::zero(cap_n, cap_k);
        for (n, row) in rows.iter().enumerate().take(cap_n as usize + 1) {
            for (k, c) in row.iter().enumerate().take(cap_k as usize + 1) {
                let i = s.idx(n as u32, k as u32);
                s.data[i] = c.clone();
            }
        }
        s
    }

    fn idx(&self, n: u32, k: u32) -> usize {
        n as usize * (self.cap_k as usize + 1) + k as usize
    }

    pub fn caps(&self) -> Caps {
        Caps::new(self.cap_n, self.cap_k)
    }

    pub fn get(&self, n: u32, k: u32) -> &C {
        assert!(n <= self.cap_n && k <= self.cap_k, "coefficient ({n},{k}) beyond caps");
        &self.data[self.idx(n, k)]
    }

    /// The coefficient, or zero beyond the caps.
    pub fn coeff(&self, n: u32, k: u32) -> C {
        if n <= self.cap_n && k <= self.cap_k {
            self.data[self.idx(n, k)].clone()
        } else {
            C::zero()
        }
    }

    pub fn set(&mut self, n: u32, k: u32, c: C) {
        let i = self.idx(n, k);
        self.data[i] = c;
    }

    /// Adds `c` at qⁿt^k; silently ignores terms beyond the caps.
    pub fn add_at(&mut self, n: u32, k: u32, c: &C) {
        if n <= self.cap_n && k <= self.cap_k {
            let i = self.idx(n, k);
            self.data[i] += c;
        }
    }

    /// The t-polynomial multiplying qⁿ.
    pub fn row(&self, n: u32) -> &[C] {
        let w = self.cap_k as usize + 1;
        &self.data[n as usize * w..(n as usize + 1) * w]
    }

    /// The t-polynomial multiplying qⁿ with trailing zeros removed.
    pub fn poly(&self, n: u32) -> Vec<C> {
        let mut v = self.row(n).to_vec();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = (u32, u32, &C)> {
        let w = self.cap_k as usize + 1;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| ((i / w) as u32, (i % w) as u32, c))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.caps() != other.caps() {
            return Err(Error::CapMismatch { left: self.caps(), right: other.caps() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        BiSeries { cap_n: self.cap_n, cap_k: self.cap_k, data: self.data.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, s: &C) -> Self {
        BiSeries { cap_n: self.cap_n, cap_k: self.cap_k, data: self.data.iter().map(|c| c.clone() * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.cap_n, self.cap_k);
        let a_terms: Vec<_> = self.iter_nonzero().collect();
        let b_terms: Vec<_> = other.iter_nonzero().collect();
        for &(n1, k1, c1) in &a_terms {
            for &(n2, k2, c2) in &b_terms {
                if n1 + n2 <= self.cap_n && k1 + k2 <= self.cap_k {
                    let i = out.idx(n1 + n2, k1 + k2);
                    out.data[i] += &(c1.clone() * c2);
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by q^a t^b.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        let mut out = Self::zero(self.cap_n, self.cap_k);
        for (n, k, c) in self.iter_nonzero() {
            out.add_at(n + a, k + b, c);
        }
        out
    }

    /// f^{[m]}(q, t) = f(q^m, t^m).
    pub fn bracket_power(&self, m: u32) -> Self {
        assert!(m >= 1, "bracket power needs m >= 1");
        let mut out = Self::zero(self.cap_n, self.cap_k);
        for (n, k, c) in self.iter_nonzero() {
            out.add_at(n * m, k * m, c);
        }
        out
    }

    /// Restriction to smaller caps.
    pub fn truncate(&self, cap_n: u32, cap_k: u32) -> Result<Self> {
        if cap_n > self.cap_n || cap_k > self.cap_k {
            return Err(Error::TruncationOutOfRange { n: cap_n, k: cap_k, caps: self.caps() });
        }
        let mut out = Self::zero(cap_n, cap_k);
        for (n, k, c) in self.iter_nonzero() {
            out.add_at(n, k, c);
        }
        Ok(out)
    }

    pub fn to_rational(&self) -> RatSeries {
        BiSeries { cap_n: self.cap_n, cap_k: self.cap_k, data: self.data.iter().map(|c| c.to_rational()).collect() }
    }
}

impl RatSeries {
    pub fn to_integral(&self, context: &str) -> Result<IntSeries> {
        let mut out = IntSeries::zero(self.cap_n, self.cap_k);
        for (n, k, c) in self.iter_nonzero() {
            let v = crate::coeff::as_integer(c)
                .ok_or_else(|| Error::NonIntegral { location: format!("{context}: q^{n} t^{k}"), value: c.to_string() })?;
            out.set(n, k, v);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    q: u32,
    t: u32,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct WireSeries {
    cap_n: u32,
    cap_k: u32,
    terms: Vec<WireTerm>,
}

impl<C: Coeff> Serialize for BiSeries<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireSeries {
            cap_n: self.cap_n,
            cap_k: self.cap_k,
            terms: self.iter_nonzero().map(|(q, t, c)| WireTerm { q, t, c: c.to_decimal() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de, C: Coeff> Deserialize<'de> for BiSeries<C> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = WireSeries::deserialize(d)?;
        let mut out = Self::zero(wire.cap_n, wire.cap_k);
        for term in wire.terms {
            if term.q > wire.cap_n || term.t > wire.cap_k {
                return Err(D::Error::custom(format!("term q^{} t^{} beyond caps", term.q, term.t)));
            }
            let c = C::parse_decimal(&term.c).ok_or_else(|| D::Error::custom(format!("bad coefficient {:?}", term.c)))?;
            out.set(term.q, term.t, c);
        }
        Ok(out)
    }
}
