//! Integer partitions and the small arithmetic helpers built on them.
//!
//! Partitions order first by size, then in descending lexicographic order
//! within a size, so `(4) < (3,1) < (2,2) < (2,1,1) < (1,1,1,1)`. Every
//! sparse map keyed by partitions in this crate iterates in that order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

type Parts = SmallVec<[u32; 8]>;

/// A nonincreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Parts,
}

impl Partition {
    /// The unique partition of zero.
    pub fn empty() -> Self {
        Partition { parts: Parts::new() }
    }

    /// The one-part partition `(n)`, or the empty partition for `n = 0`.
    pub fn single(n: u32) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition { parts: smallvec::smallvec![n] }
        }
    }

    /// `(1^n)`.
    pub fn ones(n: u32) -> Self {
        Partition { parts: std::iter::repeat(1).take(n as usize).collect() }
    }

    /// Validates that `parts` is nonincreasing and positive.
    pub fn new(parts: &[u32]) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(parts.to_vec()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts.to_vec()));
        }
        Ok(Partition { parts: parts.iter().copied().collect() })
    }

    /// Sorts arbitrary positive parts into a partition; zero parts are dropped.
    pub fn from_unsorted(parts: impl IntoIterator<Item = u32>) -> Self {
        let mut p: Parts = parts.into_iter().filter(|&x| x > 0).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts: p }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// |λ|
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Largest part, 0 for the empty partition.
    pub fn first(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Multiset union of parts.
    pub fn union(&self, other: &Partition) -> Partition {
        let (a, b) = (&self.parts, &other.parts);
        let mut out = Parts::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] >= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Partition { parts: out }
    }

    /// Every part multiplied by `m`.
    pub fn scale(&self, m: u32) -> Partition {
        Partition { parts: self.parts.iter().map(|&p| p * m).collect() }
    }

    /// The partition with its last (smallest) part removed.
    pub fn without_last(&self) -> Partition {
        let mut p = self.parts.clone();
        p.pop();
        Partition { parts: p }
    }

    /// Distinct parts with their multiplicities, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// z_λ = Π i^{m_i} m_i!, the centralizer order of a permutation of cycle type λ.
    pub fn z(&self) -> BigInt {
        let mut z = BigInt::one();
        for (part, mult) in self.multiplicities() {
            for j in 1..=mult {
                z *= BigInt::from(part) * BigInt::from(j);
            }
        }
        z
    }

    /// λ! = Π λ_i!
    pub fn factorial(&self) -> BigInt {
        self.parts.iter().map(|&p| factorial(p)).product()
    }

    /// The padded partition λ[n] = (n − |λ|, λ₁, …, λ_ℓ).
    pub fn pad(&self, n: u32) -> Result<Partition> {
        let size = self.size();
        if n < size + self.first() {
            return Err(Error::PadOutOfRange { lambda: self.parts.to_vec(), n });
        }
        let mut parts = Parts::with_capacity(self.len() + 1);
        if n > size {
            parts.push(n - size);
        }
        parts.extend_from_slice(&self.parts);
        Ok(Partition { parts })
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        Partition::new(&parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `n` in descending lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Parts::new();
    fill(n, n, &mut current, &mut out);
    out
}

fn fill(remaining: u32, max_part: u32, current: &mut Parts, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    for p in (1..=remaining.min(max_part)).rev() {
        current.push(p);
        fill(remaining - p, p, current, out);
        current.pop();
    }
}

/// Möbius function.
pub fn mobius(r: u32) -> i32 {
    assert!(r >= 1, "mobius is defined for r >= 1");
    let mut n = r;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    /// Independent partition counter: p(n, k) = number of partitions of n with parts ≤ k.
    fn count_dp(n: usize) -> u64 {
        let mut ways = vec![0u64; n + 1];
        ways[0] = 1;
        for part in 1..=n {
            for s in part..=n {
                ways[s] += ways[s - part];
            }
        }
        ways[n]
    }

    #[test]
    fn partitions_small() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        let four = partitions_of(4);
        assert_eq!(four, vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]);
        assert_eq!(partitions_of(12).len(), 77);
    }

    #[test]
    fn partition_counts_match_dp() {
        for n in 0..=30u32 {
            assert_eq!(partitions_of(n).len() as u64, count_dp(n as usize), "n = {n}");
        }
    }

    #[test]
    fn partitions_are_sorted_in_canonical_order() {
        let parts = partitions_of(9);
        assert!(parts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn z_values() {
        assert_eq!(p(&[7]).z(), BigInt::from(7));
        assert_eq!(Partition::ones(5).z(), factorial(5));
        assert_eq!(p(&[2, 1]).z(), BigInt::from(2));
        assert_eq!(Partition::empty().z(), BigInt::from(1));
    }

    #[test]
    fn inverse_z_sums_to_one() {
        for n in 0..=20 {
            let total = partitions_of(n)
                .iter()
                .fold(BigRational::zero(), |acc, l| acc + BigRational::new(BigInt::one(), l.z()));
            assert_eq!(total, BigRational::one(), "n = {n}");
        }
    }

    #[test]
    fn padding() {
        assert_eq!(p(&[1]).pad(5).unwrap(), p(&[4, 1]));
        assert_eq!(Partition::empty().pad(7).unwrap(), p(&[7]));
        assert_eq!(p(&[2, 2]).pad(7).unwrap(), p(&[3, 2, 2]));
        assert!(p(&[2, 2]).pad(5).is_err());
    }

    #[test]
    fn padding_is_injective() {
        let n = 12;
        let mut seen = std::collections::HashSet::new();
        for m in 0..=6 {
            for l in partitions_of(m) {
                if let Ok(padded) = l.pad(n) {
                    assert_eq!(padded.size(), n);
                    assert!(seen.insert(padded));
                }
            }
        }
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expected.iter().enumerate() {
            assert_eq!(mobius(i as u32 + 1), m, "mu({})", i + 1);
        }
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Partition::new(&[1, 2]).is_err());
        assert!(Partition::new(&[2, 0]).is_err());
    }

    #[test]
    fn json_shape() {
        let l = p(&[3, 2, 2]);
        assert_eq!(serde_json::to_string(&l).unwrap(), "[3,2,2]");
        let back: Partition = serde_json::from_str("[3,2,2]").unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }
}
