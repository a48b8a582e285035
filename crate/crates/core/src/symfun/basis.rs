//! Change of basis between h and p.
//!
//! Expansions of single basis elements are memoized process-wide. To keep the
//! hot loops in integer arithmetic, h_λ is stored scaled by λ! (so every
//! p-coefficient is an integer), and p_λ in the h basis is integral already.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::{Basis, IntSym, Key, RatSym, SymPoly};
use crate::error::{Error, Result};
use crate::partition::{factorial, partitions_of, Partition};

type Expansion = Arc<Vec<(Partition, BigInt)>>;
type Memo = RwLock<FxHashMap<Partition, Expansion>>;

fn memo_get(memo: &Memo, key: &Partition) -> Option<Expansion> {
    memo.read().expect("memo poisoned").get(key).cloned()
}

fn memo_put(memo: &Memo, key: Partition, value: Expansion) -> Expansion {
    memo.write().expect("memo poisoned").entry(key).or_insert(value).clone()
}

fn product(a: &[(Partition, BigInt)], b: &[(Partition, BigInt)]) -> Vec<(Partition, BigInt)> {
    let mut acc: FxHashMap<Partition, BigInt> = FxHashMap::default();
    for (la, ca) in a {
        for (lb, cb) in b {
            *acc.entry(la.union(lb)).or_default() += ca * cb;
        }
    }
    let mut out: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// λ!·h_λ in the p basis. All coefficients are integers because m!/z_μ is.
fn h_scaled_in_p(lambda: &Partition) -> Expansion {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(e) = memo_get(memo, lambda) {
        return e;
    }
    let value = match lambda.parts() {
        [] => vec![(Partition::empty(), BigInt::one())],
        [m] => {
            let fm = factorial(*m);
            partitions_of(*m).into_iter().map(|mu| {
                let c = &fm / mu.z();
                (mu, c)
            }).collect()
        }
        parts => {
            let last = *parts.last().unwrap();
            product(&h_scaled_in_p(&lambda.without_last()), &h_scaled_in_p(&Partition::single(last)))
        }
    };
    memo_put(memo, lambda.clone(), Arc::new(value))
}

/// p_λ in the h basis.
fn p_in_h(lambda: &Partition) -> Expansion {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(e) = memo_get(memo, lambda) {
        return e;
    }
    let value = match lambda.parts() {
        [] => vec![(Partition::empty(), BigInt::one())],
        [n] => {
            // Newton: p_n = n h_n − Σ_{i<n} h_{n−i} p_i
            let n = *n;
            let mut acc: FxHashMap<Partition, BigInt> = FxHashMap::default();
            acc.insert(Partition::single(n), BigInt::from(n));
            for i in 1..n {
                let h = Partition::single(n - i);
                for (mu, c) in p_in_h(&Partition::single(i)).iter() {
                    *acc.entry(mu.union(&h)).or_default() -= c;
                }
            }
            let mut out: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            out.sort_by(|x, y| x.0.cmp(&y.0));
            out
        }
        parts => {
            let last = *parts.last().unwrap();
            product(&p_in_h(&lambda.without_last()), &p_in_h(&Partition::single(last)))
        }
    };
    memo_put(memo, lambda.clone(), Arc::new(value))
}

/// p_n expanded in the h basis, as (λ, coefficient) pairs in canonical order.
pub fn power_sum_in_h(n: u32) -> Vec<(Partition, BigInt)> {
    p_in_h(&Partition::single(n)).as_ref().clone()
}

fn bump(acc: &mut FxHashMap<Key, BigInt>, key: Key, v: BigInt) {
    match acc.get_mut(&key) {
        Some(x) => *x += v,
        None => {
            acc.insert(key, v);
        }
    }
}

/// Converts an h-basis value to the p basis.
pub fn h_to_p(f: &IntSym) -> Result<RatSym> {
    if f.basis() != Basis::H {
        return Err(Error::WrongBasis { op: "h_to_p", basis: f.basis().name() });
    }
    // The degree-d part is accumulated with common denominator d!.
    let mut acc: FxHashMap<Key, BigInt> = FxHashMap::default();
    let mut scale: FxHashMap<u32, BigInt> = FxHashMap::default();
    for (lambda, k, c) in f.iter() {
        let d = lambda.size();
        let fd = scale.entry(d).or_insert_with(|| factorial(d)).clone();
        let mult = c * (fd / lambda.factorial());
        for (mu, e) in h_scaled_in_p(lambda).iter() {
            bump(&mut acc, (mu.clone(), k), &mult * e);
        }
    }
    let map = acc
        .into_iter()
        .map(|((mu, k), v)| {
            let d = mu.size();
            let r = BigRational::new(v, scale[&d].clone());
            ((mu, k), r)
        })
        .collect();
    Ok(SymPoly::from_map(Basis::P, f.caps(), map))
}

fn p_to_h_scaled(f: &RatSym) -> Result<(FxHashMap<Key, BigInt>, BigInt)> {
    if f.basis() != Basis::P {
        return Err(Error::WrongBasis { op: "p_to_h", basis: f.basis().name() });
    }
    let mut l = BigInt::one();
    for (_, _, c) in f.iter() {
        l = l.lcm(c.denom());
    }
    let mut acc: FxHashMap<Key, BigInt> = FxHashMap::default();
    for (lambda, k, c) in f.iter() {
        let scaled = c.numer() * (&l / c.denom());
        for (mu, e) in p_in_h(lambda).iter() {
            bump(&mut acc, (mu.clone(), k), &scaled * e);
        }
    }
    Ok((acc, l))
}

/// Exact conversion from p to h. The result may have rational coefficients.
pub fn p_to_h(f: &RatSym) -> Result<RatSym> {
    let (acc, l) = p_to_h_scaled(f)?;
    let map = acc.into_iter().map(|(key, v)| (key, BigRational::new(v, l.clone()))).collect();
    Ok(SymPoly::from_map(Basis::H, f.caps(), map))
}

/// p to h, asserting that every resulting coefficient is an integer.
pub fn p_to_h_integral(f: &RatSym, context: &str) -> Result<IntSym> {
    let (acc, l) = p_to_h_scaled(f)?;
    let mut map = FxHashMap::default();
    for ((mu, k), v) in acc {
        if v.is_zero() {
            continue;
        }
        let (q, r) = v.div_rem(&l);
        if !r.is_zero() {
            return Err(Error::NonIntegral {
                location: format!("{context}: h{mu} t^{k}"),
                value: BigRational::new(v, l.clone()).to_string(),
            });
        }
        map.insert((mu, k), q);
    }
    Ok(SymPoly::from_map(Basis::H, f.caps(), map))
}

impl IntSym {
    pub fn to_p_basis(&self) -> Result<RatSym> {
        h_to_p(&super::to_h(self)?)
    }
}

impl RatSym {
    /// Exact h-basis form; see [`p_to_h`].
    pub fn to_h_basis(&self) -> Result<RatSym> {
        p_to_h(self)
    }
}
