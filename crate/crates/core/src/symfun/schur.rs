//! Schur functions: h → s by Kostka numbers (built with the Pieri rule) and
//! s → h by Jacobi–Trudi determinants.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::{Basis, IntSym, Key, SymPoly};
use crate::error::{Error, Result};
use crate::partition::Partition;

type Expansion = Arc<Vec<(Partition, BigInt)>>;

/// All ρ with ρ/ν a horizontal strip of size m.
fn pieri(nu: &Partition, m: u32) -> Vec<Partition> {
    let nu = nu.parts();
    let mut out = Vec::new();
    let mut rho = Vec::with_capacity(nu.len() + 1);
    pieri_rec(nu, 0, m, &mut rho, &mut out);
    out
}

fn pieri_rec(nu: &[u32], i: usize, left: u32, rho: &mut Vec<u32>, out: &mut Vec<Partition>) {
    let cur = nu.get(i).copied().unwrap_or(0);
    if i > nu.len() {
        if left == 0 {
            out.push(Partition::from_unsorted(rho.iter().copied()));
        }
        return;
    }
    // ρ_i ranges over [ν_i, ν_{i−1}], unbounded above for the first row.
    let upper = if i == 0 { cur + left } else { (nu[i - 1]).min(cur + left) };
    for r in (cur..=upper).rev() {
        rho.push(r);
        pieri_rec(nu, i + 1, left - (r - cur), rho, out);
        rho.pop();
    }
}

/// h_λ in the Schur basis; the coefficients are Kostka numbers K_{ν,λ}.
pub fn h_in_schur(lambda: &Partition) -> Vec<(Partition, BigInt)> {
    h_in_schur_shared(lambda).as_ref().clone()
}

fn h_in_schur_shared(lambda: &Partition) -> Expansion {
    static MEMO: OnceLock<RwLock<FxHashMap<Partition, Expansion>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(e) = memo.read().expect("memo poisoned").get(lambda) {
        return e.clone();
    }
    let value = if lambda.is_empty() {
        vec![(Partition::empty(), BigInt::one())]
    } else {
        let last = *lambda.parts().last().unwrap();
        let mut acc: FxHashMap<Partition, BigInt> = FxHashMap::default();
        for (nu, c) in h_in_schur_shared(&lambda.without_last()).iter() {
            for rho in pieri(nu, last) {
                *acc.entry(rho).or_default() += c;
            }
        }
        let mut v: Vec<_> = acc.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    };
    let value = Arc::new(value);
    memo.write().expect("memo poisoned").entry(lambda.clone()).or_insert(value).clone()
}

/// s_λ in the h basis by the Jacobi–Trudi determinant det(h_{λ_i − i + j}).
pub fn schur_to_h(lambda: &Partition) -> Vec<(Partition, BigInt)> {
    static MEMO: OnceLock<RwLock<FxHashMap<Partition, Expansion>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(e) = memo.read().expect("memo poisoned").get(lambda) {
        return e.as_ref().clone();
    }
    let parts = lambda.parts();
    let mut minors = FxHashMap::default();
    let det = minor(parts, 0, 0, &mut minors);
    let mut v: Vec<_> = det.iter().filter(|(_, c)| !c.is_zero()).map(|(l, c)| (l.clone(), c.clone())).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    memo.write().expect("memo poisoned").insert(lambda.clone(), Arc::new(v.clone()));
    v
}

/// Determinant of rows `row..` against the columns not in `used`, expanded
/// along the first remaining row.
fn minor(
    parts: &[u32],
    row: usize,
    used: u64,
    memo: &mut FxHashMap<(usize, u64), Arc<FxHashMap<Partition, BigInt>>>,
) -> Arc<FxHashMap<Partition, BigInt>> {
    let l = parts.len();
    if row == l {
        let mut one = FxHashMap::default();
        one.insert(Partition::empty(), BigInt::one());
        return Arc::new(one);
    }
    if let Some(m) = memo.get(&(row, used)) {
        return m.clone();
    }
    let mut acc: FxHashMap<Partition, BigInt> = FxHashMap::default();
    let mut position = 0;
    for col in 0..l {
        if used & (1 << col) != 0 {
            continue;
        }
        let sign_negative = position % 2 == 1;
        position += 1;
        let index = parts[row] as i64 - row as i64 + col as i64;
        if index < 0 {
            continue;
        }
        let h = Partition::single(index as u32);
        let rest = minor(parts, row + 1, used | (1 << col), memo);
        for (mu, c) in rest.iter() {
            let entry = acc.entry(mu.union(&h)).or_default();
            if sign_negative {
                *entry -= c;
            } else {
                *entry += c;
            }
        }
    }
    let acc = Arc::new(acc);
    memo.insert((row, used), acc.clone());
    acc
}

/// The same element in the h basis. Accepts H (returned as is) or S.
pub fn to_h(f: &IntSym) -> Result<IntSym> {
    match f.basis() {
        Basis::H => Ok(f.clone()),
        Basis::S => {
            let mut acc: FxHashMap<Key, BigInt> = FxHashMap::default();
            for (lambda, k, c) in f.iter() {
                for (mu, e) in schur_to_h(lambda) {
                    *acc.entry((mu, k)).or_default() += c * e;
                }
            }
            Ok(SymPoly::from_map(Basis::H, f.caps(), acc))
        }
        Basis::P => Err(Error::WrongBasis { op: "to_h", basis: "P" }),
    }
}

/// Schur expansion. Accepts H or S (returned as is).
pub fn to_schur(f: &IntSym) -> Result<IntSym> {
    match f.basis() {
        Basis::S => Ok(f.clone()),
        Basis::H => {
            let mut acc: FxHashMap<Key, BigInt> = FxHashMap::default();
            for (lambda, k, c) in f.iter() {
                for (nu, e) in h_in_schur_shared(lambda).iter() {
                    *acc.entry((nu.clone(), k)).or_default() += c * e;
                }
            }
            Ok(SymPoly::from_map(Basis::S, f.caps(), acc))
        }
        Basis::P => Err(Error::WrongBasis { op: "to_schur", basis: "P" }),
    }
}

/// The multiplicity of s_λ·t^k in F.
pub fn mult_lambda(f: &IntSym, lambda: &Partition, k: u32) -> Result<BigInt> {
    if f.basis() == Basis::S {
        return Ok(f.coeff(lambda, k));
    }
    // Only terms of the right degree and t-exponent matter.
    let slice = SymPoly::from_terms(
        Basis::H,
        f.caps(),
        f.iter().filter(|(l, j, _)| *j == k && l.size() == lambda.size()).map(|(l, j, c)| (l.clone(), j, c.clone())),
    );
    Ok(to_schur(&slice)?.coeff(lambda, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;
    use crate::symfun::Caps;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    const CAPS: Caps = Caps { n: 15, k: 1 };

    /// Counts semistandard tableaux of shape `shape` and content `content` by
    /// filling the entries 1, 2, … as successive horizontal strips.
    fn kostka_brute(shape: &[u32], content: &[u32]) -> u64 {
        fn go(shape: &[u32], current: Vec<u32>, content: &[u32]) -> u64 {
            if content.is_empty() {
                return (current.as_slice() == shape) as u64;
            }
            let mut total = 0;
            let m = content[0];
            let mut next = current.clone();
            next.resize(shape.len(), 0);
            let mut candidates = Vec::new();
            fill(shape, &next, 0, m, &mut Vec::new(), &mut candidates);
            for c in candidates {
                total += go(shape, c, &content[1..]);
            }
            total
        }
        fn fill(shape: &[u32], cur: &[u32], i: usize, left: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == shape.len() {
                if left == 0 {
                    out.push(acc.iter().copied().filter(|&x| x > 0).collect());
                }
                return;
            }
            let hi = if i == 0 { shape[0] } else { shape[i].min(cur[i - 1]) };
            for r in cur[i]..=hi.min(cur[i] + left) {
                acc.push(r);
                fill(shape, cur, i + 1, left - (r - cur[i]), acc, out);
                acc.pop();
            }
        }
        go(shape, Vec::new(), content)
    }

    #[test]
    fn kostka_matches_tableau_count() {
        for n in 1..=7 {
            for lambda in partitions_of(n) {
                let exp = h_in_schur(&lambda);
                for nu in partitions_of(n) {
                    let got = exp.iter().find(|(x, _)| *x == nu).map(|(_, c)| c.clone()).unwrap_or_default();
                    assert_eq!(got, BigInt::from(kostka_brute(nu.parts(), lambda.parts())), "K_{nu},{lambda}");
                }
            }
        }
    }

    #[test]
    fn antisymmetric_square() {
        let h11 = IntSym::h_lambda(p(&[1, 1]), CAPS);
        let f = h11.sub(&IntSym::h(2, CAPS)).unwrap();
        assert_eq!(to_schur(&f).unwrap(), IntSym::s(p(&[1, 1]), CAPS));
    }

    #[test]
    fn hn_is_sn() {
        for n in 0..=10 {
            assert_eq!(to_schur(&IntSym::h(n, CAPS)).unwrap(), IntSym::s(Partition::single(n), CAPS));
        }
    }

    #[test]
    fn h21() {
        let s = to_schur(&IntSym::h_lambda(p(&[2, 1]), CAPS)).unwrap();
        let expected = IntSym::s(p(&[3]), CAPS).add(&IntSym::s(p(&[2, 1]), CAPS)).unwrap();
        assert_eq!(s, expected);
        assert_eq!(mult_lambda(&IntSym::h_lambda(p(&[2, 1]), CAPS), &p(&[2, 1]), 0).unwrap(), BigInt::one());
        let n = 6;
        assert_eq!(mult_lambda(&IntSym::h(n, CAPS), &p(&[5, 1]), 0).unwrap(), BigInt::zero());
    }

    #[test]
    fn jacobi_trudi_inverts_kostka() {
        for n in 0..=15 {
            for lambda in partitions_of(n) {
                let s = IntSym::s(lambda.clone(), CAPS);
                let h = to_h(&s).unwrap();
                assert_eq!(to_schur(&h).unwrap(), s, "{lambda}");
            }
        }
    }

    #[test]
    fn kostka_nonnegative() {
        for n in 0..=15 {
            for lambda in partitions_of(n) {
                assert!(h_in_schur(&lambda).iter().all(|(_, c)| *c >= BigInt::zero()));
            }
        }
    }

    #[test]
    fn elementary_is_column() {
        // e_2 = s_{1,1} = h_{1,1} − h_2
        let e2 = schur_to_h(&p(&[1, 1]));
        assert_eq!(e2, vec![(p(&[2]), BigInt::from(-1)), (p(&[1, 1]), BigInt::one())]);
    }
}
