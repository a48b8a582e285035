//! Plethysm on Λ⟦t⟧: p_m-substitution, h_r∘(−), e_r∘(−), s_{(1,1)}∘(−), and
//! the plethystic Exp and Log.
//!
//! Everything runs in the p basis, where p_m∘(−) is a ring endomorphism
//! sending p_i ↦ p_{im} and t ↦ t^m. Products truncate eagerly at the caps of
//! the input; that is exact because the monomials beyond the caps form an
//! ideal.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::partition::{mobius, Partition};
use crate::symfun::{
    h_to_p, mul_into, p_to_h_integral, schur_to_h, to_h, Basis, Caps, IntSym, RatSym, SymPoly,
};

/// p_m∘F for F in the p basis: p_λ t^k ↦ p_{mλ} t^{mk}.
pub fn p_substitute(f: &RatSym, m: u32) -> Result<RatSym> {
    if f.basis() != Basis::P {
        return Err(Error::WrongBasis { op: "p_substitute", basis: f.basis().name() });
    }
    if m == 0 {
        return Err(Error::InvalidArgument("p_substitute needs m >= 1".into()));
    }
    Ok(SymPoly::from_terms(Basis::P, f.caps(), f.iter().map(|(l, k, c)| (l.scale(m), k * m, c.clone()))))
}

fn content_hash(f: &IntSym) -> u64 {
    let mut h = DefaultHasher::new();
    f.caps().hash(&mut h);
    for (l, k, c) in f.iter() {
        l.hash(&mut h);
        k.hash(&mut h);
        c.hash(&mut h);
    }
    h.finish()
}

type Block = Arc<IntSym>;
type BlockMemo = Mutex<FxHashMap<(u32, u64), Vec<(Arc<IntSym>, Block)>>>;

fn block_memo() -> &'static BlockMemo {
    static MEMO: OnceLock<BlockMemo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn memo_lookup(r: u32, f: &IntSym, hash: u64) -> Option<Block> {
    let memo = block_memo().lock().expect("memo poisoned");
    memo.get(&(r, hash))?.iter().find(|(key, _)| key.as_ref() == f).map(|(_, v)| v.clone())
}

fn memo_store(r: u32, f: &Arc<IntSym>, hash: u64, value: Block) {
    let mut memo = block_memo().lock().expect("memo poisoned");
    let bucket = memo.entry((r, hash)).or_default();
    if !bucket.iter().any(|(key, _)| key == f) {
        bucket.push((f.clone(), value));
    }
}

/// Drops every memoized plethysm block. Mostly useful for timing runs.
pub fn clear_memo() {
    block_memo().lock().expect("memo poisoned").clear();
}

/// h_r∘F for r = 0..=r_max, in the h basis with integrality asserted.
///
/// Uses Newton's identity r·h_r = Σ_{j=1}^r p_j·h_{r−j}, pushed through the
/// plethysm: r·(h_r∘F) = Σ_j (p_j∘F)(h_{r−j}∘F). Results are memoized by
/// (r, content of F, caps).
pub fn h_plethysm_upto(r_max: u32, f: &IntSym) -> Result<Vec<Block>> {
    let f = to_h(f)?;
    let caps = f.caps();
    let hash = content_hash(&f);
    let mut out: Vec<Block> = Vec::with_capacity(r_max as usize + 1);
    out.push(Arc::new(IntSym::one(Basis::H, caps)));
    if r_max == 0 {
        return Ok(out);
    }
    if (1..=r_max).all(|r| memo_lookup(r, &f, hash).is_some()) {
        for r in 1..=r_max {
            out.push(memo_lookup(r, &f, hash).unwrap());
        }
        return Ok(out);
    }

    let key = Arc::new(f.clone());
    let fp = h_to_p(&f)?;
    let g: Vec<RatSym> = (1..=r_max).map(|j| p_substitute(&fp, j)).collect::<Result<_>>()?;
    let mut hp: Vec<RatSym> = vec![RatSym::one(Basis::P, caps)];
    for r in 1..=r_max {
        let mut acc: FxHashMap<_, BigRational> = FxHashMap::default();
        for j in 1..=r {
            mul_into(&mut acc, &g[j as usize - 1], &hp[(r - j) as usize], 0, caps);
        }
        let inv_r = BigRational::new(BigInt::one(), BigInt::from(r));
        let hr = SymPoly::from_map(Basis::P, caps, acc).scale(&inv_r);
        let block = match memo_lookup(r, &f, hash) {
            Some(b) => b,
            None => {
                let b = Arc::new(p_to_h_integral(&hr, &format!("h_{r}∘F"))?);
                memo_store(r, &key, hash, b.clone());
                b
            }
        };
        out.push(block);
        hp.push(hr);
    }
    Ok(out)
}

/// h_r∘F.
pub fn h_plethysm(r: u32, f: &IntSym) -> Result<IntSym> {
    Ok(h_plethysm_upto(r, f)?.pop().map(|b| b.as_ref().clone()).unwrap())
}

/// g∘F for a t-free g given in the p basis: each p_μ ↦ Π p_{μ_i}∘F.
pub fn plethysm_p(g: &RatSym, f: &IntSym) -> Result<IntSym> {
    if g.basis() != Basis::P {
        return Err(Error::WrongBasis { op: "plethysm_p", basis: g.basis().name() });
    }
    let f = to_h(f)?;
    let caps = f.caps();
    let fp = h_to_p(&f)?;
    let mut subs: FxHashMap<u32, RatSym> = FxHashMap::default();
    let mut acc: FxHashMap<_, BigRational> = FxHashMap::default();
    for (mu, k, c) in g.iter() {
        if k != 0 {
            return Err(Error::InvalidArgument("outer plethysm argument must be t-free".into()));
        }
        let mut term = RatSym::one(Basis::P, caps);
        for &part in mu.parts() {
            if !subs.contains_key(&part) {
                subs.insert(part, p_substitute(&fp, part)?);
            }
            term = term.mul(&subs[&part])?;
        }
        for (l, j, v) in term.iter() {
            *acc.entry((l.clone(), j)).or_insert_with(BigRational::zero) += v * c;
        }
    }
    p_to_h_integral(&SymPoly::from_map(Basis::P, caps, acc), "g∘F")
}

/// e_r∘F, computed through e_r = s_{(1^r)} expanded by Jacobi–Trudi.
pub fn e_plethysm(r: u32, f: &IntSym) -> Result<IntSym> {
    let caps = Caps::new(r.max(f.caps().n), 0);
    let er = SymPoly::from_terms(Basis::H, caps, schur_to_h(&Partition::ones(r)).into_iter().map(|(l, c)| (l, 0, c)));
    plethysm_p(&h_to_p(&er)?, f)
}

/// s_{(1,1)}∘F = F² − h₂∘F.
pub fn sign2_plethysm(f: &IntSym) -> Result<IntSym> {
    let f = to_h(f)?;
    f.mul(&f)?.sub(&h_plethysm(2, &f)?)
}

/// h_r∘(ΣF_j) by the distinct-summand expansion
/// Σ_{r_1+…+r_m = r} Π_j h_{r_j}∘F_j.
pub fn additive_expansion(r: u32, summands: &[IntSym]) -> Result<IntSym> {
    let Some(first) = summands.first() else {
        return Err(Error::InvalidArgument("additive_expansion needs at least one summand".into()));
    };
    let caps = first.caps();
    let blocks: Vec<Vec<Block>> = summands.iter().map(|f| h_plethysm_upto(r, f)).collect::<Result<_>>()?;
    // Knapsack over the summands: layer[s] = h_s∘(F_1 + … + F_j).
    let mut layer: Vec<IntSym> = (0..=r).map(|s| (*blocks[0][s as usize]).clone()).collect();
    for b in &blocks[1..] {
        let mut next = Vec::with_capacity(layer.len());
        for s in 0..=r {
            let mut acc = FxHashMap::default();
            for i in 0..=s {
                mul_into(&mut acc, &layer[(s - i) as usize], &b[i as usize], 0, caps);
            }
            next.push(SymPoly::from_map(Basis::H, caps, acc));
        }
        layer = next;
    }
    Ok(layer.pop().unwrap())
}

/// Splits a p-basis value by total degree |λ| + k.
fn by_total_degree(f: &RatSym, max: u32) -> Vec<RatSym> {
    let mut parts: Vec<RatSym> = (0..=max).map(|_| RatSym::zero(Basis::P, f.caps())).collect();
    for (l, k, c) in f.iter() {
        let d = l.size() + k;
        if d <= max {
            parts[d as usize].add_term(l.clone(), k, c);
        }
    }
    parts
}

fn has_constant_term<C: crate::coeff::Coeff>(f: &SymPoly<C>) -> bool {
    !f.constant_term().is_zero()
}

/// exp of a p-basis series without constant term, by the Euler-operator
/// recurrence d·E_d = Σ_{j=1}^d (j·L_j)·E_{d−j} over total degree.
fn series_exp(l: &RatSym) -> RatSym {
    let caps = l.caps();
    let max = caps.n + caps.k;
    let lj = by_total_degree(l, max);
    let mut e: Vec<RatSym> = vec![RatSym::one(Basis::P, caps)];
    for d in 1..=max {
        let mut acc: FxHashMap<_, BigRational> = FxHashMap::default();
        for j in 1..=d {
            if lj[j as usize].is_zero() {
                continue;
            }
            let scaled = lj[j as usize].scale(&BigRational::from_integer(BigInt::from(j)));
            mul_into(&mut acc, &scaled, &e[(d - j) as usize], 0, caps);
        }
        let ed = SymPoly::from_map(Basis::P, caps, acc).scale(&BigRational::new(BigInt::one(), BigInt::from(d)));
        e.push(ed);
    }
    let mut out = RatSym::zero(Basis::P, caps);
    for part in e {
        out = out.add(&part).expect("same caps");
    }
    out
}

/// log of a p-basis series with constant term 1:
/// d·L_d = d·F_d − Σ_{j=1}^{d−1} (j·L_j)·F_{d−j}.
fn series_log(f: &RatSym) -> RatSym {
    let caps = f.caps();
    let max = caps.n + caps.k;
    let fd = by_total_degree(f, max);
    let mut jl: Vec<RatSym> = vec![RatSym::zero(Basis::P, caps)];
    for d in 1..=max {
        let mut acc: FxHashMap<_, BigRational> = FxHashMap::default();
        for j in 1..d {
            if fd[(d - j) as usize].is_zero() {
                continue;
            }
            mul_into(&mut acc, &jl[j as usize], &fd[(d - j) as usize], 0, caps);
        }
        let rest = SymPoly::from_map(Basis::P, caps, acc);
        let dl = fd[d as usize].scale(&BigRational::from_integer(BigInt::from(d))).sub(&rest).expect("same caps");
        jl.push(dl);
    }
    let mut out = RatSym::zero(Basis::P, caps);
    for (d, part) in jl.into_iter().enumerate().skip(1) {
        out = out.add(&part.scale(&BigRational::new(BigInt::one(), BigInt::from(d)))).expect("same caps");
    }
    out
}

/// Exp(F) = Σ_{r≥0} h_r∘F = exp(Σ_{m≥1} p_m∘F / m).
pub fn exp_pleth(f: &IntSym) -> Result<IntSym> {
    let f = to_h(f)?;
    if has_constant_term(&f) {
        return Err(Error::ConstantTerm);
    }
    let caps = f.caps();
    let fp = h_to_p(&f)?;
    let mut l = RatSym::zero(Basis::P, caps);
    for m in 1..=caps.n + caps.k {
        let pm = p_substitute(&fp, m)?;
        if pm.is_zero() {
            break;
        }
        l = l.add(&pm.scale(&BigRational::new(BigInt::one(), BigInt::from(m))))?;
    }
    p_to_h_integral(&series_exp(&l), "Exp")
}

/// Log(F) = Σ_{r≥1} (μ(r)/r)·log(p_r∘F), the inverse of Exp.
pub fn log_pleth(f: &IntSym) -> Result<IntSym> {
    let f = to_h(f)?;
    if !crate::coeff::is_one(&f.constant_term()) {
        return Err(Error::ConstantTermNotOne);
    }
    let caps = f.caps();
    let log_f = series_log(&h_to_p(&f)?);
    let mut out = RatSym::zero(Basis::P, caps);
    for r in 1..=caps.n + caps.k {
        let mu = mobius(r);
        let pr = p_substitute(&log_f, r)?;
        if pr.is_zero() {
            break;
        }
        if mu == 0 {
            continue;
        }
        out = out.add(&pr.scale(&BigRational::new(BigInt::from(mu), BigInt::from(r))))?;
    }
    p_to_h_integral(&out, "Log")
}
