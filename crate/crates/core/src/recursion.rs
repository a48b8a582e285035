//! Q⁺, Q and P up to caps.
//!
//! The per-partition sum
//!
//!   Q⁺_n = Σ_{λ⊢n} (t + … + t^{ℓ(λ)−2}) Π_j h_{r_j}∘Q⁺_{n_j}
//!
//! is organized as a knapsack over part sizes m = 1, 2, …: after processing
//! all parts < m, the accumulators
//!
//!   A₁[s] = Σ_{λ⊢s, parts<m} Π_j h_{r_j}∘Q⁺_{n_j}
//!   A_t[s] = Σ_{λ⊢s, parts<m} t^{ℓ(λ)} Π_j h_{r_j}∘Q⁺_{n_j}
//!
//! give Q⁺_m = (t·A₁[m] − A_t[m]/t)/(1−t), since every λ ⊢ m with parts < m
//! has ℓ(λ) ≥ 2. Adding part m multiplies in the blocks h_r∘Q⁺_m, and once it
//! is added A₁[m] = Q_m. A_t carries one extra power of t because of the
//! division by t.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::plethysm::{exp_pleth, h_plethysm_upto, sign2_plethysm};
use crate::symfun::{mul_into, Basis, Caps, IntSym, SymPoly};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Q⁺_n, Q_n and P_n for 0 ≤ n ≤ caps.n, each stored under the table caps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepTable {
    pub caps: Caps,
    pub engine_version: String,
    pub qplus: Vec<IntSym>,
    pub q: Vec<IntSym>,
    pub p: Vec<IntSym>,
}

fn t_slices(f: &IntSym) -> FxHashMap<u32, Vec<(Partition, BigInt)>> {
    let mut out: FxHashMap<u32, Vec<(Partition, BigInt)>> = FxHashMap::default();
    for (l, k, c) in f.iter() {
        out.entry(k).or_default().push((l.clone(), c.clone()));
    }
    out
}

/// (t·a₁ − a_t/t)/(1−t), truncated at `caps.k`.
fn qplus_from_accumulators(a1: &IntSym, at: &IntSym, caps: Caps) -> IntSym {
    let mut num: FxHashMap<(Partition, u32), BigInt> = FxHashMap::default();
    for (l, k, c) in a1.iter() {
        if k < caps.k {
            *num.entry((l.clone(), k + 1)).or_default() += c;
        }
    }
    for (l, k, c) in at.iter() {
        debug_assert!(k >= 1, "A_t has no t^0 term above degree 1");
        if k >= 1 && k - 1 <= caps.k {
            *num.entry((l.clone(), k - 1)).or_default() -= c;
        }
    }
    // Dividing by 1 − t takes partial sums along t.
    let mut by_lambda: FxHashMap<Partition, Vec<BigInt>> = FxHashMap::default();
    for ((l, k), c) in num {
        by_lambda.entry(l).or_insert_with(|| vec![BigInt::zero(); caps.k as usize + 1])[k as usize] += c;
    }
    let mut out = IntSym::zero(Basis::H, caps);
    for (l, mut coeffs) in by_lambda {
        for k in 1..coeffs.len() {
            let prev = coeffs[k - 1].clone();
            coeffs[k] += prev;
        }
        for (k, c) in coeffs.into_iter().enumerate() {
            out.add_term(l.clone(), k as u32, &c);
        }
    }
    out
}

/// Divides `rhs` by (1+t) in Λ[t]. When the caps hold the whole polynomial
/// (`exact_degree` ≤ caps.k) the remainder is checked to vanish.
pub(crate) fn divide_one_plus_t(rhs: &IntSym, exact_degree: Option<u32>, location: &str) -> Result<IntSym> {
    let caps = rhs.caps();
    let slices = t_slices(rhs);
    let top = exact_degree.map_or(caps.k, |d| d.min(caps.k));
    let mut out = IntSym::zero(Basis::H, caps);
    let mut prev: FxHashMap<Partition, BigInt> = FxHashMap::default();
    for k in 0..=top {
        let mut cur: FxHashMap<Partition, BigInt> = FxHashMap::default();
        if let Some(s) = slices.get(&k) {
            for (l, c) in s {
                *cur.entry(l.clone()).or_default() += c;
            }
        }
        for (l, c) in &prev {
            *cur.entry(l.clone()).or_default() -= c;
        }
        cur.retain(|_, c| !c.is_zero());
        let is_remainder = exact_degree == Some(k);
        if is_remainder {
            if let Some((l, c)) = cur.iter().min_by(|a, b| a.0.cmp(b.0)) {
                return Err(Error::InexactDivision { location: location.to_string(), remainder: format!("{c}·h{l}·t^{k}") });
            }
        } else {
            for (l, c) in &cur {
                out.add_term(l.clone(), k, c);
            }
        }
        prev = cur;
    }
    if let Some(d) = exact_degree {
        if d <= caps.k && slices.keys().any(|&k| k > d) {
            return Err(Error::InexactDivision { location: location.to_string(), remainder: "terms above the degree bound".into() });
        }
    }
    Ok(out)
}

impl RepTable {
    /// Computes Q⁺, Q and P for n ≤ caps.n and t-degree ≤ caps.k.
    pub fn compute(caps: Caps) -> Result<RepTable> {
        if caps.n < 1 {
            return Err(Error::InvalidArgument("cap_n must be at least 1".into()));
        }
        let (qplus, q) = qplus_and_q(caps)?;
        let mut table = RepTable { caps, engine_version: ENGINE_VERSION.to_string(), qplus, q, p: Vec::new() };
        table.p = (0..=caps.n).map(|n| table.p_from_q(n)).collect::<Result<_>>()?;
        Ok(table)
    }

    /// Q⁺_{n,k} as a t-free value (zero when out of range).
    pub fn qplus_nk(&self, n: u32, k: u32) -> IntSym {
        self.qplus[n as usize].t_part(k)
    }

    pub fn q_nk(&self, n: u32, k: u32) -> IntSym {
        self.q[n as usize].t_part(k)
    }

    pub fn p_nk(&self, n: u32, k: u32) -> IntSym {
        self.p[n as usize].t_part(k)
    }

    /// Σ_n Q⁺_n.
    pub fn qplus_series(&self) -> IntSym {
        sum_all(&self.qplus, self.caps)
    }

    /// Σ_n Q_n, including Q_0 = 1 and Q_1 = h₁.
    pub fn q_series(&self) -> IntSym {
        sum_all(&self.q, self.caps)
    }

    /// Σ_n P_n, including P_0 = 1, P_1 = h₁, P_2 = h₂.
    pub fn p_series(&self) -> IntSym {
        sum_all(&self.p, self.caps)
    }

    /// P_n from the wall-crossing relation
    /// (1+t)P_n = Q_n − t(Σ_{2≤i<n/2} Q_i Q_{n−i} + s_{(1,1)}∘Q_{n/2}).
    pub fn p_from_q(&self, n: u32) -> Result<IntSym> {
        let caps = self.caps;
        match n {
            0 => return Ok(IntSym::one(Basis::H, caps)),
            1 | 2 => return Ok(IntSym::h(n, caps)),
            _ => {}
        }
        let mut acc: FxHashMap<(Partition, u32), BigInt> = FxHashMap::default();
        let mut i = 2;
        while 2 * i < n {
            mul_into(&mut acc, &self.q[i as usize], &self.q[(n - i) as usize], 1, caps);
            i += 1;
        }
        let mut correction = SymPoly::from_map(Basis::H, caps, acc);
        if n % 2 == 0 {
            correction = correction.add(&sign2_plethysm(&self.q[(n / 2) as usize])?.mul_t(1))?;
        }
        let rhs = self.q[n as usize].sub(&correction)?;
        divide_one_plus_t(&rhs, Some(n - 2), &format!("P_{n}"))
    }

    /// Checks Exp(tQ⁺) = t²Exp(Q⁺) + (1−t)(1+t+h₁t) within the caps.
    pub fn verify_exponential_identity(&self) -> Result<IdentityReport> {
        let caps = self.caps;
        let qp = self.qplus_series();
        let lhs = exp_pleth(&qp.mul_t(1))?;
        let e = exp_pleth(&qp)?;
        let one = IntSym::one(Basis::H, caps);
        let h1 = IntSym::h(1, caps);
        // (1−t)(1+t+h₁t) = 1 + h₁t − t² − h₁t²
        let tail = one.add(&h1.mul_t(1))?.sub(&one.mul_t(2))?.sub(&h1.mul_t(2))?;
        let rhs = e.mul_t(2).add(&tail)?;
        Ok(IdentityReport::compare("Exp(tQ+) = t^2 Exp(Q+) + (1-t)(1+t+h1 t)", &lhs, &rhs))
    }
}

fn sum_all(parts: &[IntSym], caps: Caps) -> IntSym {
    let mut acc = FxHashMap::default();
    for f in parts {
        for (l, k, c) in f.iter() {
            *acc.entry((l.clone(), k)).or_insert_with(BigInt::zero) += c;
        }
    }
    SymPoly::from_map(Basis::H, caps, acc)
}

/// Outcome of comparing two sides of an identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub holds: bool,
    /// The first differing term: (λ, k, lhs coefficient, rhs coefficient).
    pub discrepancy: Option<(Partition, u32, String, String)>,
}

impl IdentityReport {
    pub fn compare(identity: &str, lhs: &IntSym, rhs: &IntSym) -> IdentityReport {
        let diff = lhs.sub(rhs).expect("identity sides share caps");
        let discrepancy = diff.iter().next().map(|(l, k, _)| {
            (l.clone(), k, lhs.coeff(l, k).to_string(), rhs.coeff(l, k).to_string())
        });
        IdentityReport { identity: identity.to_string(), holds: discrepancy.is_none(), discrepancy }
    }
}

/// The knapsack described in the module docs.
fn qplus_and_q(caps: Caps) -> Result<(Vec<IntSym>, Vec<IntSym>)> {
    let n_max = caps.n;
    let ext = Caps::new(caps.n, caps.k + 1);
    let mut a1: Vec<IntSym> = (0..=n_max).map(|_| IntSym::zero(Basis::H, caps)).collect();
    let mut at: Vec<IntSym> = (0..=n_max).map(|_| IntSym::zero(Basis::H, ext)).collect();
    a1[0] = IntSym::one(Basis::H, caps);
    at[0] = IntSym::one(Basis::H, ext);

    let mut qplus = vec![IntSym::zero(Basis::H, caps); n_max as usize + 1];
    let mut q = vec![IntSym::zero(Basis::H, caps); n_max as usize + 1];
    q[0] = IntSym::one(Basis::H, caps);

    for m in 1..=n_max {
        let qp = if m == 1 { IntSym::h(1, caps) } else { qplus_from_accumulators(&a1[m as usize], &at[m as usize], caps) };
        qplus[m as usize] = qp.clone();
        if !qp.is_zero() {
            let r_max = n_max / m;
            let blocks = h_plethysm_upto(r_max, &qp)?;
            let blocks_ext: Vec<IntSym> = blocks.iter().map(|b| b.truncate_unchecked(ext)).collect();
            let old_a1 = a1.clone();
            let old_at = at.clone();
            let updated: Vec<(usize, IntSym, IntSym)> = (m..=n_max)
                .into_par_iter()
                .map(|s| {
                    let mut acc1: FxHashMap<_, BigInt> = FxHashMap::default();
                    let mut acct: FxHashMap<_, BigInt> = FxHashMap::default();
                    for r in 1..=s / m {
                        let src = (s - r * m) as usize;
                        mul_into(&mut acc1, &old_a1[src], &blocks[r as usize], 0, caps);
                        mul_into(&mut acct, &old_at[src], &blocks_ext[r as usize], r, ext);
                    }
                    let s = s as usize;
                    let new1 = old_a1[s].add(&SymPoly::from_map(Basis::H, caps, acc1)).expect("caps");
                    let newt = old_at[s].add(&SymPoly::from_map(Basis::H, ext, acct)).expect("caps");
                    (s, new1, newt)
                })
                .collect();
            for (s, n1, nt) in updated {
                a1[s] = n1;
                at[s] = nt;
            }
        }
        q[m as usize] = a1[m as usize].clone();
        log::debug!("degree {m}: |Q+| = {}, |Q| = {}", qplus[m as usize].len(), q[m as usize].len());
    }
    Ok((qplus, q))
}
