//! The invariant path: plethysm and Exp on ℤ⟦q,t⟧ and the series 𝔮⁺, 𝔮, 𝔭.
//!
//! Nothing here builds symmetric functions. The knapsack of the equivariant
//! recursion is replayed on t-polynomials: a block h_r∘(g(t)q^m) is q^{rm}
//! times a t-polynomial H_r with r·H_r = Σ_{j=1}^r g(t^j)·H_{r−j}.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::biseries::{BiSeries, IntSeries};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::partition::binomial;
use crate::recursion::ENGINE_VERSION;
use crate::symfun::Caps;

/// h_r∘f = Σ_{λ⊢r} z_λ^{-1} Π f^{[λ_i]}, via Newton's identity. Integer
/// inputs give integer outputs; a failed exact division is reported.
pub fn h_plethysm_qt<C: Coeff>(r: u32, f: &BiSeries<C>) -> Result<BiSeries<C>> {
    let caps = f.caps();
    let mut hs: Vec<BiSeries<C>> = vec![BiSeries::one(caps.n, caps.k)];
    let brackets: Vec<BiSeries<C>> = (1..=r).map(|j| f.bracket_power(j)).collect();
    for s in 1..=r {
        let mut acc = BiSeries::zero(caps.n, caps.k);
        for j in 1..=s {
            acc = acc.add(&brackets[j as usize - 1].mul(&hs[(s - j) as usize])?)?;
        }
        hs.push(div_series(&acc, &BigInt::from(s), "h_r∘f")?);
    }
    Ok(hs.pop().unwrap())
}

fn div_series<C: Coeff>(f: &BiSeries<C>, d: &BigInt, context: &str) -> Result<BiSeries<C>> {
    let caps = f.caps();
    let mut out = BiSeries::zero(caps.n, caps.k);
    for (n, k, c) in f.iter_nonzero() {
        let v = c.div_exact(d).ok_or_else(|| Error::NonIntegral {
            location: format!("{context}: q^{n} t^{k}"),
            value: format!("{}/{}", c.to_decimal(), d),
        })?;
        out.set(n, k, v);
    }
    Ok(out)
}

/// Exp(f) = Σ_r h_r∘f through the Euler-operator recurrence over total
/// degree d = n + k:
///
///   d·E_{n,k} = Σ_{(a,b)≠0} g_{a,b}·E_{n−a,k−b},
///   g_{a,b} = Σ_{m | gcd(a,b)} ((a+b)/m)·f_{a/m,b/m}.
pub fn exp_qt<C: Coeff>(f: &BiSeries<C>) -> Result<BiSeries<C>> {
    if !f.get(0, 0).is_zero() {
        return Err(Error::ConstantTerm);
    }
    let caps = f.caps();
    let mut g = BiSeries::zero(caps.n, caps.k);
    for a in 0..=caps.n {
        for b in 0..=caps.k {
            if a == 0 && b == 0 {
                continue;
            }
            let gcd = a.gcd(&b);
            let mut acc = C::zero();
            for m in (1..=gcd).filter(|m| gcd % m == 0) {
                let c = f.get(a / m, b / m);
                if !c.is_zero() {
                    acc += &(c.clone() * &C::from_bigint(BigInt::from((a + b) / m)));
                }
            }
            g.set(a, b, acc);
        }
    }
    let g_terms: Vec<(u32, u32, C)> = g.iter_nonzero().map(|(a, b, c)| (a, b, c.clone())).collect();
    let mut e = BiSeries::zero(caps.n, caps.k);
    e.set(0, 0, C::one());
    // Fill in order of total degree so every E_{n−a,k−b} is ready.
    for d in 1..=caps.n + caps.k {
        for n in d.saturating_sub(caps.k)..=d.min(caps.n) {
            let k = d - n;
            let mut acc = C::zero();
            for (a, b, gab) in &g_terms {
                if *a <= n && *b <= k {
                    let prev = e.get(n - a, k - b);
                    if !prev.is_zero() {
                        acc += &(gab.clone() * prev);
                    }
                }
            }
            let v = acc.div_exact(&BigInt::from(d)).ok_or_else(|| Error::NonIntegral {
                location: format!("Exp: q^{n} t^{k}"),
                value: format!("{}/{}", acc.to_decimal(), d),
            })?;
            e.set(n, k, v);
        }
    }
    Ok(e)
}

/// Exp(f) = Π_{(n,k)} (1 − qⁿt^k)^{−f_{n,k}} for integral f, expanding each
/// factor by generalized binomial coefficients. A second route to [`exp_qt`].
pub fn exp_qt_product(f: &IntSeries) -> Result<IntSeries> {
    if !f.get(0, 0).is_zero() {
        return Err(Error::ConstantTerm);
    }
    let caps = f.caps();
    let mut out = IntSeries::one(caps.n, caps.k);
    for (a, b, c) in f.iter_nonzero() {
        let r_max = match (a, b) {
            (0, b) => caps.k / b,
            (a, 0) => caps.n / a,
            (a, b) => (caps.n / a).min(caps.k / b),
        };
        // (1 − x)^{−c} = Σ_r (−1)^r binom(−c, r) x^r
        let mut factor = IntSeries::zero(caps.n, caps.k);
        for r in 0..=r_max {
            factor.set(a * r, b * r, generalized_binomial(c, r));
        }
        out = out.mul(&factor)?;
    }
    Ok(out)
}

/// (−1)^r binom(−c, r) = c(c+1)…(c+r−1)/r!.
fn generalized_binomial(c: &BigInt, r: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r {
        num *= c + BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Invariant counterpart of the representation table: 𝔮⁺, 𝔮 and 𝔭 as
/// series in q and t.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvTable {
    pub caps: Caps,
    pub engine_version: String,
    pub qplus: IntSeries,
    pub q: IntSeries,
    pub p: IntSeries,
}

type Poly = Vec<BigInt>;

fn poly_mul_into(acc: &mut [BigInt], a: &[BigInt], b: &[BigInt], shift: usize) {
    let cap = acc.len();
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() || i + shift >= cap {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let d = i + j + shift;
            if d >= cap {
                break;
            }
            if !y.is_zero() {
                acc[d] += x * y;
            }
        }
    }
}

/// t-polynomial H_r of h_r∘(g·q^m) for r = 0..=r_max, truncated to `len`.
fn blocks(g: &[BigInt], r_max: u32, len: usize) -> Result<Vec<Poly>> {
    let bracket = |j: usize| -> Poly {
        let mut out = vec![BigInt::zero(); len];
        for (k, c) in g.iter().enumerate() {
            if k * j < len {
                out[k * j] = c.clone();
            }
        }
        out
    };
    let mut hs: Vec<Poly> = vec![{
        let mut one = vec![BigInt::zero(); len];
        one[0] = BigInt::one();
        one
    }];
    for r in 1..=r_max as usize {
        let mut acc = vec![BigInt::zero(); len];
        for j in 1..=r {
            poly_mul_into(&mut acc, &bracket(j), &hs[r - j], 0);
        }
        let d = BigInt::from(r);
        let mut out = Vec::with_capacity(len);
        for (k, c) in acc.into_iter().enumerate() {
            let (q, rem) = c.div_rem(&d);
            if !rem.is_zero() {
                return Err(Error::NonIntegral { location: format!("h_{r} block at t^{k}"), value: format!("{c}/{r}") });
            }
            out.push(q);
        }
        hs.push(out);
    }
    Ok(hs)
}

impl InvTable {
    /// 𝔮⁺_n, 𝔮_n, 𝔭_n for n ≤ cap_n and t-degree ≤ cap_k.
    pub fn compute(caps: Caps) -> Result<InvTable> {
        if caps.n < 1 {
            return Err(Error::InvalidArgument("cap_n must be at least 1".into()));
        }
        let n_max = caps.n as usize;
        let len = caps.k as usize + 1;
        let zero = |l: usize| vec![BigInt::zero(); l];
        let mut a1: Vec<Poly> = (0..=n_max).map(|_| zero(len)).collect();
        let mut at: Vec<Poly> = (0..=n_max).map(|_| zero(len + 1)).collect();
        a1[0][0] = BigInt::one();
        at[0][0] = BigInt::one();
        let mut qplus: Vec<Poly> = vec![zero(len); n_max + 1];
        let mut q: Vec<Poly> = vec![zero(len); n_max + 1];
        q[0][0] = BigInt::one();

        for m in 1..=n_max {
            let g = if m == 1 {
                let mut g = zero(len);
                g[0] = BigInt::one();
                g
            } else {
                // (t·A₁[m] − A_t[m]/t)/(1−t)
                let mut g = zero(len);
                let mut running = BigInt::zero();
                for k in 0..len {
                    if k >= 1 {
                        running += &a1[m][k - 1];
                    }
                    running -= &at[m][k + 1];
                    g[k] = running.clone();
                }
                g
            };
            if g.iter().any(|c| !c.is_zero()) {
                let r_max = (n_max / m) as u32;
                let bl = blocks(&g, r_max, len)?;
                for s in (m..=n_max).rev() {
                    for r in 1..=s / m {
                        let src = s - r * m;
                        let (lo, hi) = a1.split_at_mut(s);
                        poly_mul_into(&mut hi[0], &lo[src], &bl[r], 0);
                        let (lo, hi) = at.split_at_mut(s);
                        poly_mul_into(&mut hi[0], &lo[src], &bl[r], r);
                    }
                }
            }
            qplus[m] = g;
            q[m] = a1[m].clone();
        }

        let qplus = IntSeries::from_rows(caps.n, caps.k, &qplus);
        let q = IntSeries::from_rows(caps.n, caps.k, &q);
        let mut table = InvTable { caps, engine_version: ENGINE_VERSION.to_string(), qplus, p: q.clone(), q };
        let mut p_rows = Vec::with_capacity(n_max + 1);
        for n in 0..=caps.n {
            p_rows.push(table.p_inv(n)?);
        }
        table.p = IntSeries::from_rows(caps.n, caps.k, &p_rows);
        Ok(table)
    }

    /// 𝔭_n from (1+t)𝔭_n = 𝔮_n − ½t(Σ_{h=2}^{n−2} 𝔮_h𝔮_{n−h} − 𝔮_{n/2}(t²)).
    /// Returns the t-coefficients up to cap_k.
    pub fn p_inv(&self, n: u32) -> Result<Vec<BigInt>> {
        let len = self.caps.k as usize + 1;
        let mut out = vec![BigInt::zero(); len];
        match n {
            0 | 1 | 2 => {
                out[0] = BigInt::one();
                return Ok(out);
            }
            _ => {}
        }
        let mut conv = vec![BigInt::zero(); len];
        for h in 2..=n - 2 {
            poly_mul_into(&mut conv, self.q.row(h), self.q.row(n - h), 0);
        }
        if n % 2 == 0 {
            for (k, c) in self.q.row(n / 2).iter().enumerate() {
                if 2 * k < len {
                    conv[2 * k] -= c;
                }
            }
        }
        let mut rhs: Vec<BigInt> = self.q.row(n).to_vec();
        for k in 0..len {
            if k + 1 < len {
                let (half, rem) = conv[k].div_rem(&BigInt::from(2));
                if !rem.is_zero() {
                    return Err(Error::NonIntegral { location: format!("𝔭_{n}: half-convolution at t^{k}"), value: format!("{}/2", conv[k]) });
                }
                rhs[k + 1] -= half;
            }
        }
        // Synthetic division by 1 + t; the remainder sits at t^{n−2}.
        let exact = (n as usize - 2) < len;
        let mut prev = BigInt::zero();
        for k in 0..len {
            let v = &rhs[k] - &prev;
            if exact && k == n as usize - 2 {
                if !v.is_zero() {
                    return Err(Error::InexactDivision { location: format!("𝔭_{n}"), remainder: format!("{v}·t^{k}") });
                }
                if let Some(extra) = rhs.iter().skip(k + 1).position(|c| !c.is_zero()) {
                    return Err(Error::InexactDivision {
                        location: format!("𝔭_{n}"),
                        remainder: format!("nonzero term at t^{}", k + 1 + extra),
                    });
                }
                break;
            }
            out[k] = v.clone();
            prev = v;
        }
        Ok(out)
    }

    pub fn q_nk(&self, n: u32, k: u32) -> BigInt {
        self.q.coeff(n, k)
    }

    pub fn p_nk(&self, n: u32, k: u32) -> BigInt {
        self.p.coeff(n, k)
    }

    /// 𝔮_n as a t-polynomial without trailing zeros.
    pub fn q_poly(&self, n: u32) -> Vec<BigInt> {
        self.q.poly(n)
    }

    pub fn p_poly(&self, n: u32) -> Vec<BigInt> {
        self.p.poly(n)
    }

    /// Exp(t𝔮⁺) = t²Exp(𝔮⁺) + (1−t)(1+t+qt) within the caps; returns the
    /// first differing (n, k) if any.
    pub fn verify_exponential_identity(&self) -> Result<Option<(u32, u32)>> {
        let caps = self.caps;
        let lhs = exp_qt(&self.qplus.shift(0, 1))?;
        let mut rhs = exp_qt(&self.qplus)?.shift(0, 2);
        // (1−t)(1+t+qt) = 1 − t² + qt − qt²
        rhs.add_at(0, 0, &BigInt::one());
        rhs.add_at(0, 2, &BigInt::from(-1));
        rhs.add_at(1, 1, &BigInt::one());
        rhs.add_at(1, 2, &BigInt::from(-1));
        Ok(first_difference(&lhs, &rhs, caps))
    }
}

pub(crate) fn first_difference(a: &IntSeries, b: &IntSeries, caps: Caps) -> Option<(u32, u32)> {
    for n in 0..=caps.n {
        for k in 0..=caps.k {
            if a.get(n, k) != b.get(n, k) {
                return Some((n, k));
            }
        }
    }
    None
}

/// 𝔮⁺ up to caps.
pub fn qplus_inv_up_to(n: u32, k: u32) -> Result<IntSeries> {
    Ok(InvTable::compute(Caps::new(n, k))?.qplus)
}

/// 𝔮 up to caps.
pub fn q_inv_up_to(n: u32, k: u32) -> Result<IntSeries> {
    Ok(InvTable::compute(Caps::new(n, k))?.q)
}

/// binom(n, k) as used for ultra-log-concavity.
pub fn binom(n: u32, k: u32) -> BigInt {
    binomial(n as u64, k as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biseries::RatSeries;
    use crate::coeff::rat;
    use proptest::prelude::*;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn exp_of_qt_is_geometric() {
        let f = IntSeries::monomial(6, 6, 1, 1, int(1));
        let e = exp_qt(&f).unwrap();
        for n in 0..=6 {
            for k in 0..=6 {
                assert_eq!(*e.get(n, k), int((n == k) as i64));
            }
        }
        assert_eq!(exp_qt_product(&f).unwrap(), e);
    }

    #[test]
    fn monomial_plethysm_is_binomial() {
        for a in [-3i64, -1, 1, 2, 5] {
            let f = IntSeries::monomial(12, 8, 2, 1, int(a));
            for r in 0..=4u32 {
                let got = h_plethysm_qt(r, &f).unwrap();
                // (−1)^r binom(−a, r)
                let expected = generalized_binomial(&int(a), r);
                assert_eq!(*got.get(2 * r, r), expected, "a={a} r={r}");
                assert_eq!(got.nonzero_count(), usize::from(!expected.is_zero()));
            }
        }
    }

    #[test]
    fn rational_exp_matches() {
        let f = IntSeries::monomial(5, 5, 1, 0, int(1)).add(&IntSeries::monomial(5, 5, 2, 1, int(-2))).unwrap();
        let ei = exp_qt(&f).unwrap();
        let er: RatSeries = exp_qt(&f.to_rational()).unwrap();
        assert_eq!(er, ei.to_rational());
        assert_eq!(*er.get(1, 0), rat(1, 1));
    }

    #[test]
    fn low_degree_invariants() {
        let t = InvTable::compute(Caps::new(12, 10)).unwrap();
        for n in 2..=12 {
            assert_eq!(t.q_nk(n, 0), int(1), "q_{n},0");
        }
        assert_eq!(t.q_nk(5, 1), int(3));
        for n in 3..=12 {
            assert_eq!(*t.qplus.get(n, 1), int(1));
        }
        assert_eq!(t.p_poly(7), vec![int(1), int(2), int(4), int(2), int(1)]);
        assert_eq!(t.p_poly(4), vec![int(1), int(1)]);
        assert_eq!(t.verify_exponential_identity().unwrap(), None);
    }

    #[test]
    fn knapsack_matches_exp_routes() {
        let t = InvTable::compute(Caps::new(14, 12)).unwrap();
        assert_eq!(exp_qt(&t.qplus).unwrap(), t.q);
        assert_eq!(exp_qt_product(&t.qplus).unwrap(), t.q);
    }

    #[test]
    fn truncated_t_caps_agree() {
        let full = InvTable::compute(Caps::new(20, 18)).unwrap();
        let small = InvTable::compute(Caps::new(20, 3)).unwrap();
        assert_eq!(full.q.truncate(20, 3).unwrap(), small.q);
        assert_eq!(full.p.truncate(20, 3).unwrap(), small.p);
    }

    fn arb_nc(n: u32, k: u32) -> impl Strategy<Value = IntSeries> {
        prop::collection::vec((0..=n, 0..=k, -3i64..=3), 0..6).prop_map(move |ts| {
            let mut s = IntSeries::zero(n, k);
            for (a, b, c) in ts {
                if a + b > 0 {
                    s.add_at(a, b, &BigInt::from(c));
                }
            }
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn exp_multiplicative(f in arb_nc(6, 5), g in arb_nc(6, 5)) {
            let lhs = exp_qt(&f.add(&g).unwrap()).unwrap();
            let rhs = exp_qt(&f).unwrap().mul(&exp_qt(&g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exp_routes_agree(f in arb_nc(6, 5)) {
            prop_assert_eq!(exp_qt(&f).unwrap(), exp_qt_product(&f).unwrap());
        }
    }
}
