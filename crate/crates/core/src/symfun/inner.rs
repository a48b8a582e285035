//! The internal (Kronecker) product, computed in the p basis where
//! p_λ ∗ p_μ = δ_{λμ} z_λ p_λ.

use num_rational::BigRational;
use num_traits::Zero;
use rustc_hash::FxHashMap;

use super::{h_to_p, p_to_h_integral, to_h, to_schur, Basis, IntSym, Key, SymPoly};
use crate::error::{Error, Result};

/// ch(V ⊗ W) from ch(V) and ch(W), returned in the Schur basis.
///
/// Both inputs must be homogeneous of the same x-degree and may be given in
/// the h or s basis. t-gradings multiply: (t^a F) ∗ (t^b G) = t^{a+b} (F ∗ G).
pub fn internal_product(f: &IntSym, g: &IntSym) -> Result<IntSym> {
    if f.caps() != g.caps() {
        return Err(Error::CapMismatch { left: f.caps(), right: g.caps() });
    }
    let caps = f.caps();
    if f.is_zero() || g.is_zero() {
        return Ok(SymPoly::zero(Basis::S, caps));
    }
    let df = f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let dg = g.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if df != dg {
        return Err(Error::DegreeMismatch(df, dg));
    }
    let fp = h_to_p(&to_h(f)?)?;
    let gp = h_to_p(&to_h(g)?)?;

    let mut by_lambda: FxHashMap<_, Vec<(u32, &BigRational)>> = FxHashMap::default();
    for (lambda, k, c) in gp.iter() {
        by_lambda.entry(lambda.clone()).or_default().push((k, c));
    }
    let mut acc: FxHashMap<Key, BigRational> = FxHashMap::default();
    for (lambda, kf, cf) in fp.iter() {
        let Some(gs) = by_lambda.get(lambda) else { continue };
        let z = BigRational::from_integer(lambda.z());
        for &(kg, cg) in gs {
            if kf + kg > caps.k {
                continue;
            }
            let v = cf * cg * &z;
            *acc.entry((lambda.clone(), kf + kg)).or_insert_with(BigRational::zero) += v;
        }
    }
    let prod = SymPoly::from_map(Basis::P, caps, acc);
    to_schur(&p_to_h_integral(&prod, "internal product")?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{partitions_of, Partition};
    use crate::symfun::Caps;
    use num_bigint::BigInt;
    use num_traits::One;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    const CAPS: Caps = Caps { n: 10, k: 4 };

    /// χ^λ(μ) by the Murnaghan–Nakayama rule on beta-sets.
    fn character(lambda: &[u32], mu: &[u32]) -> i64 {
        fn go(beta: &mut Vec<i64>, mu: &[u32]) -> i64 {
            let Some((&r, rest)) = mu.split_first() else { return 1 };
            let r = r as i64;
            let mut total = 0;
            for i in 0..beta.len() {
                let b = beta[i];
                let nb = b - r;
                if nb < 0 || beta.contains(&nb) {
                    continue;
                }
                // sign = (−1)^{#beta strictly between nb and b}
                let between = beta.iter().filter(|&&x| x > nb && x < b).count();
                beta[i] = nb;
                let sub = go(beta, rest);
                beta[i] = b;
                total += if between % 2 == 0 { sub } else { -sub };
            }
            total
        }
        let l = lambda.len();
        let mut beta: Vec<i64> = lambda.iter().enumerate().map(|(i, &x)| x as i64 + (l - 1 - i) as i64).collect();
        go(&mut beta, mu)
    }

    /// Kronecker coefficient g(λ, μ, ν) = Σ_ρ χ^λ χ^μ χ^ν (ρ) / z_ρ.
    fn kronecker(a: &Partition, b: &Partition, c: &Partition) -> BigInt {
        let n = a.size();
        let mut total = BigRational::zero();
        for rho in partitions_of(n) {
            let v = character(a.parts(), rho.parts()) * character(b.parts(), rho.parts()) * character(c.parts(), rho.parts());
            total += BigRational::new(BigInt::from(v), rho.z());
        }
        assert!(total.is_integer());
        total.to_integer()
    }

    #[test]
    fn trivial_is_unit() {
        for n in 1..=6 {
            for lambda in partitions_of(n) {
                let f = IntSym::s(lambda, CAPS);
                assert_eq!(internal_product(&IntSym::h(n, CAPS), &f).unwrap(), f);
            }
        }
    }

    #[test]
    fn sign_squared_is_trivial() {
        for n in 1..=6 {
            let e = IntSym::s(Partition::ones(n), CAPS);
            assert_eq!(internal_product(&e, &e).unwrap(), IntSym::s(Partition::single(n), CAPS));
        }
    }

    #[test]
    fn s21_squared() {
        let s21 = IntSym::s(p(&[2, 1]), CAPS);
        let expected = SymPoly::from_terms(
            Basis::S,
            CAPS,
            [(p(&[3]), 0, BigInt::one()), (p(&[2, 1]), 0, BigInt::one()), (p(&[1, 1, 1]), 0, BigInt::one())],
        );
        assert_eq!(internal_product(&s21, &s21).unwrap(), expected);
    }

    #[test]
    fn matches_character_table() {
        for n in 1..=5 {
            let parts = partitions_of(n);
            for a in &parts {
                for b in &parts {
                    let prod = internal_product(&IntSym::s(a.clone(), CAPS), &IntSym::s(b.clone(), CAPS)).unwrap();
                    for c in &parts {
                        assert_eq!(prod.coeff(c, 0), kronecker(a, b, c), "{a} {b} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn t_gradings_add() {
        let f = IntSym::h(3, CAPS).mul_t(1);
        let g = IntSym::h(3, CAPS).mul_t(2);
        assert_eq!(internal_product(&f, &g).unwrap(), IntSym::s(p(&[3]), CAPS).mul_t(3));
    }

    #[test]
    fn degree_mismatch_rejected() {
        let r = internal_product(&IntSym::h(2, CAPS), &IntSym::h(3, CAPS));
        assert!(matches!(r, Err(Error::DegreeMismatch(2, 3))));
    }
}
