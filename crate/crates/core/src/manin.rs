//! Manin's φ and χ, and the leading asymptotic coefficients c_k, d_k.
//!
//! φ = q + Σ_{n≥2} φ_n qⁿ/n!, where φ_n is the Poincaré polynomial of the
//! moduli space with n+1 markings, is computed twice: as the rank
//! specialization of Q, and by solving exp(t·log(1+φ)) = t²(1+φ) +
//! (1−t)(1+t+qt) one power of q at a time.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::biseries::RatSeries;
use crate::coeff::as_integer;
use crate::error::{Error, Result};
use crate::partition::factorial;
use crate::recursion::RepTable;
use crate::symfun::rank_specialize;

fn r(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// log(1+f) for f without q⁰ term, by q-degree: n·L_n = n·f_n − Σ_{j<n} j·L_j·f_{n−j}.
fn log1p_q(f: &RatSeries) -> RatSeries {
    let caps = f.caps();
    let mut jl: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); caps.k as usize + 1]; caps.n as usize + 1];
    for n in 1..=caps.n as usize {
        let mut cur: Vec<BigRational> = f.row(n as u32).iter().map(|c| c * r(n as i64)).collect();
        for j in 1..n {
            poly_sub_mul(&mut cur, &jl[j], f.row((n - j) as u32));
        }
        jl[n] = cur;
    }
    let rows: Vec<Vec<BigRational>> =
        jl.into_iter().enumerate().map(|(n, row)| if n == 0 { row } else { row.into_iter().map(|c| c / r(n as i64)).collect() }).collect();
    RatSeries::from_rows(caps.n, caps.k, &rows)
}

/// exp(g) for g without q⁰ term: n·E_n = Σ_{j≤n} j·g_j·E_{n−j}.
fn exp_q(g: &RatSeries) -> RatSeries {
    let caps = g.caps();
    let width = caps.k as usize + 1;
    let mut e: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); width]];
    e[0][0] = BigRational::one();
    for n in 1..=caps.n as usize {
        let mut acc = vec![BigRational::zero(); width];
        for j in 1..=n {
            let jg: Vec<BigRational> = g.row(j as u32).iter().map(|c| c * r(j as i64)).collect();
            poly_add_mul(&mut acc, &jg, &e[n - j]);
        }
        e.push(acc.into_iter().map(|c| c / r(n as i64)).collect());
    }
    RatSeries::from_rows(caps.n, caps.k, &e)
}

fn poly_add_mul(acc: &mut [BigRational], a: &[BigRational], b: &[BigRational]) {
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j < acc.len() && !y.is_zero() {
                acc[i + j] += x * y;
            }
        }
    }
}

fn poly_sub_mul(acc: &mut [BigRational], a: &[BigRational], b: &[BigRational]) {
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j < acc.len() && !y.is_zero() {
                acc[i + j] -= x * y;
            }
        }
    }
}

fn integral_poly(row: &[BigRational], scale: &BigInt, context: &str) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(row.len());
    for (k, c) in row.iter().enumerate() {
        let v = c * BigRational::from_integer(scale.clone());
        out.push(as_integer(&v).ok_or_else(|| Error::NonIntegral { location: format!("{context} t^{k}"), value: v.to_string() })?);
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}

/// φ_n for 1 ≤ n ≤ table caps, from rk(Q) = 1 + φ. Index 0 is unused and
/// left empty.
pub fn phi_from_rank(table: &RepTable) -> Result<Vec<Vec<BigInt>>> {
    let rk = rank_specialize(&table.q_series())?;
    let mut out = vec![Vec::new()];
    for n in 1..=table.caps.n {
        out.push(integral_poly(rk.row(n), &factorial(n), &format!("φ_{n} (rank)"))?);
    }
    Ok(out)
}

/// φ_n for 1 ≤ n ≤ n_max by solving exp(t·log(1+φ)) = t²(1+φ) + (1−t)(1+t+qt)
/// order by order: with a_n = φ_n/n! and D_n the qⁿ coefficient of the left
/// side computed with a_n = 0, one has t·a_n + D_n = t²·a_n.
pub fn phi_from_equation(n_max: u32) -> Result<Vec<Vec<BigInt>>> {
    // q^n coefficients have t-degree ≤ n, so a t-cap of n_max + 1 is lossless.
    let k_cap = n_max + 1;
    let mut phi = RatSeries::zero(n_max, k_cap);
    phi.set(1, 0, BigRational::one());
    for n in 2..=n_max {
        let lhs = exp_q(&log1p_q(&phi).shift(0, 1));
        let d: Vec<BigRational> = lhs.row(n).to_vec();
        // a_n·t(1−t) = −D_n; divide −D_n by t, then by 1 − t.
        if !d[0].is_zero() {
            return Err(Error::InexactDivision { location: format!("φ_{n}: division by t"), remainder: d[0].to_string() });
        }
        let mut quotient = vec![BigRational::zero(); k_cap as usize + 1];
        let mut running = BigRational::zero();
        for k in 0..k_cap as usize {
            running -= &d[k + 1];
            quotient[k] = running.clone();
        }
        if !running.is_zero() {
            return Err(Error::InexactDivision { location: format!("φ_{n}: division by 1−t"), remainder: running.to_string() });
        }
        for (k, c) in quotient.into_iter().enumerate() {
            phi.set(n, k as u32, c);
        }
    }
    let mut out = vec![Vec::new()];
    for n in 1..=n_max {
        out.push(integral_poly(phi.row(n), &factorial(n), &format!("φ_{n} (equation)"))?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManinReport {
    pub n_max: u32,
    /// φ_n coefficient lists, n = 1..=n_max.
    pub phi: Vec<Vec<String>>,
    pub routes_agree: bool,
    pub first_disagreement: Option<u32>,
    pub euler_identity_holds: bool,
}

/// Both φ routes plus the Euler identity, up to qⁿ.
pub fn manin_check(n_max: u32) -> Result<ManinReport> {
    if n_max < 3 {
        return Err(Error::InvalidArgument("Manin checks need n_max >= 3".into()));
    }
    let caps = crate::symfun::Caps::new(n_max, n_max.saturating_sub(2));
    let table = RepTable::compute(caps)?;
    let a = phi_from_rank(&table)?;
    let b = phi_from_equation(n_max)?;
    let first_disagreement = (1..=n_max).find(|&n| a[n as usize] != b[n as usize]);
    Ok(ManinReport {
        n_max,
        phi: b[1..].iter().map(|p| p.iter().map(|c| c.to_string()).collect()).collect(),
        routes_agree: first_disagreement.is_none(),
        first_disagreement,
        euler_identity_holds: euler_check(&b, n_max),
    })
}

/// (1+χ)·log(1+χ) = 2χ − q to order q^{n_max}, where χ = φ(q, 1).
pub fn euler_check(phi: &[Vec<BigInt>], n_max: u32) -> bool {
    let mut chi = RatSeries::zero(n_max, 0);
    for n in 1..=n_max {
        let total: BigInt = phi[n as usize].iter().sum();
        chi.set(n, 0, BigRational::new(total, factorial(n)));
    }
    let lhs = RatSeries::one(n_max, 0).add(&chi).unwrap().mul(&log1p_q(&chi)).unwrap();
    let mut rhs = chi.scale(&r(2));
    rhs.add_at(1, 0, &r(-1));
    lhs == rhs
}

/// c_k = (k+1)^{k−1}/k!.
pub fn asymptotic_c(k: u32) -> BigRational {
    power_over_factorial(k + 1, k as i64 - 1, k)
}

/// d_k = (k+1)^{k−2}/k!.
pub fn asymptotic_d(k: u32) -> BigRational {
    power_over_factorial(k + 1, k as i64 - 2, k)
}

fn power_over_factorial(base: u32, exp: i64, k: u32) -> BigRational {
    let b = BigInt::from(base);
    let p = if exp >= 0 {
        BigRational::from_integer(num_traits::pow(b, exp as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(b, (-exp) as usize))
    };
    p / BigRational::from_integer(factorial(k))
}

/// d_k by the convolution c_k − ½Σ_{j=0}^{k−1} c_j c_{k−1−j}.
pub fn asymptotic_d_convolution(k: u32) -> BigRational {
    let mut s = BigRational::zero();
    for j in 0..k {
        s += asymptotic_c(j) * asymptotic_c(k - 1 - j);
    }
    asymptotic_c(k) - s / r(2)
}

/// The truncated solution of 𝔠 = exp(t𝔠), by fixed-point iteration in ℚ⟦t⟧.
pub fn c_series_fixed_point(order: u32) -> Vec<BigRational> {
    let len = order as usize + 1;
    let mut c = vec![BigRational::zero(); len];
    c[0] = BigRational::one();
    for _ in 0..len {
        // exp of t·c as a power series in t
        let mut g = vec![BigRational::zero(); len];
        for k in 1..len {
            g[k] = c[k - 1].clone();
        }
        let mut e = vec![BigRational::zero(); len];
        e[0] = BigRational::one();
        for n in 1..len {
            let mut acc = BigRational::zero();
            for j in 1..=n {
                acc += r(j as i64) * &g[j] * &e[n - j];
            }
            e[n] = acc / r(n as i64);
        }
        c = e;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn phi_low_values() {
        let phi = phi_from_equation(6).unwrap();
        assert_eq!(phi[1], ints(&[1]));
        assert_eq!(phi[2], ints(&[1]));
        assert_eq!(phi[3], ints(&[1, 1]));
        assert_eq!(phi[4], ints(&[1, 5, 1]));
        assert_eq!(phi[5], ints(&[1, 16, 16, 1]));
    }

    #[test]
    fn routes_agree_and_euler_holds() {
        let report = manin_check(8).unwrap();
        assert!(report.routes_agree, "{report:?}");
        assert!(report.euler_identity_holds);
    }

    #[test]
    fn euler_detects_corruption() {
        let mut phi = phi_from_equation(6).unwrap();
        phi[5][1] += 1;
        assert!(!euler_check(&phi, 6));
    }

    #[test]
    fn c_and_d_values() {
        assert_eq!(asymptotic_c(0), rat(1, 1));
        assert_eq!(asymptotic_c(1), rat(1, 1));
        assert_eq!(asymptotic_c(2), rat(3, 2));
        assert_eq!(asymptotic_c(3), rat(8, 3));
        assert_eq!(asymptotic_d(1), rat(1, 2));
        assert_eq!(asymptotic_d(3), rat(2, 3));
        for k in 0..=10 {
            assert_eq!(asymptotic_d(k), asymptotic_d_convolution(k), "k = {k}");
        }
    }

    #[test]
    fn c_solves_functional_equation() {
        let c = c_series_fixed_point(10);
        for k in 0..=10 {
            assert_eq!(c[k as usize], asymptotic_c(k));
        }
    }
}
