//! Log-concavity checks: plain, ultra (binomially normalized), per Schur
//! multiplicity, and equivariant (containment of internal products).
//!
//! A conjecture that fails is reported, never raised; errors are reserved for
//! the engine contradicting itself.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::invariant::{binom, InvTable};
use crate::partition::{factorial, partitions_of, Partition};
use crate::recursion::RepTable;
use crate::symfun::{internal_product, to_schur, IntSym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    /// The tuple budget ran out before every case was checked.
    Partial,
}

/// Outcome at one interior index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Strict,
    Equal,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcavityReport {
    pub sequence: String,
    /// `steps[i]` is the verdict at index i + 1.
    pub steps: Vec<Step>,
    pub first_failure: Option<usize>,
}

impl ConcavityReport {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn step_at(&self, k: usize) -> Option<Step> {
        k.checked_sub(1).and_then(|i| self.steps.get(i)).copied()
    }

    fn from_steps(sequence: &str, steps: Vec<Step>) -> Self {
        let first_failure = steps.iter().position(|s| *s == Step::Fails).map(|i| i + 1);
        ConcavityReport { sequence: sequence.to_string(), steps, first_failure }
    }
}

fn compare<T: Ord>(lhs: T, rhs: T) -> Step {
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => Step::Strict,
        std::cmp::Ordering::Equal => Step::Equal,
        std::cmp::Ordering::Less => Step::Fails,
    }
}

/// a_k² ≥ a_{k−1}a_{k+1} at every interior k.
pub fn check_log_concave(name: &str, seq: &[BigInt]) -> ConcavityReport {
    let steps = (1..seq.len().saturating_sub(1)).map(|k| compare(&seq[k] * &seq[k], &seq[k - 1] * &seq[k + 1])).collect();
    ConcavityReport::from_steps(name, steps)
}

/// Log-concavity of a_i/binom(n_binom, i).
pub fn check_ultra_log_concave(name: &str, seq: &[BigInt], n_binom: u32) -> ConcavityReport {
    let normalized: Vec<BigRational> =
        seq.iter().enumerate().map(|(i, a)| BigRational::new(a.clone(), binom(n_binom, i as u32).max(BigInt::one()))).collect();
    let steps = (1..normalized.len().saturating_sub(1))
        .map(|k| compare(&normalized[k] * &normalized[k], &normalized[k - 1] * &normalized[k + 1]))
        .collect();
    ConcavityReport::from_steps(name, steps)
}

/// The machine-readable record every check reduces to.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub conjecture: String,
    pub n: u32,
    pub mode: String,
    pub verdict: Verdict,
    pub tuples_checked: u64,
    pub witness: Option<Value>,
}

/// Which generating series a per-representation check reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// H*(M̄₀,ₙ)
    P,
    /// H*(M̄₀,ₙ₊₁) as an S_n-representation
    Q,
}

impl Side {
    /// Top cohomological index: n−3 for P, n−2 for Q.
    fn top(self, n: u32) -> Option<u32> {
        match self {
            Side::P => n.checked_sub(3),
            Side::Q => n.checked_sub(2),
        }
    }

    fn piece(self, table: &RepTable, n: u32, k: u32) -> IntSym {
        match self {
            Side::P => table.p_nk(n, k),
            Side::Q => table.q_nk(n, k),
        }
    }
}

fn require(table: &RepTable, n: u32, side: Side) -> Result<()> {
    let top = side.top(n).unwrap_or(0);
    if n > table.caps.n || top > table.caps.k {
        return Err(Error::TruncationOutOfRange { n, k: top, caps: table.caps });
    }
    Ok(())
}

/// Schur expansions of the graded pieces of P_n or Q_n, k = 0..=top.
pub fn schur_pieces(table: &RepTable, n: u32, side: Side) -> Result<Vec<IntSym>> {
    require(table, n, side)?;
    match side.top(n) {
        None => Ok(Vec::new()),
        Some(top) => (0..=top).map(|k| to_schur(&side.piece(table, n, k))).collect(),
    }
}

/// (mult_λ(P_{n,k}))_k and (mult_λ(Q_{n,k}))_k.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultReport {
    pub lambda: Partition,
    pub p: ConcavityReport,
    pub q: ConcavityReport,
}

impl MultReport {
    pub fn holds(&self) -> bool {
        self.p.holds() && self.q.holds()
    }
}

fn mult_report(lambda: &Partition, p: &[IntSym], q: &[IntSym]) -> MultReport {
    let seq = |pieces: &[IntSym]| -> Vec<BigInt> { pieces.iter().map(|f| f.coeff(lambda, 0)).collect() };
    MultReport {
        lambda: lambda.clone(),
        p: check_log_concave(&format!("mult_{lambda:?}(P_{})", lambda.size()), &seq(p)),
        q: check_log_concave(&format!("mult_{lambda:?}(Q_{})", lambda.size()), &seq(q)),
    }
}

pub fn check_mult_lc(table: &RepTable, n: u32, lambda: &Partition) -> Result<MultReport> {
    if lambda.size() != n {
        return Err(Error::InvalidArgument(format!("{lambda:?} is not a partition of {n}")));
    }
    let p = schur_pieces(table, n, Side::P)?;
    let q = schur_pieces(table, n, Side::Q)?;
    Ok(mult_report(lambda, &p, &q))
}

/// Every λ ⊢ n at once, sharing the Schur conversions.
pub fn check_mult_lc_all(table: &RepTable, n: u32) -> Result<Vec<MultReport>> {
    let p = schur_pieces(table, n, Side::P)?;
    let q = schur_pieces(table, n, Side::Q)?;
    Ok(partitions_of(n).iter().map(|l| mult_report(l, &p, &q)).collect())
}

pub fn mult_lc_report(table: &RepTable, n: u32) -> Result<ConjectureReport> {
    let reports = check_mult_lc_all(table, n)?;
    let witness = reports.iter().find(|r| !r.holds()).map(|r| serde_json::to_value(r).expect("serializable"));
    Ok(ConjectureReport {
        conjecture: "mult_lc".into(),
        n,
        mode: "all_partitions".into(),
        verdict: if witness.is_some() { Verdict::Fails } else { Verdict::Holds },
        tuples_checked: 2 * reports.len() as u64,
        witness,
    })
}

/// The quadruples (i, j, k, l), i ≤ j ≤ k ≤ l, i + l = j + k, within 0..=top.
/// Weak mode keeps only (k−1, k, k, k+1). Cheaper tuples (smaller spread) come first.
pub fn equiv_tuples(top: u32, strong: bool) -> Vec<(u32, u32, u32, u32)> {
    let mut out = Vec::new();
    for i in 0..=top {
        for l in i..=top {
            for j in i..=l {
                let Some(k) = (i + l).checked_sub(j) else { continue };
                if j > k || k > l || (i, l) == (j, k) {
                    continue;
                }
                if !strong && !(j == k && i + 1 == j) {
                    continue;
                }
                out.push((i, j, k, l));
            }
        }
    }
    out.sort_by_key(|&(i, j, k, l)| (l - i, i, j, k));
    out
}

/// V_i ⊗ V_l ⊆ V_j ⊗ V_k for the tuples of `equiv_tuples`, checked by
/// Schur-coefficient domination. `max_tuples` bounds the work; when it cuts
/// the run short the verdict is `Partial`.
pub fn check_equiv_lc(table: &RepTable, n: u32, strong: bool, side: Side, max_tuples: Option<usize>) -> Result<ConjectureReport> {
    require(table, n, side)?;
    let mode = if strong { "strong" } else { "weak" };
    let conjecture = match side {
        Side::P => "equiv_lc".to_string(),
        Side::Q => "equiv_lc_q".to_string(),
    };
    let Some(top) = side.top(n) else {
        return Ok(ConjectureReport { conjecture, n, mode: mode.into(), verdict: Verdict::Holds, tuples_checked: 0, witness: None });
    };
    let pieces: Vec<IntSym> = (0..=top).map(|k| side.piece(table, n, k)).collect();
    let all = equiv_tuples(top, strong);
    let budget = max_tuples.unwrap_or(usize::MAX).min(all.len());
    let tuples = &all[..budget];

    let mut pairs: Vec<(u32, u32)> = tuples.iter().flat_map(|&(i, j, k, l)| [(i, l), (j, k)]).collect();
    pairs.sort();
    pairs.dedup();
    let products: Vec<((u32, u32), IntSym)> = pairs
        .par_iter()
        .map(|&(a, b)| internal_product(&pieces[a as usize], &pieces[b as usize]).map(|p| ((a, b), p)))
        .collect::<Result<_>>()?;
    let lookup = |a: u32, b: u32| &products[products.binary_search_by_key(&(a, b), |(key, _)| *key).expect("pair computed")].1;

    let mut witness = None;
    let mut checked = 0u64;
    for &(i, j, k, l) in tuples {
        checked += 1;
        let small = lookup(i, l);
        let big = lookup(j, k);
        let bad = small.iter().find(|(lambda, t, c)| *c > &big.coeff(lambda, *t));
        if let Some((lambda, t, c)) = bad {
            witness = Some(json!({
                "tuple": [i, j, k, l],
                "lambda": lambda,
                "lhs": c.to_string(),
                "rhs": big.coeff(lambda, t).to_string(),
            }));
            break;
        }
    }
    let verdict = if witness.is_some() {
        Verdict::Fails
    } else if budget < all.len() {
        Verdict::Partial
    } else {
        Verdict::Holds
    };
    Ok(ConjectureReport { conjecture, n, mode: mode.into(), verdict, tuples_checked: checked, witness })
}

/// Log-concavity of 𝔭_n and 𝔮_n for 3 ≤ n ≤ table caps, as one report per series.
pub fn invariant_lc_reports(inv: &InvTable) -> Vec<ConjectureReport> {
    let mut out = Vec::new();
    for (name, side) in [("p", Side::P), ("q", Side::Q)] {
        let mut witness = None;
        let mut checked = 0;
        for n in 3..=inv.caps.n {
            let seq = match side {
                Side::P => inv.p_poly(n),
                Side::Q => inv.q_poly(n),
            };
            let r = check_log_concave(&format!("{name}_{n}"), &seq);
            checked += r.steps.len() as u64;
            if let Some(k) = r.first_failure {
                witness = Some(json!({ "n": n, "k": k }));
                break;
            }
        }
        out.push(ConjectureReport {
            conjecture: format!("lc_{name}"),
            n: inv.caps.n,
            mode: "invariant".into(),
            verdict: if witness.is_some() { Verdict::Fails } else { Verdict::Holds },
            tuples_checked: checked,
            witness,
        });
    }
    out
}

/// Whether the normalized sequence a_k/binom(len, k) of 𝔮_n is log-concave at k.
fn q_ultra_step(inv: &InvTable, n: u32, k: u32) -> Step {
    let seq: Vec<BigInt> = (k - 1..=k + 1).map(|j| inv.q_nk(n, j)).collect();
    let nb = n - 2;
    let norm: Vec<BigRational> = (0..3).map(|i| BigRational::new(seq[i].clone(), binom(nb, k - 1 + i as u32))).collect();
    compare(&norm[1] * &norm[1], &norm[0] * &norm[2])
}

/// The first n ≤ n_max at which ultra-log-concavity of 𝔮_n fails at index k.
/// Needs t-cap ≥ k + 1.
pub fn find_ultra_lc_witness(inv: &InvTable, k: u32, n_max: u32) -> Result<Option<u32>> {
    if k == 0 || k + 1 > inv.caps.k || n_max > inv.caps.n {
        return Err(Error::TruncationOutOfRange { n: n_max, k: k + 1, caps: inv.caps });
    }
    Ok((k + 3..=n_max).find(|&n| q_ultra_step(inv, n, k) == Step::Fails))
}

/// 𝔭²_{n,1} vs 𝔭_{n,0}𝔭_{n,2}: the first n in range where "strict iff n even"
/// breaks, if any.
pub fn p_k1_equality_pattern(inv: &InvTable, lo: u32, hi: u32) -> Result<Option<u32>> {
    if hi > inv.caps.n || inv.caps.k < 2 {
        return Err(Error::TruncationOutOfRange { n: hi, k: 2, caps: inv.caps });
    }
    Ok((lo..=hi).find(|&n| {
        let step = compare(inv.p_nk(n, 1).pow(2), inv.p_nk(n, 0) * inv.p_nk(n, 2));
        let expected = if n % 2 == 0 { Step::Strict } else { Step::Equal };
        step != expected
    }))
}

/// 𝔮_{n,k}·(k!)²/((k+1)^{k−1}n^k), which tends to 1.
pub fn ratio_trend(inv: &InvTable, n: u32, k: u32) -> BigRational {
    let fk = factorial(k);
    let num = inv.q_nk(n, k) * &fk * &fk;
    let base = BigInt::from(k + 1);
    let den = num_traits::pow(BigInt::from(n), k as usize);
    let mut r = BigRational::new(num, den);
    if k >= 1 {
        r /= BigRational::from_integer(num_traits::pow(base, (k - 1) as usize));
    } else {
        r *= BigRational::from_integer(base);
    }
    r
}

/// |ratio_trend − 1|.
pub fn ratio_trend_distance(inv: &InvTable, n: u32, k: u32) -> BigRational {
    (ratio_trend(inv, n, k) - BigRational::one()).abs()
}

/// (1 + 1/(k² + 2k))^k, the limit of the log-concavity ratio of 𝔮 at k.
pub fn lc_limit(k: u32) -> BigRational {
    let k2 = BigInt::from(k * k + 2 * k);
    let base = BigRational::one() + BigRational::new(BigInt::one(), k2);
    num_traits::pow(base, k as usize)
}

/// k/(k+1)·(1 + 1/(k² + 2k))^k, the limit of the ultra ratio.
pub fn ultra_limit(k: u32) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(k + 1)) * lc_limit(k)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub n: u32,
    pub k: u32,
    pub q_lc_ratio: Option<f64>,
    pub p_lc_ratio: Option<f64>,
    pub q_ultra_ratio: Option<f64>,
    pub q_trend: f64,
    pub lc_target: f64,
    pub ultra_target: f64,
}

fn ratio(a: &BigInt, b: &BigInt, c: &BigInt) -> Option<BigRational> {
    let den = b * c;
    (!den.is_zero()).then(|| BigRational::new(a * a, den))
}

fn f64_of(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Log-concavity and ultra ratios at index k for each n, with their limits.
pub fn asymptotic_report(inv: &InvTable, k: u32, n_list: &[u32]) -> Result<Vec<AsymptoticRow>> {
    if k == 0 || k + 1 > inv.caps.k {
        return Err(Error::TruncationOutOfRange { n: inv.caps.n, k: k + 1, caps: inv.caps });
    }
    let lc_target = f64_of(&lc_limit(k));
    let ultra_target = f64_of(&ultra_limit(k));
    n_list
        .iter()
        .map(|&n| {
            if n > inv.caps.n || n < 3 {
                return Err(Error::TruncationOutOfRange { n, k, caps: inv.caps });
            }
            let q = |j| inv.q_nk(n, j);
            let p = |j| inv.p_nk(n, j);
            let q_lc = ratio(&q(k), &q(k - 1), &q(k + 1));
            let q_ultra = q_lc.as_ref().map(|r| {
                let nb = n - 2;
                let b = |j| BigRational::from_integer(binom(nb, j));
                r * b(k - 1) * b(k + 1) / (b(k) * b(k))
            });
            Ok(AsymptoticRow {
                n,
                k,
                q_lc_ratio: q_lc.as_ref().map(f64_of),
                p_lc_ratio: ratio(&p(k), &p(k - 1), &p(k + 1)).as_ref().map(f64_of),
                q_ultra_ratio: q_ultra.as_ref().map(f64_of),
                q_trend: f64_of(&ratio_trend(inv, n, k)),
                lc_target,
                ultra_target,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::symfun::Caps;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn plain_examples() {
        let r = check_log_concave("p7", &ints(&[1, 2, 4, 2, 1]));
        assert!(r.holds());
        assert_eq!(r.step_at(2), Some(Step::Strict));
        assert!(check_log_concave("", &ints(&[1, 1])).steps.is_empty());
        let r = check_log_concave("", &ints(&[1, 2, 5]));
        assert_eq!(r.first_failure, Some(1));
    }

    #[test]
    fn ultra_examples() {
        assert_eq!(check_ultra_log_concave("", &ints(&[1, 1, 1]), 5).first_failure, Some(1));
        let row = ints(&[1, 6, 15, 20, 15, 6, 1]);
        let r = check_ultra_log_concave("", &row, 6);
        assert!(r.holds());
        assert!(r.steps.iter().all(|s| *s == Step::Equal));
    }

    #[test]
    fn tuple_sets() {
        let weak = equiv_tuples(4, false);
        assert_eq!(weak, vec![(0, 1, 1, 2), (1, 2, 2, 3), (2, 3, 3, 4)]);
        let strong = equiv_tuples(4, true);
        assert!(weak.iter().all(|t| strong.contains(t)));
        assert!(strong.contains(&(0, 2, 2, 4)));
        assert!(strong.contains(&(0, 1, 3, 4)));
        assert!(strong.iter().all(|&(i, j, k, l)| i + l == j + k && i < j && j <= k && k < l));
    }

    #[test]
    fn equivariant_small_cases() {
        let table = RepTable::compute(Caps::new(7, 5)).unwrap();
        for n in 3..=7 {
            let strong = check_equiv_lc(&table, n, true, Side::P, None).unwrap();
            let weak = check_equiv_lc(&table, n, false, Side::P, None).unwrap();
            assert_eq!(strong.verdict, Verdict::Holds, "{strong:?}");
            assert_eq!(weak.verdict, Verdict::Holds);
            assert!(weak.tuples_checked <= strong.tuples_checked);
        }
        let partial = check_equiv_lc(&table, 7, true, Side::P, Some(1)).unwrap();
        assert_eq!(partial.verdict, Verdict::Partial);
        assert_eq!(partial.tuples_checked, 1);
    }

    #[test]
    fn multiplicity_small_cases() {
        let table = RepTable::compute(Caps::new(8, 6)).unwrap();
        let r = check_mult_lc(&table, 8, &Partition::new(&[7, 1]).unwrap()).unwrap();
        assert!(r.holds());
        // λ = (n) gives the Betti numbers of the quotient.
        let inv = InvTable::compute(Caps::new(8, 6)).unwrap();
        let r = check_mult_lc(&table, 8, &Partition::single(8)).unwrap();
        let seq: Vec<BigInt> = (0..=5).map(|k| inv.p_nk(8, k)).collect();
        assert_eq!(r.p, check_log_concave(&r.p.sequence, &seq));
        // λ₁ < 3 never appears.
        let r = check_mult_lc(&table, 6, &Partition::new(&[2, 2, 2]).unwrap()).unwrap();
        assert!(r.holds());
        assert!(mult_lc_report(&table, 8).unwrap().verdict == Verdict::Holds);
    }

    #[test]
    fn limits() {
        assert_eq!(ultra_limit(1), rat(2, 3));
        assert_eq!(lc_limit(2), rat(81, 64));
    }

    #[test]
    fn report_json_shape() {
        let table = RepTable::compute(Caps::new(5, 3)).unwrap();
        let r = check_equiv_lc(&table, 5, true, Side::P, None).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["conjecture"], "equiv_lc");
        assert_eq!(v["mode"], "strong");
        assert_eq!(v["verdict"], "holds");
        assert!(v["witness"].is_null());
    }
}
