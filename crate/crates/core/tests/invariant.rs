//! Closed forms and conjecture data on the invariant side.

use m0n::conjectures::{check_log_concave, find_ultra_lc_witness, p_k1_equality_pattern, ratio_trend_distance};
use m0n::invariant::InvTable;
use m0n::partition::binomial;
use m0n::symfun::Caps;
use num_bigint::BigInt;
use num_rational::BigRational;

#[test]
fn low_degree_closed_forms() {
    let inv = InvTable::compute(Caps::new(40, 38)).unwrap();
    for n in 3..=40u32 {
        let m = (n - 2) / 2;
        assert_eq!(inv.p_nk(n, 0), BigInt::from(1));
        assert_eq!(inv.p_nk(n, 1), BigInt::from(m));
        let p2 = if n % 2 == 0 { m * m.saturating_sub(1) } else { m * m };
        assert_eq!(inv.p_nk(n, 2), BigInt::from(p2), "n = {n}");
        if n >= 4 {
            // ⌊(n−3)/2⌋ + ½(C(n−4, 2) + ⌊(n−4)/2⌋)
            let long = BigInt::from((n - 3) / 2) + (binomial((n - 4) as u64, 2) + BigInt::from((n - 4) / 2)) / 2;
            assert_eq!(inv.p_nk(n, 2), long);
        }
    }
}

#[test]
fn log_concave_up_to_45() {
    let inv = InvTable::compute(Caps::new(45, 43)).unwrap();
    for n in 3..=45 {
        assert!(check_log_concave("p", &inv.p_poly(n)).holds(), "p_{n}");
        assert!(check_log_concave("q", &inv.q_poly(n)).holds(), "q_{n}");
    }
}

#[test]
fn k1_equality_iff_odd() {
    let inv = InvTable::compute(Caps::new(41, 3)).unwrap();
    assert_eq!(p_k1_equality_pattern(&inv, 5, 41).unwrap(), None);
}

#[test]
fn ratio_trend_approaches_one() {
    let inv = InvTable::compute(Caps::new(300, 5)).unwrap();
    let bound = BigRational::new(3.into(), 10.into());
    for k in 1..=4 {
        let d100 = ratio_trend_distance(&inv, 100, k);
        let d300 = ratio_trend_distance(&inv, 300, k);
        assert!(d300 < d100, "k = {k}");
        assert!(d300 < bound, "k = {k}");
    }
}

#[test]
fn ultra_witness_matches_golden() {
    let golden: serde_json::Value =
        serde_json::from_str(include_str!("golden/ultra_lc_witness.json")).unwrap();
    let inv = InvTable::compute(Caps::new(200, 2)).unwrap();
    let found = find_ultra_lc_witness(&inv, 1, 200).unwrap().expect("a witness below 200");
    assert_eq!(u64::from(found), golden["first_failure_n"].as_u64().unwrap());
    let seq: Vec<String> = InvTable::compute(Caps::new(found, found - 2)).unwrap().q_poly(found).iter().map(|c| c.to_string()).collect();
    let want: Vec<String> = serde_json::from_value(golden["sequence"].clone()).unwrap();
    assert_eq!(seq, want);
}
