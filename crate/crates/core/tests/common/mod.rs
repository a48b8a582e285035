//! Shared helpers for the integration tests.
#![allow(dead_code)]

use m0n::partition::Partition;
use m0n::plethysm::h_plethysm;
use m0n::symfun::{Caps, IntSym};

pub fn part(parts: &[u32]) -> Partition {
    Partition::new(parts).unwrap()
}

/// All x with Σ w_i·x_i = n and x_i ≥ min_i.
pub fn tuples(n: u32, weights: &[u32], mins: &[u32]) -> Vec<Vec<u32>> {
    fn go(n: u32, weights: &[u32], mins: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let i = cur.len();
        if i == weights.len() {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut x = mins[i];
        while weights[i] * x <= n {
            cur.push(x);
            go(n - weights[i] * x, weights, mins, cur, out);
            cur.pop();
            x += 1;
        }
    }
    let mut out = Vec::new();
    go(n, weights, mins, &mut Vec::new(), &mut out);
    out
}

/// h_{x_1}·h_{x_2}·…, with h_0 = 1.
pub fn h_prod(xs: &[u32], caps: Caps) -> IntSym {
    IntSym::h_lambda(Partition::from_unsorted(xs.iter().copied().filter(|&x| x > 0)), caps)
}

/// (h_r∘h_a)·h_{rest}.
pub fn pleth_prod(r: u32, a: u32, rest: &[u32], caps: Caps) -> IntSym {
    h_plethysm(r, &IntSym::h(a, caps)).unwrap().mul(&h_prod(rest, caps)).unwrap()
}

fn sum(terms: impl IntoIterator<Item = IntSym>, caps: Caps) -> IntSym {
    terms.into_iter().fold(IntSym::zero(m0n::symfun::Basis::H, caps), |acc, f| acc.add(&f).unwrap())
}

/// Σ over tuples with Σ x_i = n, x_i ≥ min_i, filtered, of h_{x}.
fn hsum(n: u32, mins: &[u32], keep: impl Fn(&[u32]) -> bool, caps: Caps) -> IntSym {
    let w = vec![1; mins.len()];
    sum(tuples(n, &w, mins).into_iter().filter(|x| keep(x)).map(|x| h_prod(&x, caps)), caps)
}

fn all(_: &[u32]) -> bool {
    true
}

/// The printed closed sums for Q_{n,k}, k ≤ 3, read with ordered tuples.
/// In the k = 2 plethysm sum the degree condition is taken as 2a + b = n.
pub fn closed_q(n: u32, k: u32, caps: Caps) -> IntSym {
    let h_n = IntSym::h(n, caps);
    match k {
        0 => h_n,
        1 => h_n.add(&hsum(n, &[1, 3], all, caps)).unwrap(),
        2 => {
            let pleth = sum(tuples(n, &[2, 1], &[3, 0]).into_iter().map(|x| pleth_prod(2, x[0], &x[1..], caps)), caps);
            sum(
                [
                    h_n,
                    hsum(n, &[1, 4], all, caps),
                    hsum(n, &[2, 3], all, caps),
                    hsum(n, &[3, 2, 1], all, caps),
                    pleth,
                    hsum(n, &[3, 3, 0], |x| x[0] < x[1], caps),
                ],
                caps,
            )
        }
        3 => {
            let p2 = |mins: &[u32], keep: &dyn Fn(&[u32]) -> bool| {
                let mut w = vec![1; mins.len()];
                w[0] = 2;
                sum(tuples(n, &w, mins).into_iter().filter(|x| keep(x)).map(|x| pleth_prod(2, x[0], &x[1..], caps)), caps)
            };
            let p3 = sum(tuples(n, &[3, 1], &[3, 0]).into_iter().map(|x| pleth_prod(3, x[0], &x[1..], caps)), caps);
            sum(
                [
                    h_n,
                    hsum(n, &[1, 5], all, caps),
                    hsum(n, &[2, 4], all, caps),
                    hsum(n, &[3, 3], all, caps),
                    hsum(n, &[2, 2, 3], all, caps),
                    hsum(n, &[1, 2, 4], all, caps),
                    hsum(n, &[3, 3, 1], all, caps),
                    hsum(n, &[3, 4, 0], all, caps),
                    p2(&[3, 1], &all),
                    hsum(n, &[3, 3, 1], |x| x[0] < x[1], caps),
                    hsum(n, &[1, 2, 2, 3], all, caps),
                    p2(&[3, 1, 1], &all),
                    hsum(n, &[3, 3, 1, 1], |x| x[0] < x[1], caps),
                    hsum(n, &[2, 3, 3, 0], all, caps),
                    hsum(n, &[3, 3, 3, 0], |x| x[0] < x[1] && x[1] < x[2], caps),
                    p2(&[3, 3, 0], &|x: &[u32]| x[0] != x[1]),
                    p3,
                ],
                caps,
            )
        }
        _ => panic!("closed sums are printed for k <= 3 only"),
    }
}
