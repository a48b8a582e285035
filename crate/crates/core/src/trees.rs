//! Weighted rooted trees: the independent oracle for Q.
//!
//! A tree is stored through its root decomposition: the root weight b, the
//! number a of inputs attached to the root, and the multiset of subtrees
//! hanging from the root, each of which has positive root weight. Enumeration
//! follows that decomposition directly, so every tree is produced once.

use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::ser::SerializeTuple;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::factorial;
use crate::plethysm::h_plethysm;
use crate::symfun::{Basis, Caps, IntSym};

/// Largest number of inputs the oracle will enumerate.
pub const MAX_ORACLE_N: u32 = 12;

/// Field order gives the canonical order: (n, k, b, a, children).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightedRootedTree {
    n: u32,
    k: u32,
    root_weight: u32,
    root_inputs: u32,
    children: Vec<WeightedRootedTree>,
}

impl WeightedRootedTree {
    /// Validates the weight conditions; `children` may come in any order.
    pub fn new(root_weight: u32, root_inputs: u32, mut children: Vec<WeightedRootedTree>) -> Result<Self> {
        if children.iter().any(|c| c.root_weight == 0) {
            return Err(Error::InvalidArgument("only the root may have weight zero".into()));
        }
        if root_weight as i64 > root_inputs as i64 + children.len() as i64 - 2 {
            return Err(Error::InvalidArgument(format!(
                "root weight {root_weight} exceeds valency bound with {root_inputs} inputs and {} children",
                children.len()
            )));
        }
        children.sort();
        let n = root_inputs + children.iter().map(|c| c.n).sum::<u32>();
        let k = root_weight + children.iter().map(|c| c.k).sum::<u32>();
        Ok(WeightedRootedTree { n, k, root_weight, root_inputs, children })
    }

    pub fn inputs(&self) -> u32 {
        self.n
    }

    pub fn weight(&self) -> u32 {
        self.k
    }

    pub fn root_weight(&self) -> u32 {
        self.root_weight
    }

    pub fn root_inputs(&self) -> u32 {
        self.root_inputs
    }

    pub fn children(&self) -> &[WeightedRootedTree] {
        &self.children
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.vertex_count()).sum::<usize>()
    }

    /// Children grouped into (subtree, multiplicity).
    fn groups(&self) -> Vec<(&WeightedRootedTree, u32)> {
        let mut out: Vec<(&WeightedRootedTree, u32)> = Vec::new();
        for c in &self.children {
            match out.last_mut() {
                Some((t, m)) if *t == c => *m += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    /// Order of the stabilizer of a labeling: a!·Π_j |Stab(T_j)|^{r_j}·r_j!.
    pub fn stabilizer_order(&self) -> BigInt {
        let mut s = factorial(self.root_inputs);
        for (t, r) in self.groups() {
            s *= num_traits::pow(t.stabilizer_order(), r as usize) * factorial(r);
        }
        s
    }

    /// dim U_T = n!/|Stab(T)|.
    pub fn dimension(&self) -> BigInt {
        factorial(self.n) / self.stabilizer_order()
    }
}

impl Serialize for WeightedRootedTree {
    /// `[b, a, [children…]]`
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(3)?;
        t.serialize_element(&self.root_weight)?;
        t.serialize_element(&self.root_inputs)?;
        t.serialize_element(&self.children)?;
        t.end()
    }
}

type TreeMemo = Mutex<FxHashMap<(u32, u32, bool), Arc<Vec<WeightedRootedTree>>>>;

fn memo() -> &'static TreeMemo {
    static MEMO: OnceLock<TreeMemo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// 𝒯_{n,k}, or 𝒯⁺_{n,k} when `positive_root` is set, in canonical order.
pub fn enumerate(n: u32, k: u32, positive_root: bool) -> Result<Arc<Vec<WeightedRootedTree>>> {
    if n > MAX_ORACLE_N {
        return Err(Error::OracleTooLarge { n, max: MAX_ORACLE_N });
    }
    Ok(enumerate_inner(n, k, positive_root))
}

fn enumerate_inner(n: u32, k: u32, positive_root: bool) -> Arc<Vec<WeightedRootedTree>> {
    if let Some(v) = memo().lock().expect("memo poisoned").get(&(n, k, positive_root)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if n >= 2 {
        // Candidate subtrees: all positive-root trees with fewer inputs.
        let mut pool: Vec<WeightedRootedTree> = Vec::new();
        for m in 3..n {
            for j in 1..=k {
                pool.extend(enumerate_inner(m, j, true).iter().cloned());
            }
        }
        pool.sort();
        for a in 0..=n {
            let mut chosen = Vec::new();
            multisets(&pool, 0, n - a, k, &mut chosen, &mut |children: &[WeightedRootedTree]| {
                let r = children.len() as i64;
                let kc: u32 = children.iter().map(|c| c.k).sum();
                let b = k - kc;
                let lower = if positive_root { 1 } else { 0 };
                if b >= lower && (b as i64) <= a as i64 + r - 2 {
                    out.push(WeightedRootedTree::new(b, a, children.to_vec()).expect("valid by construction"));
                }
            });
        }
    }
    out.sort();
    let out = Arc::new(out);
    memo().lock().expect("memo poisoned").insert((n, k, positive_root), out.clone());
    out
}

/// Calls `visit` on every multiset of `pool[start..]` (nondecreasing index
/// sequences) with input total exactly `n_left` and weight total at most `k_left`.
fn multisets(
    pool: &[WeightedRootedTree],
    start: usize,
    n_left: u32,
    k_left: u32,
    chosen: &mut Vec<WeightedRootedTree>,
    visit: &mut dyn FnMut(&[WeightedRootedTree]),
) {
    if n_left == 0 {
        visit(chosen);
        return;
    }
    for i in start..pool.len() {
        let t = &pool[i];
        if t.n > n_left || t.k > k_left {
            continue;
        }
        chosen.push(t.clone());
        multisets(pool, i, n_left - t.n, k_left - t.k, chosen, visit);
        chosen.pop();
    }
}

/// |𝒯_{n,k}|.
pub fn count_trees(n: u32, k: u32) -> Result<usize> {
    Ok(enumerate(n, k, false)?.len())
}

/// ch(U_T) = h_a·Π_j h_{r_j}∘ch(U_{T_j}), as a t-free value under `caps`.
pub fn ch_of_tree(tree: &WeightedRootedTree, caps: Caps) -> Result<IntSym> {
    if tree.n > caps.n {
        return Err(Error::InvalidArgument(format!("tree has {} inputs, caps allow {}", tree.n, caps.n)));
    }
    let mut out = IntSym::h(tree.root_inputs, caps);
    for (t, r) in tree.groups() {
        out = out.mul(&h_plethysm(r, &ch_of_tree(t, caps)?)?)?;
    }
    Ok(out)
}

/// Σ_{T∈𝒯_{n,k}} ch(U_T).
pub fn oracle_q(n: u32, k: u32, caps: Caps) -> Result<IntSym> {
    let mut acc = IntSym::zero(Basis::H, caps);
    for t in enumerate(n, k, false)?.iter() {
        acc = acc.add(&ch_of_tree(t, caps)?)?;
    }
    Ok(acc)
}

/// Σ_{T∈𝒯⁺_{n,k}} ch(U_T).
pub fn oracle_qplus(n: u32, k: u32, caps: Caps) -> Result<IntSym> {
    let mut acc = IntSym::zero(Basis::H, caps);
    for t in enumerate(n, k, true)?.iter() {
        acc = acc.add(&ch_of_tree(t, caps)?)?;
    }
    Ok(acc)
}

/// Rooted unlabeled tree shapes, as sorted multisets of child shapes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Shape(Vec<Shape>);

impl Shape {
    fn size(&self) -> usize {
        1 + self.0.iter().map(Shape::size).sum::<usize>()
    }

    fn automorphisms(&self) -> BigInt {
        let mut total = BigInt::one();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            let m = (j - i) as u32;
            total *= num_traits::pow(self.0[i].automorphisms(), m as usize) * factorial(m);
            i = j;
        }
        total
    }
}

fn shapes(vertices: usize, memo: &mut FxHashMap<usize, Vec<Shape>>) -> Vec<Shape> {
    if let Some(v) = memo.get(&vertices) {
        return v.clone();
    }
    let mut pool = Vec::new();
    for s in 1..vertices {
        pool.extend(shapes(s, memo));
    }
    pool.sort();
    let mut out = Vec::new();
    fn pick(pool: &[Shape], start: usize, left: usize, chosen: &mut Vec<Shape>, out: &mut Vec<Shape>) {
        if left == 0 {
            out.push(Shape(chosen.clone()));
            return;
        }
        for i in start..pool.len() {
            let sz = pool[i].size();
            if sz <= left {
                chosen.push(pool[i].clone());
                pick(pool, i, left - sz, chosen, out);
                chosen.pop();
            }
        }
    }
    pick(&pool, 0, vertices - 1, &mut Vec::new(), &mut out);
    memo.insert(vertices, out.clone());
    out
}

/// Σ k!/|Aut(T)| over rooted tree shapes with k+1 vertices (root weight 0,
/// all other weights 1). Cayley's formula says this is (k+1)^{k−1}.
pub fn cayley_statistics(k: u32) -> BigRational {
    let mut memo = FxHashMap::default();
    let fk = factorial(k);
    let mut total = BigRational::zero();
    for s in shapes(k as usize + 1, &mut memo) {
        total += BigRational::new(fk.clone(), s.automorphisms());
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::symfun::rank_specialize;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    const CAPS: Caps = Caps { n: 10, k: 0 };

    #[test]
    fn empty_and_trivial_cases() {
        for k in 0..4 {
            assert_eq!(count_trees(0, k).unwrap(), 0);
            assert_eq!(count_trees(1, k).unwrap(), 0);
        }
        for n in 2..=9 {
            let t = enumerate(n, 0, false).unwrap();
            assert_eq!(t.len(), 1);
            assert!(t[0].children().is_empty());
            assert_eq!(t[0].dimension(), BigInt::one());
            assert_eq!(ch_of_tree(&t[0], CAPS).unwrap(), IntSym::h(n, CAPS));
        }
        assert_eq!(count_trees(5, 1).unwrap(), 3);
        for n in 3..=9 {
            assert_eq!(enumerate(n, 1, true).unwrap().len(), 1);
            assert!(enumerate(n, 0, true).unwrap().is_empty());
        }
        assert!(matches!(enumerate(13, 1, false), Err(Error::OracleTooLarge { .. })));
    }

    #[test]
    fn two_and_three_vertex_characters() {
        let leaf = WeightedRootedTree::new(1, 3, vec![]).unwrap();
        let two = WeightedRootedTree::new(0, 2, vec![leaf.clone()]).unwrap();
        assert_eq!(ch_of_tree(&two, CAPS).unwrap(), IntSym::h_lambda(p(&[3, 2]), CAPS));
        let three = WeightedRootedTree::new(0, 1, vec![leaf.clone(), leaf.clone()]).unwrap();
        let expected = IntSym::h(1, CAPS).mul(&h_plethysm(2, &IntSym::h(3, CAPS)).unwrap()).unwrap();
        assert_eq!(ch_of_tree(&three, CAPS).unwrap(), expected);
        // 7!/(1!·(3!)²·2!) = 70
        assert_eq!(three.dimension(), BigInt::from(70));
    }

    #[test]
    fn no_duplicates_and_duality() {
        for n in 2..=10 {
            for k in 0..=n - 2 {
                let trees = enumerate(n, k, false).unwrap();
                let mut sorted = trees.as_ref().clone();
                sorted.dedup();
                assert_eq!(sorted.len(), trees.len());
                assert_eq!(count_trees(n, k).unwrap(), count_trees(n, n - 2 - k).unwrap(), "n={n} k={k}");
            }
            assert!(enumerate(n, n - 1, false).unwrap().is_empty());
        }
    }

    #[test]
    fn total_dimension_of_five_points() {
        let total: BigInt = (0..=2).flat_map(|k| enumerate(4, k, false).unwrap().iter().map(|t| t.dimension()).collect::<Vec<_>>()).sum();
        assert_eq!(total, BigInt::from(7));
    }

    #[test]
    fn dimensions_match_rank() {
        for n in 2..=7 {
            for k in 0..=n - 2 {
                let dims: BigInt = enumerate(n, k, false).unwrap().iter().map(|t| t.dimension()).sum();
                let rk = rank_specialize(&oracle_q(n, k, CAPS).unwrap()).unwrap();
                assert_eq!(rk.get(n, 0) * BigRational::from_integer(factorial(n)), BigRational::from_integer(dims));
            }
        }
    }

    #[test]
    fn cayley() {
        assert_eq!(cayley_statistics(1), BigRational::one());
        assert_eq!(cayley_statistics(3), BigRational::from_integer(BigInt::from(16)));
        assert_eq!(cayley_statistics(5), BigRational::from_integer(BigInt::from(1296)));
    }

    #[test]
    fn json_dump() {
        let leaf = WeightedRootedTree::new(1, 3, vec![]).unwrap();
        let two = WeightedRootedTree::new(0, 2, vec![leaf]).unwrap();
        assert_eq!(serde_json::to_string(&two).unwrap(), "[0,2,[[1,3,[]]]]");
    }

    #[test]
    fn rejects_invalid_weights() {
        let leaf = WeightedRootedTree::new(1, 3, vec![]).unwrap();
        assert!(WeightedRootedTree::new(2, 2, vec![leaf]).is_err());
        let zero = WeightedRootedTree::new(0, 3, vec![]).unwrap();
        assert!(WeightedRootedTree::new(0, 2, vec![zero]).is_err());
    }
}
