use alloc::vec::Vec;

use super::budget::Budget;
use super::ladder::find_ladder_in;
use super::{LadderWitness, TreeWitness};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::relation::Relation;

/// Turns a ladder of height `2^{d+1}` into a tree of height `d + 1` built from
/// its elements.
///
/// Leaves are ordered so that the 1-branch of every node comes first: leaf `σ`
/// takes `a_{f(σ)}` with `f(σ) = Σ (1 − σ(i)) 2^{D−1−i}`, and node `τ` takes
/// `b_{g(τ)}` with `g(τ)` the last index of the block of leaves below `τ⌢1`.
/// Then `f(σ) ≤ g(σ|i)` holds exactly when `σ(i) = 1`.
pub fn ladder_to_tree(w: &LadderWitness) -> Result<TreeWitness> {
    let n = w.height();
    if n < 2 || !n.is_power_of_two() || w.right.len() != n {
        return Err(Error::BadHeight { expected: n.next_power_of_two().max(2), got: n });
    }
    let big_d = n.trailing_zeros() as usize;
    let leaves: Vec<usize> = (0..n).map(|s| w.left[n - 1 - s]).collect();
    let mut internal = Vec::with_capacity(n - 1);
    for level in 0..big_d {
        let block = n >> level;
        for v in 0..1usize << level {
            let start = ((1usize << level) - 1 - v) * block;
            internal.push(w.right[start + block / 2 - 1]);
        }
    }
    Ok(TreeWitness { height: big_d, leaves, internal })
}

/// Extracts a ladder of height `d` from a tree of height `2^{d+1} − 2`, by
/// exhaustive search on the relation induced on the tree's own elements.
pub fn tree_to_ladder(rel: &Relation, w: &TreeWitness, budget: &mut Budget) -> Result<LadderWitness> {
    let h = w.height;
    let d = (1..usize::BITS as usize - 2).find(|&d| (1usize << (d + 1)) - 2 == h);
    let Some(d) = d else {
        return Err(Error::BadHeight { expected: ((h + 2).next_power_of_two()).max(4) - 2, got: h });
    };
    if !w.validate(rel) {
        return Err(Error::InvalidWitness("tree does not satisfy its invariant".into()));
    }
    let left = BitSet::from_indices(rel.left_len(), w.leaves.iter().copied());
    let right = BitSet::from_indices(rel.right_len(), w.internal.iter().copied());
    find_ladder_in(rel, d, Some(&left), Some(&right), budget)?
        .ok_or_else(|| Error::InvalidWitness("no ladder among the tree's elements".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::half_graph;
    use crate::view::BinaryView;
    use crate::witness::find_ladder;

    #[test]
    fn half_graph_conversion() {
        let h = half_graph(8).unwrap();
        let rel = BinaryView::new(&h, &[0]).unwrap().relation();
        let l = find_ladder(&rel, 4, &mut Budget::default()).unwrap().unwrap();
        let t = ladder_to_tree(&l).unwrap();
        assert_eq!(t.height, 2);
        assert!(t.validate(&rel));
        let l8 = LadderWitness { left: (0..8).collect(), right: (0..8).collect() };
        let id = Relation::from_fn(8, 8, |a, b| a <= b);
        let t = ladder_to_tree(&l8).unwrap();
        assert_eq!(t.height, 3);
        assert!(t.validate(&id));
    }

    #[test]
    fn bad_heights() {
        let l = LadderWitness { left: vec![0, 1, 2], right: vec![0, 1, 2] };
        assert!(matches!(ladder_to_tree(&l), Err(Error::BadHeight { got: 3, .. })));
        let rel = Relation::from_fn(4, 4, |a, b| a <= b);
        let t = TreeWitness { height: 3, leaves: vec![0; 8], internal: vec![0; 7] };
        assert!(matches!(tree_to_ladder(&rel, &t, &mut Budget::default()), Err(Error::BadHeight { .. })));
    }

    #[test]
    fn tree_of_height_two_yields_ladder() {
        let rel = Relation::from_fn(4, 4, |a, b| a <= b);
        let l = LadderWitness { left: (0..4).collect(), right: (0..4).collect() };
        let t = ladder_to_tree(&l).unwrap();
        let back = tree_to_ladder(&rel, &t, &mut Budget::default()).unwrap();
        assert_eq!(back.height(), 1);
        assert!(back.validate(&rel));
    }
}
