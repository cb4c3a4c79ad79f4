//! Ladder and tree witnesses: search, validation, the Hodges conversions and
//! stability profiles.

mod budget;
mod hodges;
mod ladder;
mod profile;
mod tree;

pub use budget::{Budget, DEFAULT_BUDGET};
pub use hodges::{ladder_to_tree, tree_to_ladder};
pub use ladder::{find_ladder, find_ladder_in, ladder_cells, find_mu_ladder, max_ladder_height, MuLadderWitness};
pub use profile::{profile_directions, profile_entry, stability_profile, Direction, ProfileEntry, StabilityProfile, StabilityValue};
pub use tree::{find_tree, is_d_stable, tree_rank, StabilityVerdict};

use alloc::vec::Vec;

use crate::relation::Relation;

/// `(a_i, b_j) ∈ E ⟺ i ≤ j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LadderWitness {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl LadderWitness {
    pub fn height(&self) -> usize {
        self.left.len()
    }

    pub fn validate(&self, rel: &Relation) -> bool {
        validate_ladder(rel, &self.left, &self.right)
    }
}

/// A tree of height `d`. Leaf `σ ∈ 2^d` sits at index `Σ σ(i) 2^{d−1−i}`;
/// internal node `τ ∈ 2^ℓ` at index `2^ℓ − 1 + value(τ)`.
/// Invariant: `(a_σ, b_{σ|i}) ∈ E ⟺ σ(i) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeWitness {
    pub height: usize,
    pub leaves: Vec<usize>,
    pub internal: Vec<usize>,
}

impl TreeWitness {
    /// Index of the internal node `σ|i` for the leaf `σ`.
    #[inline]
    pub fn node_above(height: usize, leaf: usize, i: usize) -> usize {
        (1usize << i) - 1 + (leaf >> (height - i))
    }

    pub fn validate(&self, rel: &Relation) -> bool {
        let d = self.height;
        if d >= usize::BITS as usize - 1 || self.leaves.len() != 1 << d || self.internal.len() != (1 << d) - 1 {
            return false;
        }
        let in_range = self.leaves.iter().all(|&a| a < rel.left_len())
            && self.internal.iter().all(|&b| b < rel.right_len());
        in_range
            && self.leaves.iter().enumerate().all(|(s, &a)| {
                (0..d).all(|i| {
                    let bit = (s >> (d - 1 - i)) & 1 == 1;
                    rel.contains(a, self.internal[Self::node_above(d, s, i)]) == bit
                })
            })
    }
}

/// Definition recheck of the ladder invariant.
pub fn validate_ladder(rel: &Relation, left: &[usize], right: &[usize]) -> bool {
    left.len() == right.len()
        && !left.is_empty()
        && left.iter().all(|&a| a < rel.left_len())
        && right.iter().all(|&b| b < rel.right_len())
        && left
            .iter()
            .enumerate()
            .all(|(i, &a)| right.iter().enumerate().all(|(j, &b)| rel.contains(a, b) == (i <= j)))
}
