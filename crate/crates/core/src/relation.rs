use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::measure::SideWeights;

/// A materialized weighted binary relation `E ⊆ L × R`.
///
/// Both fiber directions are kept: `right_fiber(b) = E_b ⊆ L` and
/// `left_fiber(a) = E_a ⊆ R`.
#[derive(Clone, Debug)]
pub struct Relation {
    by_right: Vec<BitSet>,
    by_left: Vec<BitSet>,
    left_w: SideWeights,
    right_w: SideWeights,
}

impl Relation {
    pub fn from_fn<F: FnMut(usize, usize) -> bool>(left: usize, right: usize, mut f: F) -> Self {
        let mut by_right = alloc::vec![BitSet::new(left); right];
        let mut by_left = alloc::vec![BitSet::new(right); left];
        for (a, row) in by_left.iter_mut().enumerate() {
            for (b, col) in by_right.iter_mut().enumerate() {
                if f(a, b) {
                    row.insert(b);
                    col.insert(a);
                }
            }
        }
        Relation {
            by_right,
            by_left,
            left_w: SideWeights::uniform(left),
            right_w: SideWeights::uniform(right),
        }
    }

    pub fn from_pairs(left: usize, right: usize, pairs: &[(usize, usize)]) -> Self {
        let set: BitSet = BitSet::from_indices(left * right, pairs.iter().map(|&(a, b)| a * right + b));
        Self::from_fn(left, right, |a, b| set.contains(a * right + b))
    }

    pub fn with_weights(mut self, left_w: SideWeights, right_w: SideWeights) -> Result<Self> {
        if left_w.len() != self.left_len() || right_w.len() != self.right_len() {
            return Err(Error::Mismatch("side weights do not match relation".into()));
        }
        self.left_w = left_w;
        self.right_w = right_w;
        Ok(self)
    }

    pub fn left_len(&self) -> usize {
        self.by_left.len()
    }

    pub fn right_len(&self) -> usize {
        self.by_right.len()
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.by_left[a].contains(b)
    }

    /// `E_b ⊆ L`.
    #[inline]
    pub fn right_fiber(&self, b: usize) -> &BitSet {
        &self.by_right[b]
    }

    /// `E_a ⊆ R`.
    #[inline]
    pub fn left_fiber(&self, a: usize) -> &BitSet {
        &self.by_left[a]
    }

    pub fn left_weights(&self) -> &SideWeights {
        &self.left_w
    }

    pub fn right_weights(&self) -> &SideWeights {
        &self.right_w
    }

    pub fn full_left(&self) -> BitSet {
        BitSet::full(self.left_len())
    }

    pub fn full_right(&self) -> BitSet {
        BitSet::full(self.right_len())
    }

    pub fn edge_count(&self) -> usize {
        self.by_left.iter().map(BitSet::count).sum()
    }

    /// The opposite relation `E* ⊆ R × L`.
    pub fn transpose(&self) -> Relation {
        Relation {
            by_right: self.by_left.clone(),
            by_left: self.by_right.clone(),
            left_w: self.right_w.clone(),
            right_w: self.left_w.clone(),
        }
    }

    /// Relation induced on the listed left and right elements (in the given order).
    pub fn restrict(&self, left: &[usize], right: &[usize]) -> Relation {
        let r = Relation::from_fn(left.len(), right.len(), |a, b| self.contains(left[a], right[b]));
        Relation {
            left_w: self.left_w.restricted_to(left),
            right_w: self.right_w.restricted_to(right),
            ..r
        }
    }
}
