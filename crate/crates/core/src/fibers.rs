use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::error::Result;
use crate::hypergraph::PartiteHypergraph;
use crate::relation::Relation;
use crate::view::BinaryView;

/// One signed fiber `E^sign_b`: `sign = true` selects `E_b`, `false` its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiberTerm {
    /// Rank of the parameter on the opposite side of the view.
    pub param: usize,
    pub sign: bool,
}

/// An intersection of signed fibers, realized on the side spanned by `left`.
/// The empty combination realizes the whole side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FiberCombination {
    pub left: Vec<usize>,
    pub terms: Vec<FiberTerm>,
}

impl FiberCombination {
    pub fn new(left: Vec<usize>, terms: Vec<FiberTerm>) -> Self {
        FiberCombination { left, terms }
    }

    pub fn depth(&self) -> usize {
        self.terms.len()
    }

    /// `U ∩ ⋂ E^{sign}_{param}` over the terms.
    pub fn realize_in(&self, rel: &Relation, within: &BitSet) -> BitSet {
        self.terms.iter().fold(within.clone(), |s, t| apply_term(rel, &s, *t))
    }

    pub fn realize(&self, rel: &Relation) -> BitSet {
        self.realize_in(rel, &rel.full_left())
    }
}

#[inline]
pub(crate) fn apply_term(rel: &Relation, s: &BitSet, t: FiberTerm) -> BitSet {
    if t.sign {
        s.and(rel.right_fiber(t.param))
    } else {
        s.and_not(rel.right_fiber(t.param))
    }
}

/// Left-side elements (ranks in the view on `comb.left`) of the realized set.
pub fn fiber_combination_set(hg: &PartiteHypergraph, comb: &FiberCombination) -> Result<Vec<usize>> {
    let view = BinaryView::new(hg, &comb.left)?;
    let rel = view.relation();
    if let Some(t) = comb.terms.iter().find(|t| t.param >= rel.right_len()) {
        return Err(crate::Error::OutOfRange(alloc::format!("fiber parameter {}", t.param)));
    }
    Ok(comb.realize(&rel).to_vec())
}
