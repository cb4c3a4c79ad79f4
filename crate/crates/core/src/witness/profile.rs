use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::budget::Budget;
use super::ladder::max_ladder_height;
use super::tree::tree_rank;
use super::{LadderWitness, TreeWitness};
use crate::error::{Error, Result};
use crate::hypergraph::PartiteHypergraph;
use crate::relation::Relation;
use crate::view::BinaryView;

/// Which binary relations an entry of the profile ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// One flattening, with these coordinates on the left.
    Flattening { left: Vec<usize> },
    /// Every slice fixing `coord`; each slice is read with its lower remaining
    /// coordinate on the left.
    Slicing { coord: usize },
}

/// Least `d ≤ cap` such that no object of height `d` exists, or `None` when
/// objects of every height up to `cap` exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityValue {
    pub cap: usize,
    pub least_stable: Option<usize>,
}

impl StabilityValue {
    fn from_height(h: usize, cap: usize) -> Self {
        StabilityValue { cap, least_stable: (h < cap).then_some(h + 1) }
    }

    /// Is the relation `d`-stable in this sense?
    pub fn is_stable_at(&self, d: usize) -> Option<bool> {
        match self.least_stable {
            Some(s) => Some(d >= s),
            None if d <= self.cap => Some(false),
            None => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileEntry {
    pub direction: Direction,
    pub tree: Option<StabilityValue>,
    pub ladder: Option<StabilityValue>,
    /// Tallest tree found (height `least_stable − 1`, or `cap`).
    pub tree_witness: Option<TreeWitness>,
    pub ladder_witness: Option<LadderWitness>,
    /// For slicing entries, the slice that attains the tree value and the one
    /// that attains the ladder value.
    pub worst_tree_slice: Option<usize>,
    pub worst_ladder_slice: Option<usize>,
    /// Set when the budget ran out; the values are then absent.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityProfile {
    pub cap: usize,
    pub entries: Vec<ProfileEntry>,
}

impl StabilityProfile {
    pub fn entry(&self, direction: &Direction) -> Option<&ProfileEntry> {
        self.entries.iter().find(|e| e.direction == *direction)
    }
}

/// The six flattenings and three slicing directions of a ternary hypergraph.
pub fn profile_directions(k: usize) -> Vec<Direction> {
    let mut out = Vec::new();
    for mask in 1..(1usize << k) - 1 {
        out.push(Direction::Flattening { left: (0..k).filter(|&c| mask >> c & 1 == 1).collect() });
    }
    if k >= 3 {
        out.extend((0..k).map(|coord| Direction::Slicing { coord }));
    }
    out
}

struct Measured {
    tree_h: Option<(usize, TreeWitness)>,
    ladder_h: (usize, Option<LadderWitness>),
}

fn measure(rel: &Relation, cap: usize, budget: &mut Budget) -> Result<Measured> {
    Ok(Measured { tree_h: tree_rank(rel, None, cap, budget)?, ladder_h: max_ladder_height(rel, cap, budget)? })
}

fn entry_inner(hg: &PartiteHypergraph, direction: &Direction, cap: usize, budget: &mut Budget) -> Result<ProfileEntry> {
    let mut entry = ProfileEntry {
        direction: direction.clone(),
        tree: None,
        ladder: None,
        tree_witness: None,
        ladder_witness: None,
        worst_tree_slice: None,
        worst_ladder_slice: None,
        error: None,
    };
    match direction {
        Direction::Flattening { left } => {
            let rel = BinaryView::new(hg, left)?.relation();
            let m = measure(&rel, cap, budget)?;
            let (th, tw) = m.tree_h.expect("the left side of a view is nonempty");
            entry.tree = Some(StabilityValue::from_height(th, cap));
            entry.tree_witness = (th > 0).then_some(tw);
            entry.ladder = Some(StabilityValue::from_height(m.ladder_h.0, cap));
            entry.ladder_witness = m.ladder_h.1;
        }
        Direction::Slicing { coord } => {
            if *coord >= hg.arity() {
                return Err(Error::OutOfRange(alloc::format!("coordinate {coord}")));
            }
            let mut best_tree: Option<(usize, usize, TreeWitness)> = None;
            let mut best_ladder: Option<(usize, usize, Option<LadderWitness>)> = None;
            for v in 0..hg.sizes()[*coord] {
                let s = hg.slice(&[(*coord, v)])?;
                let rel = BinaryView::new(&s, &[0])?.relation();
                let m = measure(&rel, cap, budget)?;
                let (th, tw) = m.tree_h.expect("slices have a nonempty left side");
                if best_tree.as_ref().is_none_or(|b| th > b.0) {
                    best_tree = Some((th, v, tw));
                }
                if best_ladder.as_ref().is_none_or(|b| m.ladder_h.0 > b.0) {
                    best_ladder = Some((m.ladder_h.0, v, m.ladder_h.1));
                }
            }
            let (th, tv, tw) = best_tree.expect("parts are nonempty");
            let (lh, lv, lw) = best_ladder.expect("parts are nonempty");
            entry.tree = Some(StabilityValue::from_height(th, cap));
            entry.tree_witness = (th > 0).then_some(tw);
            entry.worst_tree_slice = Some(tv);
            entry.ladder = Some(StabilityValue::from_height(lh, cap));
            entry.ladder_witness = lw;
            entry.worst_ladder_slice = Some(lv);
        }
    }
    Ok(entry)
}

/// One profile entry with a fresh budget; running out of budget is recorded in
/// the entry rather than returned.
pub fn profile_entry(hg: &PartiteHypergraph, direction: &Direction, cap: usize, budget_limit: u64) -> Result<ProfileEntry> {
    let mut budget = Budget::new(budget_limit);
    match entry_inner(hg, direction, cap, &mut budget) {
        Err(e @ Error::BudgetExceeded(_)) => Ok(ProfileEntry {
            direction: direction.clone(),
            tree: None,
            ladder: None,
            tree_witness: None,
            ladder_witness: None,
            worst_tree_slice: None,
            worst_ladder_slice: None,
            error: Some(e.to_string()),
        }),
        other => other,
    }
}

/// Tree and ladder stability of every flattening and every slicing direction
/// of a ternary hypergraph, each capped at `cap`.
pub fn stability_profile(hg: &PartiteHypergraph, cap: usize, budget_limit: u64) -> Result<StabilityProfile> {
    if hg.arity() != 3 {
        return Err(Error::Mismatch(alloc::format!("stability profiles need arity 3, got {}", hg.arity())));
    }
    let entries = profile_directions(3)
        .iter()
        .map(|d| profile_entry(hg, d, cap, budget_limit))
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityProfile { cap, entries })
}
