use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::budget::Budget;
use super::TreeWitness;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::relation::Relation;

/// Outcome of a `d`-stability check; unstable verdicts carry their tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub d: usize,
    pub stable: bool,
    pub witness: Option<TreeWitness>,
}

#[derive(Clone, Copy)]
struct Known {
    /// Largest height proven to exist.
    ok: Option<usize>,
    /// Smallest height proven impossible.
    fail: usize,
}

pub(crate) struct TreeSearch<'a> {
    rel: &'a Relation,
    memo: BTreeMap<BitSet, Known>,
    budget: &'a mut Budget,
    stack: Vec<usize>,
}

impl<'a> TreeSearch<'a> {
    pub(crate) fn new(rel: &'a Relation, budget: &'a mut Budget) -> Self {
        TreeSearch { rel, memo: BTreeMap::new(), budget, stack: Vec::new() }
    }

    /// Is there a tree of height `h` with all leaves in `u`?
    pub(crate) fn exists(&mut self, u: &BitSet, h: usize) -> Result<bool> {
        if u.is_empty() {
            return Ok(false);
        }
        if h == 0 {
            return Ok(true);
        }
        // leaves of distinct branches are distinct
        if h >= usize::BITS as usize - 1 || u.count() < 1 << h {
            return Ok(false);
        }
        if let Some(k) = self.memo.get(u) {
            if k.ok.is_some_and(|ok| ok >= h) {
                return Ok(true);
            }
            if k.fail <= h {
                return Ok(false);
            }
        }
        let found = self.split_point(u, h)?.is_some();
        let entry = self.memo.entry(u.clone()).or_insert(Known { ok: None, fail: usize::MAX });
        if found {
            entry.ok = Some(entry.ok.map_or(h, |o| o.max(h)));
        } else {
            entry.fail = entry.fail.min(h);
        }
        Ok(found)
    }

    /// Least `b` such that both `u ∩ E_b` and `u ∖ E_b` carry trees of height `h − 1`.
    fn split_point(&mut self, u: &BitSet, h: usize) -> Result<Option<usize>> {
        let mut tried = BTreeSet::new();
        for b in 0..self.rel.right_len() {
            self.budget.charge(1, &self.stack)?;
            let one = u.and(self.rel.right_fiber(b));
            if one.is_empty() || one == *u {
                continue;
            }
            let zero = u.and_not(&one);
            let key = if one < zero { one.clone() } else { zero.clone() };
            if !tried.insert(key) {
                continue;
            }
            self.stack.push(b);
            let (small, large) = if one.count() <= zero.count() { (&one, &zero) } else { (&zero, &one) };
            let ok = self.exists(small, h - 1)? && self.exists(large, h - 1)?;
            self.stack.pop();
            if ok {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }

    /// Builds the least tree of height `h` inside `u`; `exists(u, h)` must hold.
    pub(crate) fn build(&mut self, u: &BitSet, h: usize) -> Result<TreeWitness> {
        if h == 0 {
            let a = u.first().ok_or(Error::DegenerateSet)?;
            return Ok(TreeWitness { height: 0, leaves: vec![a], internal: vec![] });
        }
        let b = self.split_point(u, h)?.ok_or_else(|| Error::InvalidWitness("no split point".into()))?;
        let one = u.and(self.rel.right_fiber(b));
        let zero = u.and_not(&one);
        let t0 = self.build(&zero, h - 1)?;
        let t1 = self.build(&one, h - 1)?;
        let mut internal = vec![b];
        for level in 0..h - 1 {
            let range = (1usize << level) - 1..(1usize << (level + 1)) - 1;
            internal.extend_from_slice(&t0.internal[range.clone()]);
            internal.extend_from_slice(&t1.internal[range]);
        }
        let mut leaves = t0.leaves;
        leaves.extend(t1.leaves);
        Ok(TreeWitness { height: h, leaves, internal })
    }
}

fn check_subset(rel: &Relation, u: Option<&BitSet>) -> Result<BitSet> {
    match u {
        None => Ok(rel.full_left()),
        Some(u) if u.universe() == rel.left_len() => Ok(u.clone()),
        Some(_) => Err(Error::Mismatch("leaf set is not a subset of the left side".into())),
    }
}

/// Least tree of height `d` with leaves in `u` (default: the whole left side).
pub fn find_tree(rel: &Relation, d: usize, u: Option<&BitSet>, budget: &mut Budget) -> Result<Option<TreeWitness>> {
    if d == 0 {
        return Err(Error::OutOfRange("tree height must be at least 1".into()));
    }
    let u = check_subset(rel, u)?;
    let mut s = TreeSearch::new(rel, budget);
    if !s.exists(&u, d)? {
        return Ok(None);
    }
    s.build(&u, d).map(Some)
}

/// Largest `h ≤ cap` with a tree of height `h` in `u`, or `None` when `u` is empty.
pub fn tree_rank(rel: &Relation, u: Option<&BitSet>, cap: usize, budget: &mut Budget) -> Result<Option<(usize, TreeWitness)>> {
    let u = check_subset(rel, u)?;
    let mut s = TreeSearch::new(rel, budget);
    if u.is_empty() {
        return Ok(None);
    }
    let mut h = 0;
    while h < cap && s.exists(&u, h + 1)? {
        h += 1;
    }
    Ok(Some((h, s.build(&u, h)?)))
}

/// `d`-stable means no tree of height `d`.
pub fn is_d_stable(rel: &Relation, d: usize, budget: &mut Budget) -> Result<StabilityVerdict> {
    let witness = find_tree(rel, d, None, budget)?;
    Ok(StabilityVerdict { d, stable: witness.is_none(), witness })
}
