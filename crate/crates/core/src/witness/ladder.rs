use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::budget::Budget;
use super::LadderWitness;
use crate::bitset::BitSet;
use crate::error::Result;
use crate::rational::Rational;
use crate::relation::Relation;

const MEMO_CAP: usize = 1 << 18;

/// A μ-ladder: parameters `b̄` whose cells
/// `C_i = ⋂_{j≥i} E_{b_j} ∖ ⋃_{j<i} E_{b_j}` all have positive measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuLadderWitness {
    pub right: Vec<usize>,
    pub cells: Vec<Vec<usize>>,
    pub measures: Vec<Rational>,
}

impl MuLadderWitness {
    pub fn height(&self) -> usize {
        self.right.len()
    }

    /// Recomputes the cells from `b̄` and checks every measure is positive.
    pub fn validate(&self, rel: &Relation) -> bool {
        if self.right.is_empty() || self.right.iter().any(|&b| b >= rel.right_len()) {
            return false;
        }
        let cells = ladder_cells(rel, &self.right);
        cells.len() == self.cells.len()
            && cells.iter().zip(&self.cells).zip(&self.measures).all(|((c, listed), m)| {
                c.to_vec() == *listed && rel.left_weights().measure(c) == *m && *m.numer() > 0
            })
    }
}

/// The cells `C_i` of a parameter sequence, over the whole left side.
pub fn ladder_cells(rel: &Relation, right: &[usize]) -> Vec<BitSet> {
    (0..right.len())
        .map(|i| {
            let mut c = rel.full_left();
            for (j, &b) in right.iter().enumerate() {
                c = if j >= i { c.and(rel.right_fiber(b)) } else { c.and_not(rel.right_fiber(b)) };
            }
            c
        })
        .collect()
}

struct LadderSearch<'a> {
    rel: &'a Relation,
    d: usize,
    candidates: Vec<usize>,
    failed: BTreeSet<Vec<BitSet>>,
    budget: &'a mut Budget,
    stack: Vec<usize>,
}

impl LadderSearch<'_> {
    /// `cells[i]` holds the admissible `a_i` so far; `rest` the candidates for
    /// the rungs not yet opened.
    fn dfs(&mut self, cells: &[BitSet], rest: &BitSet) -> Result<Option<Vec<BitSet>>> {
        let t = cells.len();
        if t == self.d {
            return Ok(Some(cells.to_vec()));
        }
        if rest.count() < self.d - t {
            return Ok(None);
        }
        let mut key: Vec<BitSet> = cells.to_vec();
        key.push(rest.clone());
        if self.failed.contains(&key) {
            return Ok(None);
        }
        let active = cells.iter().fold(rest.clone(), |acc, c| acc.or(c));
        let mut tried = BTreeSet::new();
        for ci in 0..self.candidates.len() {
            let b = self.candidates[ci];
            self.budget.charge(1 + t as u64, &self.stack)?;
            let fb = self.rel.right_fiber(b);
            if !rest.intersects(fb) || !cells.iter().all(|c| c.intersects(fb)) {
                continue;
            }
            if !tried.insert(active.and(fb)) {
                continue;
            }
            let mut next: Vec<BitSet> = cells.iter().map(|c| c.and(fb)).collect();
            next.push(rest.and(fb));
            let next_rest = rest.and_not(fb);
            self.stack.push(b);
            if let Some(found) = self.dfs(&next, &next_rest)? {
                return Ok(Some(found));
            }
            self.stack.pop();
        }
        if self.failed.len() < MEMO_CAP {
            self.failed.insert(key);
        }
        Ok(None)
    }
}

/// Exhaustive ladder search restricted to the allowed elements on each side.
///
/// Returns the witness whose `b̄` is lexicographically least, with each `a_i`
/// the least element of its cell.
pub fn find_ladder_in(
    rel: &Relation,
    d: usize,
    left_allowed: Option<&BitSet>,
    right_allowed: Option<&BitSet>,
    budget: &mut Budget,
) -> Result<Option<LadderWitness>> {
    if d == 0 {
        return Err(crate::Error::OutOfRange("ladder height must be at least 1".into()));
    }
    let rest = left_allowed.cloned().unwrap_or_else(|| rel.full_left());
    let candidates: Vec<usize> =
        (0..rel.right_len()).filter(|&b| right_allowed.is_none_or(|r| r.contains(b))).collect();
    if candidates.len() < d {
        return Ok(None);
    }
    let mut search = LadderSearch { rel, d, candidates, failed: BTreeSet::new(), budget, stack: Vec::new() };
    Ok(search.dfs(&[], &rest)?.map(|cells| LadderWitness {
        left: cells.iter().map(|c| c.first().expect("cells are nonempty")).collect(),
        right: search.stack.clone(),
    }))
}

/// Least ladder of height `d`, if any.
pub fn find_ladder(rel: &Relation, d: usize, budget: &mut Budget) -> Result<Option<LadderWitness>> {
    find_ladder_in(rel, d, None, None, budget)
}

/// Largest `h ≤ cap` with a ladder of height `h`, and a witness for it when `h ≥ 1`.
pub fn max_ladder_height(rel: &Relation, cap: usize, budget: &mut Budget) -> Result<(usize, Option<LadderWitness>)> {
    let mut best = (0, None);
    for h in 1..=cap {
        match find_ladder(rel, h, budget)? {
            Some(w) => best = (h, Some(w)),
            None => break,
        }
    }
    Ok(best)
}

/// μ-ladder search: both sides are restricted to the support of their weights.
pub fn find_mu_ladder(rel: &Relation, d: usize, budget: &mut Budget) -> Result<Option<MuLadderWitness>> {
    let left = rel.left_weights().support();
    let right = rel.right_weights().support();
    let found = find_ladder_in(rel, d, Some(&left), Some(&right), budget)?;
    Ok(found.map(|w| {
        let cells = ladder_cells(rel, &w.right);
        MuLadderWitness {
            measures: cells.iter().map(|c| rel.left_weights().measure(c)).collect(),
            cells: cells.iter().map(BitSet::to_vec).collect(),
            right: w.right,
        }
    }))
}
