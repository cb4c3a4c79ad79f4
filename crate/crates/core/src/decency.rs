//! Exceptional sets, `(ε, δ)`-decency and perfection of vertex sets, the
//! good-pair density lemma, and the search for decent fiber combinations.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::fibers::{apply_term, FiberTerm};
use crate::rational::{cmp_products, exceeds_fraction_of, ratio, Rational};
use crate::relation::Relation;
use crate::witness::Budget;

/// Frontier size above which the fiber-combination search samples.
pub const EXHAUSTIVE_FRONTIER: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecencyVerdict {
    pub set: BitSet,
    pub eps: Rational,
    pub delta: Rational,
    pub set_measure: Rational,
    /// `A^#_ε` on the opposite side.
    pub exceptional: BitSet,
    pub exceptional_measure: Rational,
    pub decent: bool,
}

fn check_unit(name: &str, r: &Rational) -> Result<()> {
    if r.numer() > r.denom() {
        return Err(Error::OutOfRange(alloc::format!("{name} = {r} exceeds 1")));
    }
    Ok(())
}

/// `A^#_ε = {b : μ(A ∩ E_b) > ε μ(A) ∧ μ(A ∖ E_b) > ε μ(A)}`, both strict.
pub fn exceptional_set(rel: &Relation, a: &BitSet, eps: &Rational) -> Result<BitSet> {
    if a.universe() != rel.left_len() {
        return Err(Error::Mismatch("set is not over the left side".into()));
    }
    let w = rel.left_weights();
    let total = w.mass(a);
    if total == 0 {
        return Err(Error::DegenerateSet);
    }
    let mut out = BitSet::new(rel.right_len());
    for b in 0..rel.right_len() {
        let inside = w.mass_and(a, rel.right_fiber(b));
        if exceeds_fraction_of(inside, eps, total) && exceeds_fraction_of(total - inside, eps, total) {
            out.insert(b);
        }
    }
    Ok(out)
}

/// `A` is `(ε, δ)`-decent when `μ(A^#_ε) ≤ δ`.
pub fn is_decent(rel: &Relation, a: &BitSet, eps: &Rational, delta: &Rational) -> Result<DecencyVerdict> {
    check_unit("ε", eps)?;
    check_unit("δ", delta)?;
    let exceptional = exceptional_set(rel, a, eps)?;
    let rw = rel.right_weights();
    let exceptional_measure = rw.measure(&exceptional);
    Ok(DecencyVerdict {
        set: a.clone(),
        eps: *eps,
        delta: *delta,
        set_measure: rel.left_weights().measure(a),
        decent: exceptional_measure <= *delta,
        exceptional,
        exceptional_measure,
    })
}

/// Perfect means `0`-decent: no positive-weight fiber splits `A` with positive
/// weight on both sides.
pub fn is_perfect(rel: &Relation, a: &BitSet) -> Result<DecencyVerdict> {
    is_decent(rel, a, &ratio(0, 1), &ratio(0, 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPairReport {
    pub eps: Rational,
    /// `A` against `(ε², ε μ(B))`.
    pub left: DecencyVerdict,
    /// `B` against `(ε, ε μ(A))`, using the fibers `E_a ⊆ R`.
    pub right: DecencyVerdict,
    pub hypotheses_hold: bool,
    pub density: Rational,
    /// Density in `[0, 3ε) ∪ (1 − 4ε, 1]`, or in `{0, 1}` when `ε = 0`.
    pub conclusion_holds: bool,
    /// Hypotheses hold but the conclusion fails.
    pub counterexample: bool,
}

/// `μ(E ∩ (A × B)) / μ(A × B)`.
pub fn pair_density(rel: &Relation, a: &BitSet, b: &BitSet) -> Result<Rational> {
    let (lw, rw) = (rel.left_weights(), rel.right_weights());
    let (ma, mb) = (lw.mass(a), rw.mass(b));
    if ma == 0 || mb == 0 {
        return Err(Error::DegenerateSet);
    }
    let edges: u128 = a.iter().map(|x| lw.weight(x) * rw.mass_and(rel.left_fiber(x), b)).sum();
    Ok(Rational::new(edges, ma * mb))
}

/// Checks the hypotheses and the conclusion of the good-pair density lemma.
pub fn check_good_pair(rel: &Relation, a: &BitSet, b: &BitSet, eps: &Rational) -> Result<GoodPairReport> {
    if *eps >= ratio(1, 2) {
        return Err(Error::OutOfRange(alloc::format!("ε = {eps} must be below 1/2")));
    }
    if b.universe() != rel.right_len() {
        return Err(Error::Mismatch("second set is not over the right side".into()));
    }
    let mu_a = rel.left_weights().measure(a);
    let mu_b = rel.right_weights().measure(b);
    let left = is_decent(rel, a, &(eps * eps), &(eps * mu_b))?;
    let right = is_decent(&rel.transpose(), b, eps, &(eps * mu_a))?;
    let density = pair_density(rel, a, b)?;
    let conclusion_holds = if *eps.numer() == 0 {
        *density.numer() == 0 || density == ratio(1, 1)
    } else {
        density < ratio(3, 1) * eps || (ratio(4, 1) * eps >= ratio(1, 1) || density > ratio(1, 1) - ratio(4, 1) * eps)
    };
    let hypotheses_hold = left.decent && right.decent;
    Ok(GoodPairReport {
        eps: *eps,
        left,
        right,
        hypotheses_hold,
        density,
        conclusion_holds,
        counterexample: hypotheses_hold && !conclusion_holds,
    })
}

/// Parameters of [`search_decent_set`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecentSearch {
    pub depth: usize,
    pub eps: Rational,
    pub delta: Rational,
    /// Defaults to `δ · μ(U)`.
    pub min_measure: Option<Rational>,
    pub seed: u64,
    pub frontier_cap: usize,
}

impl DecentSearch {
    pub fn new(depth: usize, eps: Rational, delta: Rational) -> Self {
        DecentSearch { depth, eps, delta, min_measure: None, seed: 0, frontier_cap: EXHAUSTIVE_FRONTIER }
    }
}

/// A qualifying fiber combination and its verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecentCandidate {
    pub terms: Vec<FiberTerm>,
    pub verdict: DecencyVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecentSearchOutcome {
    /// Qualifiers in search order: by depth, then lexicographically by terms.
    pub found: Vec<DecentCandidate>,
    /// Whether some frontier was sampled down to `frontier_cap`.
    pub sampled: bool,
    pub seed: u64,
}

fn run_search(
    rel: &Relation,
    u: &BitSet,
    cfg: &DecentSearch,
    first_only: bool,
    budget: &mut Budget,
) -> Result<DecentSearchOutcome> {
    check_unit("ε", &cfg.eps)?;
    check_unit("δ", &cfg.delta)?;
    let w = rel.left_weights();
    let mu_u = w.mass(u);
    if mu_u == 0 {
        return Err(Error::DegenerateSet);
    }
    let min = cfg.min_measure.unwrap_or_else(|| cfg.delta * Rational::new(mu_u, w.total()));
    // μ(S) ≥ min  ⟺  mass · den ≥ num · total
    let big_enough =
        |mass: u128| mass > 0 && cmp_products(mass, *min.denom(), *min.numer(), w.total()) != core::cmp::Ordering::Less;
    let mut out = DecentSearchOutcome { found: Vec::new(), sampled: false, seed: cfg.seed };
    let mut seen: BTreeSet<BitSet> = BTreeSet::new();
    seen.insert(u.clone());
    let mut level: Vec<(Vec<FiberTerm>, BitSet)> =
        if big_enough(mu_u) { alloc::vec![(Vec::new(), u.clone())] } else { Vec::new() };
    for depth in 0..=cfg.depth {
        for (terms, set) in &level {
            let params: Vec<usize> = terms.iter().map(|t| t.param).collect();
            budget.charge(rel.right_len() as u64, &params)?;
            let verdict = is_decent(rel, set, &cfg.eps, &cfg.delta)?;
            if verdict.decent {
                out.found.push(DecentCandidate { terms: terms.clone(), verdict });
                if first_only {
                    return Ok(out);
                }
            }
        }
        if depth == cfg.depth {
            break;
        }
        let mut next = Vec::new();
        for (terms, set) in &level {
            let params: Vec<usize> = terms.iter().map(|t| t.param).collect();
            budget.charge(rel.right_len() as u64, &params)?;
            for param in 0..rel.right_len() {
                for sign in [false, true] {
                    let t = FiberTerm { param, sign };
                    let s = apply_term(rel, set, t);
                    if !big_enough(w.mass(&s)) || seen.contains(&s) {
                        continue;
                    }
                    seen.insert(s.clone());
                    let mut terms = terms.clone();
                    terms.push(t);
                    next.push((terms, s));
                }
            }
        }
        if next.len() > cfg.frontier_cap {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((depth as u64 + 1) << 32));
            let mut keep = rand::seq::index::sample(&mut rng, next.len(), cfg.frontier_cap).into_vec();
            keep.sort_unstable();
            next = keep.into_iter().map(|i| core::mem::take(&mut next[i])).collect();
            out.sampled = true;
        }
        level = next;
    }
    Ok(out)
}

/// The first fiber combination (by depth, then lexicographically) of depth at
/// most `cfg.depth` whose realized subset `S ⊆ U` has `μ(S) ≥ min_measure` and is
/// `(ε, δ)`-decent. The empty combination realizes `U`. Distinct realized sets
/// are explored once; an oversized frontier is sampled with `cfg.seed`.
pub fn search_decent_set(
    rel: &Relation,
    u: &BitSet,
    cfg: &DecentSearch,
    budget: &mut Budget,
) -> Result<(Option<DecentCandidate>, DecentSearchOutcome)> {
    let mut out = run_search(rel, u, cfg, true, budget)?;
    let first = out.found.pop();
    Ok((first, out))
}

/// Every qualifier reached by the search, in search order.
pub fn decent_candidates(rel: &Relation, u: &BitSet, cfg: &DecentSearch, budget: &mut Budget) -> Result<DecentSearchOutcome> {
    run_search(rel, u, cfg, false, budget)
}
