use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::partition::{PairPartition, VertexPartition};
use super::slicewise::verify_slicewise_regularity;
use super::symmetrize::local_symmetrize;
use super::verify::RegularityReport;
use crate::bitset::BitSet;
use crate::decency::{decent_candidates, DecentSearch, EXHAUSTIVE_FRONTIER};
use crate::error::{Error, Result};
use crate::fibers::FiberCombination;
use crate::hypergraph::PartiteHypergraph;
use crate::measure::WeightedMeasure;
use crate::rational::{at_most_fraction_of, ratio, Rational};
use crate::relation::Relation;
use crate::view::BinaryView;
use crate::witness::Budget;

/// When greedy extraction stops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StopRule {
    /// Once the remainder has measure at most `r`.
    RemainderAtMost(Rational),
    /// Once the remainder has measure at most `r · μ(A_1)`.
    RelativeToFirst(Rational),
    /// Only when nothing is left or no decent set is found.
    Exhaust,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecentPartitionConfig {
    pub eps: Rational,
    pub delta: Rational,
    pub depth: usize,
    pub stop: StopRule,
    /// Smallest class measure accepted; defaults to `δ · μ(remainder)` each round.
    pub min_measure: Option<Rational>,
    pub seed: u64,
    pub frontier_cap: usize,
}

impl DecentPartitionConfig {
    /// Stops once the remainder is at most `ε`.
    pub fn new(eps: Rational, delta: Rational, depth: usize) -> Self {
        DecentPartitionConfig {
            eps,
            delta,
            depth,
            stop: StopRule::RemainderAtMost(eps),
            min_measure: None,
            seed: 0,
            frontier_cap: EXHAUSTIVE_FRONTIER,
        }
    }

    fn search(&self) -> DecentSearch {
        DecentSearch {
            depth: self.depth,
            eps: self.eps,
            delta: self.delta,
            min_measure: self.min_measure,
            seed: self.seed,
            frontier_cap: self.frontier_cap,
        }
    }
}

fn done(stop: &StopRule, rest: u128, first: Option<u128>, total: u128) -> bool {
    if rest == 0 {
        return true;
    }
    match stop {
        StopRule::RemainderAtMost(r) => at_most_fraction_of(rest, r, total),
        StopRule::RelativeToFirst(r) => first.is_some_and(|m| at_most_fraction_of(rest, r, m)),
        StopRule::Exhaust => false,
    }
}

/// Greedy extraction on the left side of `rel`: each round collects the decent
/// fiber combinations inside the remainder, keeps the first whose measure is at
/// least half the best one, and removes it. Whatever is left becomes class 0.
///
/// Provenance terms are realized inside the remainder of their round.
fn partition_left(
    rel: &Relation,
    part: usize,
    coords: &[usize],
    cfg: &DecentPartitionConfig,
    budget: &mut Budget,
) -> Result<VertexPartition> {
    let w = rel.left_weights();
    let total = w.total();
    let search = cfg.search();
    let mut rest = rel.full_left();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut provenance = vec![None];
    let mut first = None;
    loop {
        let mass = w.mass(&rest);
        if done(&cfg.stop, mass, first, total) || mass == 0 {
            break;
        }
        let found = decent_candidates(rel, &rest, &search, budget)?.found;
        let Some(best) = found.iter().map(|c| w.mass(&c.verdict.set)).max() else {
            break;
        };
        let pick = found.into_iter().find(|c| 2 * w.mass(&c.verdict.set) >= best).expect("best is attained");
        let set = pick.verdict.set;
        first.get_or_insert(w.mass(&set));
        rest = rest.and_not(&set);
        classes.push(set.to_vec());
        provenance.push(Some(FiberCombination::new(coords.to_vec(), pick.terms)));
    }
    let mut p = VertexPartition::from_classes(part, rel.left_len(), &classes)?;
    p.provenance = Some(provenance);
    Ok(p)
}

/// Partitions the left side of `view` into decent classes plus an error class.
/// The result is labelled with the smallest left coordinate.
pub fn build_decent_partition(
    view: &BinaryView<'_>,
    mu: &WeightedMeasure,
    cfg: &DecentPartitionConfig,
    budget: &mut Budget,
) -> Result<VertexPartition> {
    let rel = view.weighted_relation(mu)?;
    partition_left(&rel, view.left_coords()[0], view.left_coords(), cfg, budget)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedPartitionConfig {
    /// Error-class ratio for `Z`: extraction stops once the remainder is at most `ε μ(Z_1)`.
    pub eps: Rational,
    /// Decency parameters `(δ, δ)` for every extraction.
    pub delta: Rational,
    pub depth: usize,
    pub seed: u64,
}

/// The slice chosen for one class of `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentativeNote {
    pub z_class: usize,
    pub z: usize,
    /// Share of the class weight whose slice equals `E_z`.
    pub share: Rational,
    /// Whether that share is at least 1/2.
    pub majority: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedPartition {
    /// Partitions of `X`, `Y`, `Z`.
    pub parts: Vec<VertexPartition>,
    pub representatives: Vec<RepresentativeNote>,
}

/// Partitions `Z` by decent sets of the `Z | XY` view, then partitions `X` and
/// `Y` by intersecting the decent partitions of one representative slice per
/// `Z` class. Representatives are the heaviest slice pattern of the class,
/// ties going to the smallest vertex.
pub fn build_mixed_partition(
    hg: &PartiteHypergraph,
    mu: &WeightedMeasure,
    cfg: &MixedPartitionConfig,
    budget: &mut Budget,
) -> Result<MixedPartition> {
    if hg.arity() != 3 {
        return Err(Error::Mismatch(format!("mixed partitions need arity 3, got {}", hg.arity())));
    }
    mu.check_sizes(hg.sizes())?;
    let zview = BinaryView::new(hg, &[2])?;
    let zrel = zview.weighted_relation(mu)?;
    let mut zcfg = DecentPartitionConfig::new(cfg.delta, cfg.delta, cfg.depth);
    zcfg.stop = StopRule::RelativeToFirst(cfg.eps);
    zcfg.seed = cfg.seed;
    let zpart = partition_left(&zrel, 2, &[2], &zcfg, budget)?;

    let mut slice_cfg = DecentPartitionConfig::new(cfg.delta, cfg.delta, cfg.depth);
    slice_cfg.stop = StopRule::Exhaust;
    slice_cfg.seed = cfg.seed;
    let zw = mu.part(2).numerators();
    let slice_mu = mu.without(&[2]);
    let mut x = VertexPartition::trivial(0, hg.sizes()[0]);
    let mut y = VertexPartition::trivial(1, hg.sizes()[1]);
    let mut notes = Vec::new();
    for (t, class) in zpart.classes().iter().enumerate().skip(1) {
        if class.is_empty() {
            continue;
        }
        let mut patterns: BTreeMap<&BitSet, (u128, usize)> = BTreeMap::new();
        for &z in class {
            let e = patterns.entry(zrel.left_fiber(z)).or_insert((0, z));
            e.0 += zw[z];
        }
        let class_w: u128 = class.iter().map(|&z| zw[z]).sum();
        let &(share_w, z) = patterns
            .values()
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
            .ok_or(Error::NoRepresentative(t))?;
        let share = if class_w == 0 { ratio(0, 1) } else { Rational::new(share_w, class_w) };
        notes.push(RepresentativeNote { z_class: t, z, share, majority: share >= ratio(1, 2) });

        let slice = hg.slice(&[(2, z)])?;
        let rel = BinaryView::new(&slice, &[0])?.weighted_relation(&slice_mu)?;
        x = x.intersect(&partition_left(&rel, 0, &[0], &slice_cfg, budget)?)?;
        y = y.intersect(&partition_left(&rel.transpose(), 1, &[1], &slice_cfg, budget)?)?;
    }
    let parts = vec![
        x.renumber_by_mass(mu.part(0)),
        y.renumber_by_mass(mu.part(1)),
        zpart.renumber_by_mass(mu.part(2)),
    ];
    Ok(MixedPartition { parts, representatives: notes })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicewiseConfig {
    /// Verification threshold.
    pub eps: Rational,
    /// Decency parameters of the first stage.
    pub delta: Rational,
    pub depth: usize,
    pub seed: u64,
    /// Fall back to singleton rectangles when the decent stages fail.
    pub allow_singletons: bool,
}

#[derive(Clone, Debug)]
pub struct SlicewiseOutcome {
    /// Pair partitions over `X × Y`, `X × Z`, `Y × Z`.
    pub pairs: Vec<PairPartition>,
    pub report: RegularityReport,
    /// `δ` used by the accepted stage; `None` for singletons.
    pub stage_delta: Option<Rational>,
    /// Reports of the stages that failed.
    pub rejected: Vec<RegularityReport>,
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn slice_partitions(
    hg: &PartiteHypergraph,
    mu: &WeightedMeasure,
    delta: &Rational,
    cfg: &SlicewiseConfig,
    budget: &mut Budget,
) -> Result<Vec<VertexPartition>> {
    let mut dcfg = DecentPartitionConfig::new(*delta, *delta, cfg.depth);
    dcfg.stop = StopRule::Exhaust;
    dcfg.seed = cfg.seed;
    let mut parts: Vec<VertexPartition> = (0..3).map(|p| VertexPartition::trivial(p, hg.sizes()[p])).collect();
    for q in 0..3 {
        let slice_mu = mu.without(&[q]);
        for v in 0..hg.sizes()[q] {
            let slice = hg.slice(&[(q, v)])?;
            let rel = BinaryView::new(&slice, &[0])?.weighted_relation(&slice_mu)?;
            let free: Vec<usize> = (0..3).filter(|&c| c != q).collect();
            let a = partition_left(&rel, free[0], &[free[0]], &dcfg, budget)?;
            let b = partition_left(&rel.transpose(), free[1], &[free[1]], &dcfg, budget)?;
            parts[free[0]] = parts[free[0]].intersect(&a)?;
            parts[free[1]] = parts[free[1]].intersect(&b)?;
        }
    }
    for &(p, q) in &PAIRS {
        let (np, nq) = (hg.sizes()[p], hg.sizes()[q]);
        let r = 3 - p - q ;
        let proj = Relation::from_fn(np, nq, |a, b| {
            (0..hg.sizes()[r]).any(|c| {
                let mut t = [0; 3];
                t[p] = a;
                t[q] = b;
                t[r] = c;
                hg.contains(&t)
            })
        });
        let Ok(sym) = local_symmetrize(&proj) else { continue };
        let lift = |part: usize, assignment: Vec<usize>| VertexPartition {
            part,
            num_classes: sym.components.len() + 1,
            assignment: assignment.into_iter().map(|c| c + 1).collect(),
            provenance: None,
        };
        parts[p] = parts[p].intersect(&lift(p, sym.left_assignment.clone()))?;
        parts[q] = parts[q].intersect(&lift(q, sym.right_assignment.clone()))?;
    }
    Ok(parts.into_iter().zip(0..).map(|(p, i)| p.renumber_by_mass(mu.part(i))).collect())
}

fn pairs_of(parts: &[VertexPartition]) -> Vec<PairPartition> {
    PAIRS.iter().map(|&(p, q)| PairPartition::from_rectangles(&parts[p], &parts[q])).collect()
}

/// Heuristic rectangle pair partitions for a ternary hypergraph. Each part is
/// partitioned by intersecting the decent partitions of every slice through
/// it, refined by the local symmetrizations of the pairwise projections, and
/// the products are checked with slice-wise verification at `ε`. Stages use
/// decency `(δ, δ)`, then perfection, then singletons if allowed.
pub fn build_slicewise_pair_partitions(
    hg: &PartiteHypergraph,
    mu: &WeightedMeasure,
    cfg: &SlicewiseConfig,
    budget: &mut Budget,
) -> Result<SlicewiseOutcome> {
    if hg.arity() != 3 {
        return Err(Error::Mismatch(format!("slice-wise partitions need arity 3, got {}", hg.arity())));
    }
    mu.check_sizes(hg.sizes())?;
    let mut rejected = Vec::new();
    let mut stages = vec![cfg.delta];
    if cfg.delta != ratio(0, 1) {
        stages.push(ratio(0, 1));
    }
    for delta in stages {
        let parts = slice_partitions(hg, mu, &delta, cfg, budget)?;
        let pairs = pairs_of(&parts);
        let report = verify_slicewise_regularity(hg, &pairs, mu, &cfg.eps)?;
        if report.verdict {
            return Ok(SlicewiseOutcome { pairs, report, stage_delta: Some(delta), rejected });
        }
        rejected.push(report);
    }
    if cfg.allow_singletons {
        let parts: Vec<VertexPartition> = (0..3).map(|p| VertexPartition::singletons(p, hg.sizes()[p])).collect();
        let pairs = pairs_of(&parts);
        let report = verify_slicewise_regularity(hg, &pairs, mu, &cfg.eps)?;
        if report.verdict {
            return Ok(SlicewiseOutcome { pairs, report, stage_delta: None, rejected });
        }
        rejected.push(report);
    }
    let worst = rejected
        .iter()
        .map(|r| format!("{} irregular of {} boxes", r.irregular.len(), r.boxes.len()))
        .collect::<Vec<_>>()
        .join(", ");
    Err(Error::HeuristicFailed(format!("no stage passed at ε = {}: {worst}", cfg.eps)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decency::is_decent;
    use crate::families::{half_graph, leq_eq_hypergraph, ternary_word_hypergraph};
    use crate::regularity::{verify_strong_stable_regularity, DecayFunction};

    #[test]
    fn half_graph_partition_is_decent() {
        let h = half_graph(16).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let view = BinaryView::new(&h, &[0]).unwrap();
        let cfg = DecentPartitionConfig::new(ratio(1, 4), ratio(1, 4), 3);
        let p = build_decent_partition(&view, &mu, &cfg, &mut Budget::default()).unwrap();
        let rel = view.relation();
        for c in p.classes().iter().skip(1).filter(|c| !c.is_empty()) {
            let s = BitSet::from_indices(16, c.iter().copied());
            assert!(is_decent(&rel, &s, &ratio(1, 4), &ratio(1, 4)).unwrap().decent);
        }
        assert!(Rational::new(p.error_class().len() as u128, 16) <= ratio(1, 4));
        let prov = p.provenance.as_ref().unwrap();
        assert_eq!(prov.len(), p.num_classes);
        assert!(prov[0].is_none());
    }

    #[test]
    fn empty_relation_is_one_class() {
        let h = PartiteHypergraph::new(&[3, 4], &[]).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let view = BinaryView::new(&h, &[0]).unwrap();
        let cfg = DecentPartitionConfig::new(ratio(1, 4), ratio(1, 4), 2);
        let p = build_decent_partition(&view, &mu, &cfg, &mut Budget::default()).unwrap();
        assert_eq!(p.assignment, vec![1, 1, 1]);
        assert_eq!(p.provenance.unwrap()[1].as_ref().unwrap().depth(), 0);
    }

    #[test]
    fn leq_eq_z_partition_is_decent() {
        let h = leq_eq_hypergraph(9).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let view = BinaryView::new(&h, &[2]).unwrap();
        let cfg = DecentPartitionConfig::new(ratio(1, 10), ratio(1, 10), 2);
        let p = build_decent_partition(&view, &mu, &cfg, &mut Budget::default()).unwrap();
        let rel = view.relation();
        for c in p.classes().iter().skip(1).filter(|c| !c.is_empty()) {
            let s = BitSet::from_indices(9, c.iter().copied());
            assert!(is_decent(&rel, &s, &ratio(1, 10), &ratio(1, 10)).unwrap().decent);
        }
    }

    #[test]
    fn mixed_partition_on_leq_eq() {
        let h = leq_eq_hypergraph(9).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let cfg = MixedPartitionConfig { eps: ratio(1, 2), delta: ratio(1, 10), depth: 2, seed: 0 };
        let out = build_mixed_partition(&h, &mu, &cfg, &mut Budget::default()).unwrap();
        let f = DecayFunction::constant(ratio(1, 10)).unwrap();
        let r = verify_strong_stable_regularity(&h, &out.parts, &mu, &ratio(1, 2), &f).unwrap();
        assert!(r.verdict);
        assert!(out.representatives.iter().all(|n| n.majority));
    }

    #[test]
    fn mixed_partition_of_empty_hypergraph() {
        let h = PartiteHypergraph::new(&[2, 3, 2], &[]).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let cfg = MixedPartitionConfig { eps: ratio(1, 2), delta: ratio(1, 10), depth: 1, seed: 0 };
        let out = build_mixed_partition(&h, &mu, &cfg, &mut Budget::default()).unwrap();
        for p in &out.parts {
            assert_eq!(p.nonempty_classes(), 1);
            assert!(!p.has_error());
        }
    }

    #[test]
    fn slicewise_examples() {
        let cfg = SlicewiseConfig { eps: ratio(1, 10), delta: ratio(1, 10), depth: 2, seed: 0, allow_singletons: true };
        let t = ternary_word_hypergraph(1).unwrap();
        let mu = WeightedMeasure::uniform(t.sizes());
        let out = build_slicewise_pair_partitions(&t, &mu, &cfg, &mut Budget::default()).unwrap();
        assert!(out.report.verdict);
        let h = leq_eq_hypergraph(4).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let out = build_slicewise_pair_partitions(&h, &mu, &cfg, &mut Budget::default()).unwrap();
        assert!(out.report.verdict);
        for p in &out.pairs {
            p.validate().unwrap();
        }
    }
}
