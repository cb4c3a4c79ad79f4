use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::partition::{DecayFunction, VertexPartition};
use super::slicewise::SigmaSets;
use crate::bitset::BitSet;
use crate::boxes::BoxDensity;
use crate::decency::is_decent;
use crate::error::{Error, Result};
use crate::hypergraph::PartiteHypergraph;
use crate::measure::WeightedMeasure;
use crate::rational::{ratio, Rational};
use crate::view::BinaryView;

/// Which definition a report checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Stable,
    StrongStable,
    ApproxPerfect,
    Slicewise,
    StrongSlicewise,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Stable => "stable",
            Variant::StrongStable => "strong-stable",
            Variant::ApproxPerfect => "approx-perfect",
            Variant::Slicewise => "slicewise",
            Variant::StrongSlicewise => "strong-slicewise",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        [Variant::Stable, Variant::StrongStable, Variant::ApproxPerfect, Variant::Slicewise, Variant::StrongSlicewise]
            .into_iter()
            .find(|v| v.name() == s)
    }
}

/// `d ∈ [0, tol) ∪ (1 − tol, 1]`.
pub fn in_regular_interval(d: &Rational, tol: &Rational) -> bool {
    *tol >= ratio(1, 1) || d < tol || *d > ratio(1, 1) - tol
}

/// One box (or, for the slice-wise variant, one join of two pair classes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxReport {
    /// Class index per part, or the two pair-class indices of a join.
    pub classes: Vec<usize>,
    /// For joins, the indices of the two pair partitions involved.
    pub join: Option<(usize, usize)>,
    pub measure: Rational,
    pub edge_measure: Rational,
    pub density: Rational,
    pub degenerate: bool,
    pub regular: bool,
}

/// A size condition on an error class or an uncovered region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorCheck {
    /// Part index, or pair index for the slice-wise variants.
    pub index: usize,
    pub measure: Rational,
    pub bound: Rational,
    /// `measure < bound` instead of `measure ≤ bound`.
    pub strict: bool,
    pub holds: bool,
}

impl ErrorCheck {
    fn new(index: usize, measure: Rational, bound: Rational, strict: bool) -> Self {
        let holds = if strict { measure < bound } else { measure <= bound };
        ErrorCheck { index, measure, bound, strict, holds }
    }

    pub(crate) fn new_pub(index: usize, measure: Rational, bound: Rational, strict: bool) -> Self {
        Self::new(index, measure, bound, strict)
    }

    fn recheck(&self) -> bool {
        if self.strict {
            self.measure < self.bound
        } else {
            self.measure <= self.bound
        }
    }
}

/// Decency of one class against its flattening.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecency {
    pub part: usize,
    pub class: usize,
    pub measure: Rational,
    pub exceptional_measure: Rational,
    pub tolerance: Rational,
    pub decent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub variant: Variant,
    pub eps: Rational,
    pub decay: Option<DecayFunction>,
    /// `N'`: the largest number of class slots among the partitions, error slot included.
    pub num_classes: usize,
    /// Density tolerance applied to boxes (`ε` or `f(N')`).
    pub tolerance: Rational,
    pub boxes: Vec<BoxReport>,
    /// Indices into `boxes` of the non-degenerate boxes outside the interval.
    pub irregular: Vec<usize>,
    pub error_checks: Vec<ErrorCheck>,
    pub decency: Vec<ClassDecency>,
    pub sigma: Option<SigmaSets>,
    pub verdict: bool,
}

impl RegularityReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        variant: Variant,
        eps: Rational,
        decay: Option<DecayFunction>,
        num_classes: usize,
        tolerance: Rational,
        boxes: Vec<BoxReport>,
        error_checks: Vec<ErrorCheck>,
        decency: Vec<ClassDecency>,
        sigma: Option<SigmaSets>,
    ) -> Self {
        let irregular: Vec<usize> = (0..boxes.len()).filter(|&i| !boxes[i].regular).collect();
        let verdict = irregular.is_empty()
            && error_checks.iter().all(|c| c.holds)
            && decency.iter().all(|c| c.decent);
        RegularityReport {
            variant,
            eps,
            decay,
            num_classes,
            tolerance,
            boxes,
            irregular,
            error_checks,
            decency,
            sigma,
            verdict,
        }
    }

    /// Recomputes every listed flag and the verdict from the listed numbers.
    pub fn recheck(&self) -> bool {
        let boxes_ok = self.boxes.iter().enumerate().all(|(i, b)| {
            let regular = b.degenerate || in_regular_interval(&b.density, &self.tolerance);
            let consistent = b.degenerate
                || (*b.measure.numer() > 0 && b.edge_measure / b.measure == b.density);
            consistent && regular == b.regular && (self.irregular.contains(&i) != regular)
        });
        let checks_ok = self.error_checks.iter().all(|c| c.recheck() == c.holds);
        let decency_ok = self
            .decency
            .iter()
            .all(|c| (c.exceptional_measure <= c.tolerance) == c.decent && c.tolerance == self.tolerance);
        let verdict = self.irregular.is_empty()
            && self.error_checks.iter().all(|c| c.holds)
            && self.decency.iter().all(|c| c.decent);
        boxes_ok && checks_ok && decency_ok && verdict == self.verdict
    }

    /// The irregular box whose density is deepest inside the interval.
    pub fn worst_box(&self) -> Option<&BoxReport> {
        worst(self.irregular.iter().map(|&i| &self.boxes[i]))
    }
}

fn depth_inside(d: &Rational) -> Rational {
    let one = ratio(1, 1);
    if *d <= one - d {
        *d
    } else {
        one - d
    }
}

fn worst<'a, I: Iterator<Item = &'a BoxReport>>(it: I) -> Option<&'a BoxReport> {
    let mut best: Option<&BoxReport> = None;
    for b in it {
        if best.is_none_or(|w| depth_inside(&b.density) > depth_inside(&w.density)) {
            best = Some(b);
        }
    }
    best
}

pub(crate) fn check_partitions(hg: &PartiteHypergraph, parts: &[VertexPartition], mu: &WeightedMeasure) -> Result<()> {
    mu.check_sizes(hg.sizes())?;
    if parts.len() != hg.arity() {
        return Err(Error::Mismatch(format!("{} partitions for arity {}", parts.len(), hg.arity())));
    }
    for (i, p) in parts.iter().enumerate() {
        if p.part != i {
            return Err(Error::Mismatch(format!("partition {i} is labelled part {}", p.part)));
        }
        p.validate(hg.sizes()[i])?;
    }
    Ok(())
}

/// Exact densities of all boxes over classes `first..num_classes` of each part.
pub(crate) fn class_boxes(
    hg: &PartiteHypergraph,
    parts: &[VertexPartition],
    mu: &WeightedMeasure,
    first: usize,
    tol: &Rational,
) -> Vec<BoxReport> {
    let k = hg.arity();
    let counts: Vec<usize> = parts.iter().map(|p| p.num_classes).collect();
    let mut strides = vec![1usize; k];
    for i in (0..k - 1).rev() {
        strides[i] = strides[i + 1] * counts[i + 1];
    }
    let total_boxes: usize = counts.iter().product();
    let mut edge = vec![0u128; total_boxes];
    hg.for_each_edge(|t| {
        let idx: usize = t.iter().enumerate().map(|(i, &v)| parts[i].assignment[v] * strides[i]).sum();
        edge[idx] += mu.tuple_weight(t);
    });
    let masses: Vec<Vec<u128>> = parts.iter().enumerate().map(|(i, p)| p.class_mass(mu.part(i))).collect();
    let denom = mu.total();
    let mut out = Vec::new();
    let mut c = vec![first; k];
    if counts.iter().any(|&n| n <= first) {
        return out;
    }
    loop {
        let idx: usize = c.iter().zip(&strides).map(|(a, s)| a * s).sum();
        let mass: u128 = c.iter().enumerate().map(|(i, &t)| masses[i][t]).product();
        let bd = BoxDensity::from_masses(edge[idx], mass, denom);
        let regular = bd.degenerate || in_regular_interval(&bd.density, tol);
        out.push(BoxReport {
            classes: c.clone(),
            join: None,
            measure: bd.measure,
            edge_measure: bd.edge_measure,
            density: bd.density,
            degenerate: bd.degenerate,
            regular,
        });
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            c[i] += 1;
            if c[i] < counts[i] {
                break;
            }
            c[i] = first;
        }
    }
}

fn num_slots(parts: &[VertexPartition]) -> usize {
    parts.iter().map(|p| p.num_classes).max().unwrap_or(1)
}

fn class_measure(p: &VertexPartition, mu: &WeightedMeasure, t: usize) -> Rational {
    let w = mu.part(p.part);
    Rational::new(p.class_mass(w)[t], w.total())
}

/// Every box of classes `≥ 1` has density in `[0, ε) ∪ (1 − ε, 1]`; error classes must be empty.
pub fn verify_stable_regularity(
    hg: &PartiteHypergraph,
    parts: &[VertexPartition],
    mu: &WeightedMeasure,
    eps: &Rational,
) -> Result<RegularityReport> {
    check_partitions(hg, parts, mu)?;
    if let Some(p) = parts.iter().find(|p| p.has_error()) {
        return Err(Error::Mismatch(format!("part {} has a nonempty error class", p.part)));
    }
    let boxes = class_boxes(hg, parts, mu, 1, eps);
    Ok(RegularityReport::assemble(Variant::Stable, *eps, None, num_slots(parts), *eps, boxes, vec![], vec![], None))
}

/// `μ(A_{i,0}) ≤ ε μ(A_{i,1})` for every part, and every box of classes `≥ 1`
/// has density in `[0, f(N')) ∪ (1 − f(N'), 1]`.
pub fn verify_strong_stable_regularity(
    hg: &PartiteHypergraph,
    parts: &[VertexPartition],
    mu: &WeightedMeasure,
    eps: &Rational,
    f: &DecayFunction,
) -> Result<RegularityReport> {
    check_partitions(hg, parts, mu)?;
    f.check()?;
    let n = num_slots(parts);
    let tol = f.eval(n);
    let checks = parts
        .iter()
        .map(|p| {
            let first = if p.num_classes > 1 { class_measure(p, mu, 1) } else { ratio(0, 1) };
            ErrorCheck::new(p.part, class_measure(p, mu, 0), eps * first, false)
        })
        .collect();
    let boxes = class_boxes(hg, parts, mu, 1, &tol);
    Ok(RegularityReport::assemble(Variant::StrongStable, *eps, Some(f.clone()), n, tol, boxes, checks, vec![], None))
}

/// `μ(A_{i,0}) ≤ ε`, and every class `A_{i,t}` with `t ≥ 1` is `f(N')`-decent
/// for the flattening `X_i` against the other parts.
pub fn verify_approx_perfect(
    hg: &PartiteHypergraph,
    parts: &[VertexPartition],
    mu: &WeightedMeasure,
    eps: &Rational,
    f: &DecayFunction,
) -> Result<RegularityReport> {
    check_partitions(hg, parts, mu)?;
    f.check()?;
    let n = num_slots(parts);
    let tol = f.eval(n);
    let mut checks = Vec::new();
    let mut decency = Vec::new();
    for p in parts {
        checks.push(ErrorCheck::new(p.part, class_measure(p, mu, 0), *eps, false));
        let rel = BinaryView::new(hg, &[p.part])?.weighted_relation(mu)?;
        for (t, class) in p.classes().iter().enumerate().skip(1) {
            let set = BitSet::from_indices(p.len(), class.iter().copied());
            if rel.left_weights().mass(&set) == 0 {
                continue;
            }
            let v = is_decent(&rel, &set, &tol, &tol)?;
            decency.push(ClassDecency {
                part: p.part,
                class: t,
                measure: v.set_measure,
                exceptional_measure: v.exceptional_measure,
                tolerance: tol,
                decent: v.decent,
            });
        }
    }
    Ok(RegularityReport::assemble(Variant::ApproxPerfect, *eps, Some(f.clone()), n, tol, vec![], checks, decency, None))
}

/// The box of classes `≥ 1` whose density lies in `[ε, 1 − ε]` and is farthest
/// from both ends; ties go to the first box in rank order.
pub fn find_irregular_box(
    hg: &PartiteHypergraph,
    parts: &[VertexPartition],
    mu: &WeightedMeasure,
    eps: &Rational,
) -> Result<Option<BoxReport>> {
    check_partitions(hg, parts, mu)?;
    let boxes = class_boxes(hg, parts, mu, 1, eps);
    Ok(worst(boxes.iter().filter(|b| !b.regular)).cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{half_graph, prefix_partition, ternary_word_hypergraph};

    fn trivial(h: &PartiteHypergraph) -> Vec<VertexPartition> {
        h.sizes().iter().enumerate().map(|(i, &n)| VertexPartition::trivial(i, n)).collect()
    }

    fn singletons(h: &PartiteHypergraph) -> Vec<VertexPartition> {
        h.sizes().iter().enumerate().map(|(i, &n)| VertexPartition::singletons(i, n)).collect()
    }

    #[test]
    fn half_graph_trivial_partition_fails() {
        let h = half_graph(4).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let r = verify_stable_regularity(&h, &trivial(&h), &mu, &ratio(1, 4)).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.worst_box().unwrap().density, ratio(3, 8));
        assert!(r.recheck());
        let r = verify_stable_regularity(&h, &trivial(&h), &mu, &ratio(1, 1)).unwrap();
        assert!(r.verdict);
        let w = find_irregular_box(&h, &trivial(&h), &mu, &ratio(1, 4)).unwrap().unwrap();
        assert_eq!(w.classes, vec![1, 1]);
        assert!(find_irregular_box(&h, &singletons(&h), &mu, &ratio(1, 4)).unwrap().is_none());
    }

    #[test]
    fn ternary_prefix_partition_fails() {
        let t = ternary_word_hypergraph(2).unwrap();
        let mu = WeightedMeasure::uniform(t.sizes());
        let parts: Vec<_> = (0..3).map(|i| prefix_partition(2, 1, i).unwrap()).collect();
        let r = verify_stable_regularity(&t, &parts, &mu, &ratio(1, 10)).unwrap();
        assert!(!r.verdict);
        let w = find_irregular_box(&t, &parts, &mu, &ratio(1, 10)).unwrap().unwrap();
        assert_eq!(w.classes, vec![1, 1, 1]);
        assert_eq!(w.density, ratio(2, 9));
    }

    #[test]
    fn error_class_rules() {
        let h = half_graph(4).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let with_err = vec![
            VertexPartition::new(0, 3, vec![0, 1, 2, 2]).unwrap(),
            VertexPartition::singletons(1, 4),
        ];
        assert!(verify_stable_regularity(&h, &with_err, &mu, &ratio(1, 4)).is_err());
        let f = DecayFunction::Constant(ratio(1, 10));
        // error 1/4 against class 1 of measure 1/4: fine at ε = 1, not at ε = 1/2
        let r = verify_strong_stable_regularity(&h, &with_err, &mu, &ratio(1, 1), &f).unwrap();
        assert!(r.error_checks[0].holds);
        let r = verify_strong_stable_regularity(&h, &with_err, &mu, &ratio(1, 2), &f).unwrap();
        assert!(!r.error_checks[0].holds);
        assert!(!r.verdict);
        assert!(r.recheck());
    }

    #[test]
    fn approx_perfect_examples() {
        let h = half_graph(4).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let halves: Vec<_> = (0..2).map(|i| VertexPartition::new(i, 3, vec![1, 1, 2, 2]).unwrap()).collect();
        let f = DecayFunction::Constant(ratio(1, 2));
        let r = verify_approx_perfect(&h, &halves, &mu, &ratio(0, 1), &f).unwrap();
        // with f = 1/2 nothing can split a class strictly above half on both sides
        assert!(r.verdict);
        let f = DecayFunction::Constant(ratio(1, 10));
        let r = verify_approx_perfect(&h, &halves, &mu, &ratio(0, 1), &f).unwrap();
        // {0,1} is split by b = 1 only (measure 1/4 > 1/10)
        assert!(!r.verdict);
        assert_eq!(r.decency[0].exceptional_measure, ratio(1, 4));
        let r = verify_approx_perfect(&h, &singletons(&h), &mu, &ratio(0, 1), &DecayFunction::Exponential).unwrap();
        assert!(r.verdict);
    }

    #[test]
    fn recheck_detects_tampering() {
        let h = half_graph(4).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let mut r = verify_stable_regularity(&h, &trivial(&h), &mu, &ratio(1, 4)).unwrap();
        assert!(r.recheck());
        r.verdict = true;
        assert!(!r.recheck());
    }
}
