use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::partition::{DecayFunction, PairPartition, VertexPartition};
use super::verify::{check_partitions, class_boxes, in_regular_interval, BoxReport, ErrorCheck, RegularityReport, Variant};
use crate::boxes::BoxDensity;
use crate::error::{Error, Result};
use crate::hypergraph::PartiteHypergraph;
use crate::measure::WeightedMeasure;
use crate::rational::Rational;

/// Index sets `Σ_{X,Y}, Σ_{X,Z}, Σ_{Y,Z}` of class pairs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SigmaSets {
    pub xy: Vec<(usize, usize)>,
    pub xz: Vec<(usize, usize)>,
    pub yz: Vec<(usize, usize)>,
}

impl SigmaSets {
    /// Every pair of classes `0..n`.
    pub fn all(n: usize) -> Self {
        let all: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        SigmaSets { xy: all.clone(), xz: all.clone(), yz: all }
    }
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn check_ternary(hg: &PartiteHypergraph, mu: &WeightedMeasure) -> Result<()> {
    if hg.arity() != 3 {
        return Err(Error::Mismatch(format!("slice-wise regularity needs arity 3, got {}", hg.arity())));
    }
    mu.check_sizes(hg.sizes())
}

/// Pair partitions over `X × Y`, `X × Z`, `Y × Z` (in that order): each error
/// class has measure `< ε`, and every join `A^i ∧ B^j`, `A^i ∧ D^k`, `B^j ∧ D^k`
/// of classes `≥ 1` has density in `[0, ε) ∪ (1 − ε, 1]`.
pub fn verify_slicewise_regularity(
    hg: &PartiteHypergraph,
    pairs: &[PairPartition],
    mu: &WeightedMeasure,
    eps: &Rational,
) -> Result<RegularityReport> {
    check_ternary(hg, mu)?;
    if pairs.len() != 3 {
        return Err(Error::Mismatch(format!("expected 3 pair partitions, got {}", pairs.len())));
    }
    let sizes = hg.sizes();
    for (p, &(a, b)) in pairs.iter().zip(&PAIRS) {
        if p.parts != (a, b) || p.sizes != (sizes[a], sizes[b]) {
            return Err(Error::Mismatch(format!("pair partition over {:?} where {:?} was expected", p.parts, (a, b))));
        }
        p.validate()?;
    }
    let w: Vec<&[u128]> = (0..3).map(|i| mu.part(i).numerators()).collect();
    let mut checks = Vec::new();
    for (idx, p) in pairs.iter().enumerate() {
        let (a, b) = p.parts;
        let mut mass = 0u128;
        for x in 0..sizes[a] {
            for y in 0..sizes[b] {
                if p.class_of(x, y) == 0 {
                    mass += w[a][x] * w[b][y];
                }
            }
        }
        let m = Rational::new(mass, mu.part(a).total() * mu.part(b).total());
        checks.push(ErrorCheck::new_pub(idx, m, *eps, true));
    }
    // joins: (XY, XZ), (XY, YZ), (XZ, YZ)
    let joins = [(0usize, 1usize), (0, 2), (1, 2)];
    let n: Vec<usize> = pairs.iter().map(|p| p.num_classes).collect();
    let mut total: Vec<Vec<u128>> = joins.iter().map(|&(i, j)| vec![0u128; n[i] * n[j]]).collect();
    let mut edge: Vec<Vec<u128>> = total.clone();
    for x in 0..sizes[0] {
        for y in 0..sizes[1] {
            let cxy = pairs[0].class_of(x, y);
            for z in 0..sizes[2] {
                let c = [cxy, pairs[1].class_of(x, z), pairs[2].class_of(y, z)];
                let wt = w[0][x] * w[1][y] * w[2][z];
                let e = hg.contains(&[x, y, z]);
                for (ji, &(i, j)) in joins.iter().enumerate() {
                    let slot = c[i] * n[j] + c[j];
                    total[ji][slot] += wt;
                    if e {
                        edge[ji][slot] += wt;
                    }
                }
            }
        }
    }
    let denom = mu.total();
    let mut boxes = Vec::new();
    for (ji, &(i, j)) in joins.iter().enumerate() {
        for ci in 1..n[i] {
            for cj in 1..n[j] {
                let slot = ci * n[j] + cj;
                let bd = BoxDensity::from_masses(edge[ji][slot], total[ji][slot], denom);
                let regular = bd.degenerate || in_regular_interval(&bd.density, eps);
                boxes.push(BoxReport {
                    classes: vec![ci, cj],
                    join: Some((i, j)),
                    measure: bd.measure,
                    edge_measure: bd.edge_measure,
                    density: bd.density,
                    degenerate: bd.degenerate,
                    regular,
                });
            }
        }
    }
    let slots = n.iter().copied().max().unwrap_or(1);
    Ok(RegularityReport::assemble(Variant::Slicewise, *eps, None, slots, *eps, boxes, checks, vec![], None))
}

/// Vertex partitions with a common slot count `N'` (every slot an ordinary
/// class) and index sets `Σ`: the region off each `Σ` has measure `< ε`, and
/// every box `(i, j, k)` in `(Σ_XY ∧ Σ_XZ) ∪ (Σ_XY ∧ Σ_YZ) ∪ (Σ_XZ ∧ Σ_YZ)` has
/// density in `[0, f(N')) ∪ (1 − f(N'), 1]`.
pub fn verify_strong_slicewise(
    hg: &PartiteHypergraph,
    parts: &[VertexPartition],
    sigma: &SigmaSets,
    mu: &WeightedMeasure,
    eps: &Rational,
    f: &DecayFunction,
) -> Result<RegularityReport> {
    check_ternary(hg, mu)?;
    check_partitions(hg, parts, mu)?;
    f.check()?;
    let n = parts[0].num_classes;
    if parts.iter().any(|p| p.num_classes != n) {
        return Err(Error::Mismatch("strong slice-wise partitions need equal class counts".into()));
    }
    let mut member = [vec![false; n * n], vec![false; n * n], vec![false; n * n]];
    for (m, s) in member.iter_mut().zip([&sigma.xy, &sigma.xz, &sigma.yz]) {
        for &(i, j) in s {
            if i >= n || j >= n {
                return Err(Error::OutOfRange(format!("index pair ({i}, {j}) with N' = {n}")));
            }
            m[i * n + j] = true;
        }
    }
    let masses: Vec<Vec<u128>> = parts.iter().enumerate().map(|(i, p)| p.class_mass(mu.part(i))).collect();
    let mut checks = Vec::new();
    for (idx, &(a, b)) in PAIRS.iter().enumerate() {
        let mut off = 0u128;
        for i in 0..n {
            for j in 0..n {
                if !member[idx][i * n + j] {
                    off += masses[a][i] * masses[b][j];
                }
            }
        }
        let m = Rational::new(off, mu.part(a).total() * mu.part(b).total());
        checks.push(ErrorCheck::new_pub(idx, m, *eps, true));
    }
    let tol = f.eval(n);
    let boxes: Vec<BoxReport> = class_boxes(hg, parts, mu, 0, &tol)
        .into_iter()
        .filter(|b| {
            let (i, j, k) = (b.classes[0], b.classes[1], b.classes[2]);
            let (xy, xz, yz) = (member[0][i * n + j], member[1][i * n + k], member[2][j * n + k]);
            (xy && xz) || (xy && yz) || (xz && yz)
        })
        .collect();
    Ok(RegularityReport::assemble(
        Variant::StrongSlicewise,
        *eps,
        Some(f.clone()),
        n,
        tol,
        boxes,
        checks,
        vec![],
        Some(sigma.clone()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{leq_eq_hypergraph, prefix_partition, ternary_word_hypergraph};
    use crate::rational::ratio;

    fn prefix_pairs(m: usize, level: usize) -> Vec<PairPartition> {
        let p: Vec<_> = (0..3).map(|i| prefix_partition(m, level, i).unwrap()).collect();
        PAIRS.iter().map(|&(a, b)| PairPartition::from_rectangles(&p[a], &p[b])).collect()
    }

    /// Direct triple enumeration of one join density.
    fn join_density(
        hg: &PartiteHypergraph,
        pairs: &[PairPartition],
        (i, j): (usize, usize),
        (ci, cj): (usize, usize),
    ) -> Option<Rational> {
        let n = hg.sizes()[0];
        let (mut tot, mut e) = (0u128, 0u128);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let c = [pairs[0].class_of(x, y), pairs[1].class_of(x, z), pairs[2].class_of(y, z)];
                    if c[i] == ci && c[j] == cj {
                        tot += 1;
                        e += hg.contains(&[x, y, z]) as u128;
                    }
                }
            }
        }
        (tot > 0).then(|| Rational::new(e, tot))
    }

    #[test]
    fn ternary_prefix_rectangles_match_enumeration() {
        let t = ternary_word_hypergraph(2).unwrap();
        let mu = WeightedMeasure::uniform(t.sizes());
        let pairs = prefix_pairs(2, 1);
        let r = verify_slicewise_regularity(&t, &pairs, &mu, &ratio(1, 10)).unwrap();
        for b in &r.boxes {
            let d = join_density(&t, &pairs, b.join.unwrap(), (b.classes[0], b.classes[1]));
            assert_eq!(d.is_none(), b.degenerate);
            if let Some(d) = d {
                assert_eq!(d, b.density);
            }
        }
        // [0]×[0] joined with [0]×[0] along X carries the 2/9 block
        assert!(!r.verdict);
        assert!(r.recheck());
        let r = verify_slicewise_regularity(&t, &pairs, &mu, &ratio(1, 1)).unwrap();
        assert!(r.verdict);
    }

    #[test]
    fn leq_eq_diagonal_pairs() {
        let h = leq_eq_hypergraph(4).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let n = 4;
        let diag = |a: usize, b: usize| {
            let assignment = (0..n * n).map(|i| if i / n == i % n { 1 } else { 2 }).collect();
            PairPartition { parts: (a, b), sizes: (n, n), num_classes: 3, assignment, rectangles: None }
        };
        let pairs = vec![diag(0, 1), diag(0, 2), diag(1, 2)];
        let r = verify_slicewise_regularity(&h, &pairs, &mu, &ratio(1, 10)).unwrap();
        for b in &r.boxes {
            let d = join_density(&h, &pairs, b.join.unwrap(), (b.classes[0], b.classes[1]));
            assert_eq!(d.unwrap_or(ratio(0, 1)), b.density);
        }
        assert!(r.recheck());
    }

    #[test]
    fn strong_slicewise_examples() {
        let t = ternary_word_hypergraph(1).unwrap();
        let mu = WeightedMeasure::uniform(t.sizes());
        let trivial: Vec<_> = (0..3).map(|i| VertexPartition::trivial(i, 3)).collect();
        let one = DecayFunction::Constant(ratio(1, 1));
        let r = verify_strong_slicewise(&t, &trivial, &SigmaSets::all(2), &mu, &ratio(1, 3), &one).unwrap();
        assert!(r.verdict);
        let single: Vec<_> = (0..3).map(|i| VertexPartition::singletons(i, 3)).collect();
        let f = DecayFunction::Constant(ratio(1, 10));
        let r = verify_strong_slicewise(&t, &single, &SigmaSets::all(4), &mu, &ratio(1, 10), &f).unwrap();
        assert!(r.verdict);
        let r = verify_strong_slicewise(&t, &single, &SigmaSets::default(), &mu, &ratio(1, 10), &f).unwrap();
        assert!(!r.verdict);
    }

    #[test]
    fn embedded_half_graph_fails() {
        // E = {(x, y, z) : x < y} with Z a single vertex
        let n = 8;
        let hg = PartiteHypergraph::from_predicate(&[n, n, 1], |t| t[0] < t[1]).unwrap();
        let mu = WeightedMeasure::uniform(hg.sizes());
        let parts: Vec<_> = (0..3).map(|i| VertexPartition::new(i, 1, vec![0; hg.sizes()[i]]).unwrap()).collect();
        let f = DecayFunction::Constant(ratio(1, 4));
        let r = verify_strong_slicewise(&hg, &parts, &SigmaSets::all(1), &mu, &ratio(1, 20), &f).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.worst_box().unwrap().density, ratio(7, 16));
    }
}
