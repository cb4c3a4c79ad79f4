use std::collections::VecDeque;

use proptest::prelude::*;
use stablereg_core::boxes::{density, VertexBox};
use stablereg_core::decency::{is_decent, is_perfect};
use stablereg_core::families::{blowup, leq_eq_hypergraph, random_bipartite_sized};
use stablereg_core::rational::ratio;
use stablereg_core::regularity::{
    build_decent_partition, build_mixed_partition, local_symmetrize, merge_error_bound, redistribute_error,
    verify_approx_perfect, verify_stable_regularity, verify_strong_stable_regularity, DecayFunction,
    DecentPartitionConfig, MixedPartitionConfig, Redistribution, VertexPartition,
};
use stablereg_core::witness::Budget;
use stablereg_core::{BinaryView, BitSet, PartiteHypergraph, Rational, Relation, WeightedMeasure};

fn ternary(max: usize) -> impl Strategy<Value = PartiteHypergraph> {
    prop::collection::vec(1usize..=max, 3).prop_flat_map(|sizes| {
        let total: usize = sizes.iter().product();
        prop::collection::vec(any::<bool>(), total).prop_map(move |bits| {
            let mut i = 0;
            PartiteHypergraph::from_predicate(&sizes, |_| {
                i += 1;
                bits[i - 1]
            })
            .unwrap()
        })
    })
}

fn partitions(sizes: &[usize], slots: usize) -> impl Strategy<Value = Vec<VertexPartition>> {
    let per: Vec<_> = sizes
        .iter()
        .enumerate()
        .map(|(p, &n)| {
            prop::collection::vec(0..slots, n).prop_map(move |a| VertexPartition::new(p, slots, a).unwrap())
        })
        .collect();
    per
}

fn with_partitions(max: usize, slots: usize) -> impl Strategy<Value = (PartiteHypergraph, Vec<VertexPartition>)> {
    ternary(max).prop_flat_map(move |h| {
        let p = partitions(h.sizes(), slots);
        (Just(h), p)
    })
}

fn error_free(parts: &[VertexPartition]) -> Vec<VertexPartition> {
    parts
        .iter()
        .map(|p| {
            let a = p.assignment.iter().map(|&c| c.max(1)).collect();
            VertexPartition::new(p.part, p.num_classes, a).unwrap()
        })
        .collect()
}

fn all_perfect(h: &PartiteHypergraph, parts: &[VertexPartition]) -> bool {
    parts.iter().all(|p| {
        let rel = BinaryView::new(h, &[p.part]).unwrap().relation();
        p.classes().iter().skip(1).filter(|c| !c.is_empty()).all(|c| {
            is_perfect(&rel, &BitSet::from_indices(p.len(), c.iter().copied())).unwrap().decent
        })
    })
}

fn all_homogeneous(h: &PartiteHypergraph, parts: &[VertexPartition]) -> bool {
    let mu = WeightedMeasure::uniform(h.sizes());
    let cs: Vec<Vec<Vec<usize>>> = parts.iter().map(|p| p.classes()).collect();
    for a in cs[0].iter().skip(1) {
        for b in cs[1].iter().skip(1) {
            for c in cs[2].iter().skip(1) {
                let d = density(h, &VertexBox::new(vec![a.clone(), b.clone(), c.clone()]), &mu).unwrap();
                if !d.degenerate && d.density != ratio(0, 1) && d.density != ratio(1, 1) {
                    return false;
                }
            }
        }
    }
    true
}

fn fraction() -> impl Strategy<Value = Rational> {
    prop::sample::select(vec![ratio(1, 10), ratio(1, 4), ratio(1, 3), ratio(1, 2), ratio(3, 4), ratio(1, 1)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn reports_recheck((h, parts) in with_partitions(4, 3), e in fraction(), f in fraction()) {
        let mu = WeightedMeasure::uniform(h.sizes());
        let f = DecayFunction::constant(f).unwrap();
        let clean = error_free(&parts);
        let reports = [
            verify_stable_regularity(&h, &clean, &mu, &e).unwrap(),
            verify_strong_stable_regularity(&h, &parts, &mu, &e, &f).unwrap(),
            verify_approx_perfect(&h, &parts, &mu, &e, &f).unwrap(),
        ];
        for r in &reports {
            prop_assert!(r.recheck());
            let mut flipped = r.clone();
            flipped.verdict = !flipped.verdict;
            prop_assert!(!flipped.recheck());
        }
    }

    #[test]
    fn merging_keeps_stable_regularity((h, parts) in with_partitions(4, 3), e in fraction(), f in fraction()) {
        let mu = WeightedMeasure::uniform(h.sizes());
        let decay = DecayFunction::constant(f).unwrap();
        let strong = verify_strong_stable_regularity(&h, &parts, &mu, &e, &decay).unwrap();
        if strong.verdict {
            let merged = redistribute_error(&parts, &mu, &Redistribution::Merge).unwrap();
            let bound = merge_error_bound(&e, &decay.eval(strong.num_classes), 3);
            prop_assert!(verify_stable_regularity(&h, &merged, &mu, &bound).unwrap().verdict);
        }
    }

    #[test]
    fn perfect_iff_homogeneous((h, parts) in with_partitions(4, 3)) {
        let parts = error_free(&parts);
        prop_assert_eq!(all_perfect(&h, &parts), all_homogeneous(&h, &parts));
    }

    #[test]
    fn blowup_classes_are_perfect(
        h in ternary(2),
        factors in prop::collection::vec(prop::collection::vec(1usize..=3, 2), 3),
    ) {
        let factors: Vec<Vec<usize>> = factors.iter().zip(h.sizes()).map(|(f, &n)| f[..n].to_vec()).collect();
        let big = blowup(&h, &factors).unwrap();
        let parts: Vec<VertexPartition> = factors
            .iter()
            .enumerate()
            .map(|(p, f)| {
                let a: Vec<usize> = f.iter().enumerate().flat_map(|(v, &k)| std::iter::repeat_n(v + 1, k)).collect();
                VertexPartition::new(p, f.len() + 1, a).unwrap()
            })
            .collect();
        prop_assert!(all_perfect(&big, &parts));
        prop_assert!(all_homogeneous(&big, &parts));
    }

    #[test]
    fn symmetrization_components_are_connected(
        (n, m, bits) in (1usize..8, 1usize..8).prop_flat_map(|(n, m)| (Just(n), Just(m), prop::collection::vec(any::<bool>(), n * m)))
    ) {
        let rel = Relation::from_fn(n, m, |a, b| bits[a * m + b]);
        prop_assume!(rel.edge_count() > 0);
        let s = local_symmetrize(&rel).unwrap();
        prop_assert!(s.check(&rel));
        let mut lefts: Vec<usize> = s.components.iter().flat_map(|c| c.0.clone()).collect();
        let mut rights: Vec<usize> = s.components.iter().flat_map(|c| c.1.clone()).collect();
        lefts.sort_unstable();
        rights.sort_unstable();
        prop_assert_eq!(lefts, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(rights, (0..m).collect::<Vec<_>>());
        for (u, v) in &s.components {
            let isolated = u.iter().all(|&a| rel.left_fiber(a).is_empty()) && v.iter().all(|&b| rel.right_fiber(b).is_empty());
            if isolated {
                continue;
            }
            // BFS inside the component reaches every vertex, so no proper bipartition splits it
            let mut seen_l = vec![false; n];
            let mut seen_r = vec![false; m];
            let mut q = VecDeque::from([(true, u[0])]);
            seen_l[u[0]] = true;
            while let Some((left, x)) = q.pop_front() {
                let next: Vec<usize> = if left { rel.left_fiber(x).to_vec() } else { rel.right_fiber(x).to_vec() };
                for y in next {
                    let seen = if left { &mut seen_r[y] } else { &mut seen_l[y] };
                    if !*seen {
                        *seen = true;
                        q.push_back((!left, y));
                    }
                }
            }
            prop_assert!(u.iter().all(|&a| seen_l[a]) && v.iter().all(|&b| seen_r[b]));
        }
    }
}

#[test]
fn decent_partitions_pass_decency() {
    for seed in 0..24 {
        let h = random_bipartite_sized(10, 9, ratio(1, 2), seed).unwrap();
        let view = BinaryView::new(&h, &[0]).unwrap();
        let rel = view.relation();
        let mu = WeightedMeasure::uniform(h.sizes());
        for (e, d) in [(ratio(1, 4), ratio(1, 4)), (ratio(1, 10), ratio(1, 5)), (ratio(0, 1), ratio(0, 1))] {
            let cfg = DecentPartitionConfig::new(e, d, 2);
            let p = build_decent_partition(&view, &mu, &cfg, &mut Budget::default()).unwrap();
            for c in p.classes().iter().skip(1) {
                assert!(!c.is_empty());
                let s = BitSet::from_indices(10, c.iter().copied());
                assert!(is_decent(&rel, &s, &e, &d).unwrap().decent);
            }
        }
    }
}

#[test]
fn mixed_partitions_pass_and_merge() {
    for n in [3, 5, 9] {
        let h = leq_eq_hypergraph(n).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let cfg = MixedPartitionConfig { eps: ratio(1, 2), delta: ratio(1, 10), depth: 2, seed: 0 };
        let out = build_mixed_partition(&h, &mu, &cfg, &mut Budget::default()).unwrap();
        let f = DecayFunction::constant(ratio(1, 10)).unwrap();
        let strong = verify_strong_stable_regularity(&h, &out.parts, &mu, &ratio(1, 2), &f).unwrap();
        assert!(strong.verdict, "n = {n}");
        let merged = redistribute_error(&out.parts, &mu, &Redistribution::Merge).unwrap();
        let bound = merge_error_bound(&ratio(1, 2), &ratio(1, 10), 3);
        assert!(verify_stable_regularity(&h, &merged, &mu, &bound).unwrap().verdict);
    }
}
