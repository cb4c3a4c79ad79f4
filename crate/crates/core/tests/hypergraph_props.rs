use proptest::prelude::*;
use stablereg_core::rational::ratio;
use stablereg_core::{BinaryView, PartiteHypergraph, PartWeights, Rational, WeightedMeasure};

fn hypergraph() -> impl Strategy<Value = PartiteHypergraph> {
    prop::collection::vec(1usize..5, 2..=4).prop_flat_map(|sizes| {
        let total: usize = sizes.iter().product();
        prop::collection::vec(any::<bool>(), total).prop_map(move |bits| {
            let mut t = 0;
            PartiteHypergraph::from_predicate(&sizes, |_| {
                t += 1;
                bits[t - 1]
            })
            .unwrap()
        })
    })
}

fn subsets(sizes: &[usize]) -> impl Strategy<Value = Vec<Vec<usize>>> {
    let per: Vec<_> = sizes
        .iter()
        .map(|&n| prop::collection::vec(any::<bool>(), n).prop_map(|m| (0..m.len()).filter(|&i| m[i]).collect::<Vec<_>>()))
        .collect();
    per
}

fn weights(sizes: &[usize]) -> impl Strategy<Value = WeightedMeasure> {
    let per: Vec<_> = sizes.iter().map(|&n| prop::collection::vec(1u128..5, n)).collect();
    per.prop_map(|ws| WeightedMeasure::new(ws.into_iter().map(PartWeights::from_integer_weights).collect()).unwrap())
}

proptest! {
    #[test]
    fn rank_is_a_bijection(h in hypergraph()) {
        for r in 0..h.total_tuples() {
            let t = h.unrank(r);
            prop_assert!(h.in_range(&t));
            prop_assert_eq!(h.rank(&t), r);
        }
    }

    #[test]
    fn views_and_slices_agree_with_membership(h in hypergraph()) {
        let k = h.arity();
        for mask in 1..(1usize << k) - 1 {
            let left: Vec<usize> = (0..k).filter(|c| mask >> c & 1 == 1).collect();
            let view = BinaryView::new(&h, &left).unwrap();
            let rel = view.relation();
            let mut seen = vec![false; h.total_tuples()];
            for l in 0..view.left_len() {
                for r in 0..view.right_len() {
                    let t = view.tuple(l, r);
                    prop_assert!(!seen[h.rank(&t)]);
                    seen[h.rank(&t)] = true;
                    prop_assert_eq!(rel.contains(l, r), h.contains(&t));
                    prop_assert_eq!(view.contains(l, r), h.contains(&t));
                }
            }
            prop_assert!(seen.iter().all(|&s| s));
        }
        if k >= 3 {
            for c in 0..k {
                for v in 0..h.sizes()[c] {
                    let s = h.slice(&[(c, v)]).unwrap();
                    for r in 0..s.total_tuples() {
                        let mut t = s.unrank(r);
                        t.insert(c, v);
                        prop_assert_eq!(s.contains(&s.unrank(r)), h.contains(&t));
                    }
                }
            }
        }
    }

    #[test]
    fn induced_edges_are_edges((h, sets) in hypergraph().prop_flat_map(|h| {
        let s = subsets(h.sizes());
        (Just(h), s)
    })) {
        prop_assume!(sets.iter().all(|s| !s.is_empty()));
        let sub = h.induced(&sets).unwrap();
        for e in sub.edges() {
            let orig: Vec<usize> = e.iter().zip(&sets).map(|(&v, s)| s[v]).collect();
            prop_assert!(h.contains(&orig));
        }
    }

    #[test]
    fn box_measure_splits_over_a_coordinate((sizes, sets, mu, c) in prop::collection::vec(1usize..5, 2..=4)
        .prop_flat_map(|sizes| {
            let k = sizes.len();
            (Just(sizes.clone()), subsets(&sizes), weights(&sizes), 0..k)
        }))
    {
        let whole = mu.box_measure(&sets);
        let rest_mu = mu.without(&[c]);
        let rest: Vec<Vec<usize>> = (0..sizes.len()).filter(|&i| i != c).map(|i| sets[i].clone()).collect();
        let inner = rest_mu.box_measure(&rest);
        let sum = sets[c].iter().fold(ratio(0, 1), |acc: Rational, &v| acc + mu.part(c).weight(v) * inner);
        prop_assert_eq!(whole, sum);
    }
}
