use proptest::prelude::*;

use stablereg::hgx::{self, HgxFile};
use stablereg::json::{to_text, PartitionJson, ReportJson, WitnessJson};
use stablereg_core::families::random_hypergraph;
use stablereg_core::rational::ratio;
use stablereg_core::regularity::{verify_stable_regularity, VertexPartition};
use stablereg_core::witness::{find_ladder, find_tree, Budget};
use stablereg_core::{BinaryView, PartWeights, WeightedMeasure};

fn sizes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..5, 2..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hgx_round_trip(sizes in sizes(), seed in any::<u64>(), p in 0u128..=4, weights in prop::collection::vec(1u128..9, 4)) {
        let hg = random_hypergraph(&sizes, ratio(p, 4), seed).unwrap();
        let mut f = HgxFile::uniform(hg);
        let n0 = sizes[0];
        f.mu.replace_part(0, PartWeights::from_integer_weights(weights[..n0].to_vec())).unwrap();
        let text = hgx::write(&f);
        let back = hgx::read(&text).unwrap();
        prop_assert_eq!(back.hg.sizes(), f.hg.sizes());
        prop_assert_eq!(back.hg.edges(), f.hg.edges());
        prop_assert_eq!(&back.mu, &f.mu);
        prop_assert_eq!(hgx::write(&back), text);
    }

    #[test]
    fn partition_json_is_canonical(n in 1usize..12, classes in 1usize..5, seed in any::<u64>()) {
        let assignment: Vec<usize> = (0..n).map(|v| (seed.rotate_left(v as u32) as usize) % classes).collect();
        let p = VertexPartition::new(0, classes, assignment).unwrap();
        let text = to_text(&PartitionJson::from(&p));
        let back: PartitionJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_core().unwrap(), p);
        prop_assert_eq!(to_text(&back), text);
    }

    #[test]
    fn reports_recheck_from_json(a in 1usize..5, b in 1usize..5, seed in any::<u64>(), eps in 1u128..5) {
        let hg = random_hypergraph(&[4, 4], ratio(1, 2), seed).unwrap();
        let mu = WeightedMeasure::uniform(hg.sizes());
        let part = |i: usize, k: usize| {
            VertexPartition::new(i, k + 1, (0..4).map(|v| 1 + (v * k) / 4).collect()).unwrap()
        };
        let r = verify_stable_regularity(&hg, &[part(0, a), part(1, b)], &mu, &ratio(eps, 10)).unwrap();
        let back: ReportJson = serde_json::from_str(&to_text(&ReportJson::from(&r))).unwrap();
        let core = back.to_core().unwrap();
        prop_assert!(core.recheck());
        prop_assert_eq!(core, r);
    }

    #[test]
    fn witnesses_survive_json(seed in any::<u64>(), d in 1usize..4) {
        let hg = random_hypergraph(&[7, 7], ratio(1, 2), seed).unwrap();
        let rel = BinaryView::new(&hg, &[0]).unwrap().relation();
        let mut budget = Budget::default();
        if let Some(l) = find_ladder(&rel, d, &mut budget).unwrap() {
            let j: WitnessJson = serde_json::from_str(&to_text(&WitnessJson::ladder(&l, Some("0|1")))).unwrap();
            prop_assert_eq!(j.to_ladder(), l);
        }
        if let Some(t) = find_tree(&rel, d, None, &mut budget).unwrap() {
            let j: WitnessJson = serde_json::from_str(&to_text(&WitnessJson::tree(&t, None))).unwrap();
            prop_assert!(j.to_tree().validate(&rel));
        }
    }
}
