use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypergraph::PartiteHypergraph;
use crate::measure::WeightedMeasure;
use crate::rational::Rational;

/// One subset per part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexBox {
    pub sets: Vec<Vec<usize>>,
}

/// Exact measure and edge density of a box. Measure-zero boxes get density 0
/// and are flagged degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxDensity {
    pub measure: Rational,
    pub edge_measure: Rational,
    pub density: Rational,
    pub degenerate: bool,
}

impl BoxDensity {
    pub(crate) fn from_masses(edge: u128, total_box: u128, denom: u128) -> Self {
        if total_box == 0 {
            return BoxDensity {
                measure: Rational::new(0, 1),
                edge_measure: Rational::new(0, 1),
                density: Rational::new(0, 1),
                degenerate: true,
            };
        }
        BoxDensity {
            measure: Rational::new(total_box, denom),
            edge_measure: Rational::new(edge, denom),
            density: Rational::new(edge, total_box),
            degenerate: false,
        }
    }
}

impl VertexBox {
    pub fn new(sets: Vec<Vec<usize>>) -> Self {
        VertexBox { sets }
    }

    pub fn full(sizes: &[usize]) -> Self {
        VertexBox { sets: sizes.iter().map(|&n| (0..n).collect()).collect() }
    }
}

/// `μ(E ∩ box) / μ(box)`, exactly.
pub fn density(hg: &PartiteHypergraph, b: &VertexBox, mu: &WeightedMeasure) -> Result<BoxDensity> {
    let k = hg.arity();
    mu.check_sizes(hg.sizes())?;
    if b.sets.len() != k {
        return Err(Error::Mismatch(format!("box has {} sets for arity {k}", b.sets.len())));
    }
    let mut member = Vec::with_capacity(k);
    for (i, s) in b.sets.iter().enumerate() {
        let mut m = alloc::vec![false; hg.sizes()[i]];
        for &v in s {
            if v >= hg.sizes()[i] {
                return Err(Error::OutOfRange(format!("vertex {v} of part {i}")));
            }
            m[v] = true;
        }
        member.push(m);
    }
    let box_mass: u128 = (0..k)
        .map(|i| mu.part(i).numerators().iter().zip(&member[i]).filter(|(_, &m)| m).map(|(w, _)| w).sum::<u128>())
        .product();
    let mut edge_mass = 0u128;
    if hg.family().is_some() {
        // Lazy families: stream over the box itself rather than all tuples.
        let sets: Vec<Vec<usize>> = b.sets.iter().map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        }).collect();
        if sets.iter().all(|s| !s.is_empty()) {
            let mut idx = alloc::vec![0usize; k];
            let mut t: Vec<usize> = sets.iter().map(|s| s[0]).collect();
            'outer: loop {
                if hg.contains(&t) {
                    edge_mass += mu.tuple_weight(&t);
                }
                for i in (0..k).rev() {
                    idx[i] += 1;
                    if idx[i] < sets[i].len() {
                        t[i] = sets[i][idx[i]];
                        continue 'outer;
                    }
                    idx[i] = 0;
                    t[i] = sets[i][0];
                }
                break;
            }
        }
    } else {
        hg.for_each_edge(|t| {
            if t.iter().enumerate().all(|(i, &v)| member[i][v]) {
                edge_mass += mu.tuple_weight(t);
            }
        });
    }
    Ok(BoxDensity::from_masses(edge_mass, box_mass, mu.total()))
}
