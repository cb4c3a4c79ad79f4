use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Largest tuple count we are willing to materialize as a bit tensor.
pub const MAX_DENSE_TUPLES: usize = 1 << 30;

/// Generator descriptor for hypergraphs whose membership is computed on demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Ternary words of length `m`: see [`crate::families::ternary_word_hypergraph`].
    TernaryWords { m: usize },
}

#[derive(Clone, Debug)]
enum Storage {
    Dense(BitSet),
    /// Digits of every word, `m` per word, most significant first.
    TernaryWords { m: usize, digits: Vec<u8> },
}

/// A finite k-partite k-hypergraph `E ⊆ X_0 × … × X_{k-1}`.
///
/// Tuples are indexed by their mixed-radix rank with coordinate 0 most
/// significant: `rank(t) = Σ t_i · Π_{j>i} sizes[j]`.
#[derive(Clone, Debug)]
pub struct PartiteHypergraph {
    sizes: Vec<usize>,
    strides: Vec<usize>,
    storage: Storage,
}

fn strides_for(sizes: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }
    strides
}

fn check_shape(sizes: &[usize]) -> Result<usize> {
    if !(2..=4).contains(&sizes.len()) {
        return Err(Error::UnsupportedArity(sizes.len()));
    }
    if sizes.contains(&0) {
        return Err(Error::BadPartSizes(sizes.to_vec()));
    }
    let total = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .ok_or_else(|| Error::BadPartSizes(sizes.to_vec()))?;
    Ok(total)
}

impl PartiteHypergraph {
    /// Builds the hypergraph with exactly the listed edges; duplicates collapse.
    pub fn new(sizes: &[usize], edges: &[Vec<usize>]) -> Result<Self> {
        let total = check_shape(sizes)?;
        if total > MAX_DENSE_TUPLES {
            return Err(Error::BadPartSizes(sizes.to_vec()));
        }
        let strides = strides_for(sizes);
        let mut bits = BitSet::new(total);
        for e in edges {
            if e.len() != sizes.len() || e.iter().zip(sizes).any(|(&v, &s)| v >= s) {
                return Err(Error::InvalidEdge(e.clone()));
            }
            bits.insert(e.iter().zip(&strides).map(|(v, s)| v * s).sum());
        }
        Ok(PartiteHypergraph { sizes: sizes.to_vec(), strides, storage: Storage::Dense(bits) })
    }

    /// Materializes the relation `{t : pred(t)}`.
    pub fn from_predicate<F: FnMut(&[usize]) -> bool>(sizes: &[usize], mut pred: F) -> Result<Self> {
        let total = check_shape(sizes)?;
        if total > MAX_DENSE_TUPLES {
            return Err(Error::BadPartSizes(sizes.to_vec()));
        }
        let strides = strides_for(sizes);
        let mut bits = BitSet::new(total);
        let mut t = vec![0usize; sizes.len()];
        for r in 0..total {
            if pred(&t) {
                bits.insert(r);
            }
            advance(&mut t, sizes);
        }
        Ok(PartiteHypergraph { sizes: sizes.to_vec(), strides, storage: Storage::Dense(bits) })
    }

    pub(crate) fn ternary_words_lazy(m: usize) -> Self {
        let n = 3usize.pow(m as u32);
        let mut digits = vec![0u8; n * m];
        for w in 0..n {
            let mut x = w;
            for i in (0..m).rev() {
                digits[w * m + i] = (x % 3) as u8;
                x /= 3;
            }
        }
        let sizes = vec![n; 3];
        PartiteHypergraph {
            strides: strides_for(&sizes),
            sizes,
            storage: Storage::TernaryWords { m, digits },
        }
    }

    pub fn arity(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_tuples(&self) -> usize {
        self.sizes.iter().product()
    }

    /// `Some` for lazily evaluated families; such hypergraphs serialize as descriptors.
    pub fn family(&self) -> Option<Family> {
        match &self.storage {
            Storage::Dense(_) => None,
            Storage::TernaryWords { m, .. } => Some(Family::TernaryWords { m: *m }),
        }
    }

    pub fn rank(&self, t: &[usize]) -> usize {
        t.iter().zip(&self.strides).map(|(v, s)| v * s).sum()
    }

    pub fn unrank(&self, mut r: usize) -> Vec<usize> {
        let mut t = vec![0; self.arity()];
        for (i, s) in self.strides.iter().enumerate() {
            t[i] = r / s;
            r %= s;
        }
        t
    }

    pub fn in_range(&self, t: &[usize]) -> bool {
        t.len() == self.arity() && t.iter().zip(&self.sizes).all(|(&v, &s)| v < s)
    }

    /// Membership of an in-range tuple.
    #[inline]
    pub fn contains(&self, t: &[usize]) -> bool {
        match &self.storage {
            Storage::Dense(bits) => bits.contains(self.rank(t)),
            Storage::TernaryWords { m, digits } => {
                let (m, x, y, z) = (*m, t[0] * m, t[1] * m, t[2] * m);
                for i in 0..m {
                    let (a, b, c) = (digits[x + i], digits[y + i], digits[z + i]);
                    if a == b && b == c {
                        continue;
                    }
                    return a != b && b != c && a != c;
                }
                false
            }
        }
    }

    /// Calls `f` on every edge in rank order.
    pub fn for_each_edge<F: FnMut(&[usize])>(&self, mut f: F) {
        match &self.storage {
            Storage::Dense(bits) => {
                for r in bits.iter() {
                    f(&self.unrank(r));
                }
            }
            Storage::TernaryWords { .. } => {
                let mut t = vec![0usize; self.arity()];
                for _ in 0..self.total_tuples() {
                    if self.contains(&t) {
                        f(&t);
                    }
                    advance(&mut t, &self.sizes);
                }
            }
        }
    }

    pub fn edges(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each_edge(|t| out.push(t.to_vec()));
        out
    }

    pub fn edge_count(&self) -> usize {
        match &self.storage {
            Storage::Dense(bits) => bits.count(),
            Storage::TernaryWords { .. } => {
                let mut n = 0;
                self.for_each_edge(|_| n += 1);
                n
            }
        }
    }

    /// The fiber obtained by fixing some coordinates; remaining coordinates keep their order.
    pub fn slice(&self, fixed: &[(usize, usize)]) -> Result<PartiteHypergraph> {
        let k = self.arity();
        if fixed.is_empty() {
            return Err(Error::InvalidGrouping("slice fixes no coordinate".into()));
        }
        let mut pinned = vec![None; k];
        for &(c, v) in fixed {
            if c >= k || v >= self.sizes[c] {
                return Err(Error::OutOfRange(format!("slice coordinate {c}={v}")));
            }
            if pinned[c].replace(v).is_some() {
                return Err(Error::InvalidGrouping(format!("coordinate {c} fixed twice")));
            }
        }
        let free: Vec<usize> = (0..k).filter(|&c| pinned[c].is_none()).collect();
        if free.len() < 2 {
            return Err(Error::ArityUnderflow(free.len()));
        }
        let sizes: Vec<usize> = free.iter().map(|&c| self.sizes[c]).collect();
        let mut full: Vec<usize> = pinned.iter().map(|p| p.unwrap_or(0)).collect();
        PartiteHypergraph::from_predicate(&sizes, |t| {
            for (&c, &v) in free.iter().zip(t) {
                full[c] = v;
            }
            self.contains(&full)
        })
    }

    /// Induced sub-hypergraph on one subset per part. Vertices are relabeled in
    /// increasing order of their original index.
    pub fn induced(&self, subsets: &[Vec<usize>]) -> Result<PartiteHypergraph> {
        if subsets.len() != self.arity() {
            return Err(Error::Mismatch(format!(
                "{} subsets for arity {}",
                subsets.len(),
                self.arity()
            )));
        }
        let mut parts = Vec::with_capacity(subsets.len());
        for (i, s) in subsets.iter().enumerate() {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::EmptyPart(i));
            }
            if s.iter().any(|&v| v >= self.sizes[i]) {
                return Err(Error::OutOfRange(format!("subset of part {i}")));
            }
            parts.push(s);
        }
        let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
        let mut full = vec![0; self.arity()];
        PartiteHypergraph::from_predicate(&sizes, |t| {
            for (i, &v) in t.iter().enumerate() {
                full[i] = parts[i][v];
            }
            self.contains(&full)
        })
    }
}

/// Advances `t` to the next tuple in rank order (wrapping to zero).
pub(crate) fn advance(t: &mut [usize], sizes: &[usize]) {
    for i in (0..t.len()).rev() {
        t[i] += 1;
        if t[i] < sizes[i] {
            return;
        }
        t[i] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{half_graph, leq_eq_hypergraph, ternary_word_hypergraph};

    #[test]
    fn construction_examples() {
        let h = PartiteHypergraph::new(&[2, 2], &[]).unwrap();
        assert_eq!(h.edge_count(), 0);
        let lt: Vec<Vec<usize>> =
            (0..4).flat_map(|a| (a + 1..4).map(move |b| vec![a, b])).collect();
        let h = PartiteHypergraph::new(&[4, 4], &lt).unwrap();
        assert_eq!(h.edge_count(), 6);
        let dup = PartiteHypergraph::new(&[2, 2], &[vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(dup.edge_count(), 1);
        assert_eq!(ternary_word_hypergraph(1).unwrap().edge_count(), 6);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            PartiteHypergraph::new(&[2, 2], &[vec![2, 0]]).unwrap_err(),
            Error::InvalidEdge(vec![2, 0])
        );
        assert_eq!(PartiteHypergraph::new(&[2], &[]).unwrap_err(), Error::UnsupportedArity(1));
        assert_eq!(
            PartiteHypergraph::new(&[2; 5], &[]).unwrap_err(),
            Error::UnsupportedArity(5)
        );
        assert!(PartiteHypergraph::new(&[2, 0], &[]).is_err());
    }

    #[test]
    fn slice_examples() {
        // x ≤ y = z, n = 4, fix z = 2 (1-indexed) → {(1,2),(2,2)}
        let h = leq_eq_hypergraph(4).unwrap();
        let s = h.slice(&[(2, 1)]).unwrap();
        assert_eq!(s.edges(), vec![vec![0, 1], vec![1, 1]]);
        assert!(h.slice(&[]).is_err());
        assert_eq!(h.slice(&[(0, 0), (1, 0)]).unwrap_err(), Error::ArityUnderflow(1));
        let t = ternary_word_hypergraph(1).unwrap();
        assert_eq!(t.slice(&[(0, 0)]).unwrap().edges(), vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn induced_examples() {
        let h = half_graph(4).unwrap();
        let c = h.induced(&[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(c.edge_count(), 4);
        let e = h.induced(&[vec![2, 3], vec![0, 1]]).unwrap();
        assert_eq!(e.edge_count(), 0);
        let same = h.induced(&[(0..4).collect(), (0..4).collect()]).unwrap();
        assert_eq!(same.edges(), h.edges());
        assert_eq!(h.induced(&[vec![], vec![0]]).unwrap_err(), Error::EmptyPart(0));
    }

    #[test]
    fn lazy_ternary_matches_materialized() {
        let lazy = PartiteHypergraph::ternary_words_lazy(2);
        let dense = ternary_word_hypergraph(2).unwrap();
        assert_eq!(lazy.family(), Some(Family::TernaryWords { m: 2 }));
        assert_eq!(dense.family(), None);
        assert_eq!(lazy.edges(), dense.edges());
    }

    proptest::proptest! {
        #[test]
        fn rank_is_bijective(sizes in proptest::collection::vec(1usize..6, 2..=4), seed in 0usize..10_000) {
            let h = PartiteHypergraph::new(&sizes, &[]).unwrap();
            let r = seed % h.total_tuples();
            proptest::prop_assert_eq!(h.rank(&h.unrank(r)), r);
        }

        #[test]
        fn induced_edges_map_to_edges(n in 2usize..7, keep in proptest::collection::vec(proptest::bool::ANY, 14)) {
            let h = half_graph(n).unwrap();
            let pick = |off: usize| -> Vec<usize> {
                let mut s: Vec<usize> = (0..n).filter(|&i| keep[(i + off) % keep.len()]).collect();
                if s.is_empty() { s.push(0); }
                s
            };
            let (a, b) = (pick(0), pick(7));
            let g = h.induced(&[a.clone(), b.clone()]).unwrap();
            for e in g.edges() {
                proptest::prop_assert!(h.contains(&[a[e[0]], b[e[1]]]));
            }
        }
    }
}
