use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypergraph::PartiteHypergraph;
use crate::measure::WeightedMeasure;
use crate::relation::Relation;

/// A hypergraph read as a binary relation between the product of the `left`
/// parts and the product of the `right` parts.
///
/// Side elements are ranked mixed-radix over the grouped parts in increasing
/// coordinate order, the smallest coordinate most significant. No data is copied.
#[derive(Clone, Debug)]
pub struct BinaryView<'a> {
    hg: &'a PartiteHypergraph,
    left: Vec<usize>,
    right: Vec<usize>,
    left_len: usize,
    right_len: usize,
}

/// Parses groupings such as `0|12` or `01|2`.
pub fn parse_grouping(s: &str, k: usize) -> Result<Vec<usize>> {
    let bad = || Error::InvalidGrouping(format!("cannot parse view `{s}`"));
    let (l, r) = s.split_once('|').ok_or_else(bad)?;
    let digits = |p: &str| -> Result<Vec<usize>> {
        p.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect()
    };
    let (mut l, mut r) = (digits(l)?, digits(r)?);
    l.sort_unstable();
    r.sort_unstable();
    let mut all: Vec<usize> = l.iter().chain(&r).copied().collect();
    all.sort_unstable();
    if all != (0..k).collect::<Vec<_>>() {
        return Err(bad());
    }
    Ok(l)
}

pub fn format_grouping(left: &[usize], k: usize) -> alloc::string::String {
    let mut s = alloc::string::String::new();
    for c in left {
        s.push_str(&format!("{c}"));
    }
    s.push('|');
    for c in (0..k).filter(|c| !left.contains(c)) {
        s.push_str(&format!("{c}"));
    }
    s
}

impl<'a> BinaryView<'a> {
    pub fn new(hg: &'a PartiteHypergraph, left: &[usize]) -> Result<Self> {
        let k = hg.arity();
        let mut left = left.to_vec();
        left.sort_unstable();
        left.dedup();
        if left.is_empty() || left.len() >= k || left.iter().any(|&c| c >= k) {
            return Err(Error::InvalidGrouping(format!("{left:?} for arity {k}")));
        }
        let right: Vec<usize> = (0..k).filter(|c| !left.contains(c)).collect();
        let side_len = |cs: &[usize]| cs.iter().map(|&c| hg.sizes()[c]).product();
        Ok(BinaryView { hg, left_len: side_len(&left), right_len: side_len(&right), left, right })
    }

    pub fn hypergraph(&self) -> &'a PartiteHypergraph {
        self.hg
    }

    pub fn left_coords(&self) -> &[usize] {
        &self.left
    }

    pub fn right_coords(&self) -> &[usize] {
        &self.right
    }

    pub fn left_len(&self) -> usize {
        self.left_len
    }

    pub fn right_len(&self) -> usize {
        self.right_len
    }

    fn spread(&self, coords: &[usize], mut r: usize, t: &mut [usize]) {
        for &c in coords.iter().rev() {
            let s = self.hg.sizes()[c];
            t[c] = r % s;
            r /= s;
        }
    }

    /// Reassembles the k-tuple of a (left, right) pair.
    pub fn tuple(&self, l: usize, r: usize) -> Vec<usize> {
        let mut t = vec![0; self.hg.arity()];
        self.spread(&self.left, l, &mut t);
        self.spread(&self.right, r, &mut t);
        t
    }

    /// Components of a left element, one per left coordinate.
    pub fn left_element(&self, l: usize) -> Vec<usize> {
        let t = self.tuple(l, 0);
        self.left.iter().map(|&c| t[c]).collect()
    }

    pub fn right_element(&self, r: usize) -> Vec<usize> {
        let t = self.tuple(0, r);
        self.right.iter().map(|&c| t[c]).collect()
    }

    pub fn contains(&self, l: usize, r: usize) -> bool {
        self.hg.contains(&self.tuple(l, r))
    }

    /// Materializes the view with uniform side weights.
    pub fn relation(&self) -> Relation {
        let mut t = vec![0; self.hg.arity()];
        Relation::from_fn(self.left_len, self.right_len, |l, r| {
            self.spread(&self.left, l, &mut t);
            self.spread(&self.right, r, &mut t);
            self.hg.contains(&t)
        })
    }

    /// Materializes the view with the side measures induced by `mu`.
    pub fn weighted_relation(&self, mu: &WeightedMeasure) -> Result<Relation> {
        mu.check_sizes(self.hg.sizes())?;
        self.relation().with_weights(mu.side(&self.left), mu.side(&self.right))
    }
}

/// Flattens `hg` into a binary view with the given left coordinates.
pub fn flatten<'a>(hg: &'a PartiteHypergraph, left: &[usize]) -> Result<BinaryView<'a>> {
    BinaryView::new(hg, left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{leq_eq_hypergraph, ternary_word_hypergraph};

    #[test]
    fn groupings() {
        let h = ternary_word_hypergraph(1).unwrap();
        let v = flatten(&h, &[0]).unwrap();
        assert_eq!((v.left_len(), v.right_len()), (3, 9));
        let v = flatten(&h, &[0, 1]).unwrap();
        assert_eq!((v.left_len(), v.right_len()), (9, 3));
        assert!(flatten(&h, &[]).is_err());
        assert!(flatten(&h, &[0, 1, 2]).is_err());
        assert_eq!(parse_grouping("01|2", 3).unwrap(), vec![0, 1]);
        assert_eq!(parse_grouping("2|01", 3).unwrap(), vec![2]);
        assert!(parse_grouping("0|1", 3).is_err());
        assert_eq!(format_grouping(&[1], 3), "1|02");
    }

    #[test]
    fn binary_identity_view() {
        let h = crate::families::half_graph(4).unwrap();
        let v = flatten(&h, &[0]).unwrap();
        let r = v.relation();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(r.contains(a, b), a < b);
            }
        }
    }

    #[test]
    fn view_membership_matches_tensor_exhaustively() {
        let h = leq_eq_hypergraph(5).unwrap();
        for left in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]] {
            let v = flatten(&h, &left).unwrap();
            let r = v.relation();
            for l in 0..v.left_len() {
                for rr in 0..v.right_len() {
                    let t = v.tuple(l, rr);
                    assert_eq!(r.contains(l, rr), h.contains(&t));
                }
            }
        }
    }
}
