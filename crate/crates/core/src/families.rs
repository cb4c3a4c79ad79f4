//! Generators for the example families: half-graphs, `x ≤ y = z`, ternary
//! words, plus blow-ups, atomic measures and seeded random relations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::PartiteHypergraph;
use crate::measure::PartWeights;
use crate::rational::{ratio, Rational};
use crate::regularity::VertexPartition;

/// Largest word length accepted by [`ternary_word_hypergraph`].
pub const MAX_TERNARY_LEVEL: usize = 6;
/// Levels up to this one are materialized as a bit tensor.
pub const DENSE_TERNARY_LEVEL: usize = 3;

fn need_positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange(format!("{what} must be at least 1")));
    }
    Ok(())
}

/// `{(a, b) : a < b}` on two copies of `[n]`.
pub fn half_graph(n: usize) -> Result<PartiteHypergraph> {
    need_positive(n, "half-graph size")?;
    PartiteHypergraph::from_predicate(&[n, n], |t| t[0] < t[1])
}

/// `{(x, y, z) : x ≤ y = z}` on three copies of `[n]`.
pub fn leq_eq_hypergraph(n: usize) -> Result<PartiteHypergraph> {
    need_positive(n, "x ≤ y = z size")?;
    PartiteHypergraph::from_predicate(&[n, n, n], |t| t[0] <= t[1] && t[1] == t[2])
}

/// Digit `i` (0 most significant) of the base-3 word `w` of length `m`.
#[inline]
pub fn ternary_digit(m: usize, w: usize, i: usize) -> usize {
    (w / 3usize.pow((m - 1 - i) as u32)) % 3
}

/// Membership in the ternary-word relation: at the first position where the
/// three words do not all agree, their digits are pairwise distinct.
pub fn ternary_word_member(m: usize, x: usize, y: usize, z: usize) -> bool {
    for i in 0..m {
        let (a, b, c) = (ternary_digit(m, x, i), ternary_digit(m, y, i), ternary_digit(m, z, i));
        if a != b || b != c {
            return a != b && b != c && a != c;
        }
    }
    false
}

/// `v(x)`: the least position with a nonzero digit, `None` for the zero word.
pub fn ternary_valuation(m: usize, w: usize) -> Option<usize> {
    (0..m).find(|&i| ternary_digit(m, w, i) != 0)
}

/// The ternary-word hypergraph on `{0,1,2}^m`, words ranked big-endian.
pub fn ternary_word_hypergraph(m: usize) -> Result<PartiteHypergraph> {
    if !(1..=MAX_TERNARY_LEVEL).contains(&m) {
        return Err(Error::OutOfRange(format!("ternary level {m} outside 1..={MAX_TERNARY_LEVEL}")));
    }
    if m > DENSE_TERNARY_LEVEL {
        return Ok(PartiteHypergraph::ternary_words_lazy(m));
    }
    let n = 3usize.pow(m as u32);
    PartiteHypergraph::from_predicate(&[n, n, n], |t| ternary_word_member(m, t[0], t[1], t[2]))
}

/// `(1 − 9^{−m}) / 4`.
pub fn ternary_density(m: usize) -> Rational {
    let p = 9u128.pow(m as u32);
    Rational::new(p - 1, 4 * p)
}

/// Partition of `3^m` words into the `3^ℓ` prefix cylinders `[s]`; class of `w`
/// is `1 + w / 3^{m−ℓ}` and the error class is empty.
pub fn prefix_partition(m: usize, level: usize, part: usize) -> Result<VertexPartition> {
    if level > m {
        return Err(Error::OutOfRange(format!("prefix length {level} exceeds word length {m}")));
    }
    let n = 3usize.pow(m as u32);
    let width = 3usize.pow((m - level) as u32);
    VertexPartition::new(part, 3usize.pow(level as u32) + 1, (0..n).map(|w| 1 + w / width).collect())
}

/// Replaces vertex `v` of part `i` by `factors[i][v]` consecutive copies.
pub fn blowup(hg: &PartiteHypergraph, factors: &[Vec<usize>]) -> Result<PartiteHypergraph> {
    let proj = blowup_projection(hg, factors)?;
    let sizes: Vec<usize> = proj.iter().map(Vec::len).collect();
    let mut orig = vec![0usize; hg.arity()];
    PartiteHypergraph::from_predicate(&sizes, |t| {
        for (i, &v) in t.iter().enumerate() {
            orig[i] = proj[i][v];
        }
        hg.contains(&orig)
    })
}

/// For each part, the original vertex behind every copy produced by [`blowup`].
pub fn blowup_projection(hg: &PartiteHypergraph, factors: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    if factors.len() != hg.arity() {
        return Err(Error::Mismatch(format!("{} factor lists for arity {}", factors.len(), hg.arity())));
    }
    let mut out = Vec::with_capacity(factors.len());
    for (i, f) in factors.iter().enumerate() {
        if f.len() != hg.sizes()[i] {
            return Err(Error::Mismatch(format!("factor list of part {i} has wrong length")));
        }
        if f.contains(&0) {
            return Err(Error::OutOfRange("blow-up factors must be at least 1".into()));
        }
        out.push(f.iter().enumerate().flat_map(|(v, &c)| core::iter::repeat_n(v, c)).collect());
    }
    Ok(out)
}

/// Atom weights proportional to the given positive rationals.
pub fn atomic_measure(n: usize, weights: &[Rational]) -> Result<PartWeights> {
    if weights.len() != n {
        return Err(Error::InvalidMeasure(format!("{} weights for a part of size {n}", weights.len())));
    }
    if weights.iter().any(|w| *w.numer() == 0) {
        return Err(Error::InvalidMeasure("atom weights must be positive".into()));
    }
    let sum = weights.iter().fold(ratio(0, 1), |a, w| a + w);
    let normalized: Vec<Rational> = weights.iter().map(|w| w / sum).collect();
    PartWeights::from_rationals(&normalized)
}

/// Blob weights `1/2, 1/8, 1/8, 1/32, 1/32, …` on the first `n − 1` atoms, the
/// last atom taking what remains.
pub fn blob_weights(n: usize) -> Result<Vec<Rational>> {
    need_positive(n, "blob part size")?;
    if n > 60 {
        return Err(Error::OutOfRange("blob weights support at most 60 atoms".into()));
    }
    let mut w = Vec::with_capacity(n);
    for i in 0..n - 1 {
        let e = if i == 0 { 1 } else { 2 * i.div_ceil(2) + 1 };
        w.push(ratio(1, 1u128 << e));
    }
    let used = w.iter().fold(ratio(0, 1), |a, x| a + x);
    w.push(ratio(1, 1) - used);
    Ok(w)
}

fn bernoulli(rng: &mut ChaCha8Rng, p: &Rational) -> bool {
    if p.numer() >= p.denom() {
        return true;
    }
    rng.random_range(0..*p.denom()) < *p.numer()
}

fn check_probability(p: &Rational) -> Result<()> {
    if p.numer() > p.denom() {
        return Err(Error::OutOfRange(format!("probability {p} exceeds 1")));
    }
    Ok(())
}

/// Seeded random relation on `left × right`, each pair present with probability `p`.
pub fn random_bipartite_sized(left: usize, right: usize, p: Rational, seed: u64) -> Result<PartiteHypergraph> {
    random_hypergraph(&[left, right], p, seed)
}

/// Seeded random relation on `[n] × [n]`.
pub fn random_bipartite(n: usize, p: Rational, seed: u64) -> Result<PartiteHypergraph> {
    random_bipartite_sized(n, n, p, seed)
}

/// Seeded random k-partite hypergraph; tuples are drawn in rank order.
pub fn random_hypergraph(sizes: &[usize], p: Rational, seed: u64) -> Result<PartiteHypergraph> {
    check_probability(&p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PartiteHypergraph::from_predicate(sizes, |_| bernoulli(&mut rng, &p))
}
