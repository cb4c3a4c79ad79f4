//! Exact per-part probability weights and the product measures they induce.
//!
//! Each part stores integer numerators over one common denominator, so sums
//! over sets are integer additions and only the final value becomes a
//! [`Rational`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Product of all part denominators must stay below this, so that any sum of
/// products of weights fits in a `u128`.
const MAX_TOTAL_BITS: u32 = 120;

/// Probability weights on one part: `w[v] = num[v] / total`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartWeights {
    num: Vec<u128>,
    total: u128,
    uniform: bool,
}

impl PartWeights {
    pub fn uniform(n: usize) -> Self {
        PartWeights { num: vec![1; n], total: n as u128, uniform: true }
    }

    /// Weights given as exact rationals; they must sum to exactly 1.
    pub fn from_rationals(ws: &[Rational]) -> Result<Self> {
        if ws.is_empty() {
            return Err(Error::InvalidMeasure("empty part".into()));
        }
        let mut den: u128 = 1;
        for w in ws {
            den = den.lcm(w.denom());
            if den >= 1u128 << MAX_TOTAL_BITS {
                return Err(Error::InvalidMeasure("denominators too large".into()));
            }
        }
        let num: Vec<u128> = ws.iter().map(|w| w.numer() * (den / w.denom())).collect();
        let sum: u128 = num.iter().sum();
        if sum != den {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {}/{} instead of 1",
                sum, den
            )));
        }
        Ok(Self::from_integer_weights(num))
    }

    /// Weights proportional to the given nonnegative integers (not all zero).
    pub fn from_integer_weights(num: Vec<u128>) -> Self {
        let total: u128 = num.iter().sum();
        assert!(total > 0, "all weights are zero");
        let g = num.iter().fold(total, |g, &w| g.gcd(&w));
        let num: Vec<u128> = num.into_iter().map(|w| w / g).collect();
        let total = total / g;
        let uniform = num.iter().all(|&w| w == 1);
        PartWeights { num, total, uniform }
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn numerators(&self) -> &[u128] {
        &self.num
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn weight(&self, v: usize) -> Rational {
        Rational::new(self.num[v], self.total)
    }

    pub fn sum_of(&self, vs: &[usize]) -> u128 {
        vs.iter().map(|&v| self.num[v]).sum()
    }

    /// Restriction to a subset, renormalized to total mass 1.
    pub fn restrict(&self, vs: &[usize]) -> Result<Self> {
        let num: Vec<u128> = vs.iter().map(|&v| self.num[v]).collect();
        if num.iter().all(|&w| w == 0) {
            return Err(Error::DegenerateSet);
        }
        Ok(Self::from_integer_weights(num))
    }
}

/// A product measure on `X_0 × … × X_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMeasure {
    parts: Vec<PartWeights>,
}

impl WeightedMeasure {
    pub fn uniform(sizes: &[usize]) -> Self {
        WeightedMeasure { parts: sizes.iter().map(|&n| PartWeights::uniform(n)).collect() }
    }

    pub fn new(parts: Vec<PartWeights>) -> Result<Self> {
        let mut bits = 0u32;
        for p in &parts {
            bits += 128 - p.total.leading_zeros();
        }
        if bits > MAX_TOTAL_BITS {
            return Err(Error::InvalidMeasure("product of denominators too large".into()));
        }
        Ok(WeightedMeasure { parts })
    }

    /// Checks that the measure fits a hypergraph with the given part sizes.
    pub fn check_sizes(&self, sizes: &[usize]) -> Result<()> {
        if self.parts.len() != sizes.len()
            || self.parts.iter().zip(sizes).any(|(p, &s)| p.len() != s)
        {
            return Err(Error::Mismatch("measure does not match part sizes".into()));
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, i: usize) -> &PartWeights {
        &self.parts[i]
    }

    pub fn parts(&self) -> &[PartWeights] {
        &self.parts
    }

    pub fn replace_part(&mut self, i: usize, w: PartWeights) -> Result<()> {
        if w.len() != self.parts[i].len() {
            return Err(Error::Mismatch(format!("part {i} has {} vertices", self.parts[i].len())));
        }
        self.parts[i] = w;
        Self::new(core::mem::take(&mut self.parts)).map(|m| *self = m)
    }

    pub fn is_uniform(&self) -> bool {
        self.parts.iter().all(PartWeights::is_uniform)
    }

    /// Integer weight of a full tuple, over [`Self::total`].
    #[inline]
    pub fn tuple_weight(&self, t: &[usize]) -> u128 {
        t.iter().zip(&self.parts).map(|(&v, p)| p.num[v]).product()
    }

    /// Common denominator of tuple weights.
    pub fn total(&self) -> u128 {
        self.parts.iter().map(|p| p.total).product()
    }

    /// Exact measure of the box `B_0 × … × B_{k-1}`.
    pub fn box_measure(&self, sets: &[Vec<usize>]) -> Rational {
        let num: u128 = sets.iter().zip(&self.parts).map(|(s, p)| p.sum_of(s)).product();
        Rational::new(num, self.total())
    }

    /// Measure on the product of the parts in `coords` (ascending, first most significant).
    pub fn side(&self, coords: &[usize]) -> SideWeights {
        let sizes: Vec<usize> = coords.iter().map(|&c| self.parts[c].len()).collect();
        let len: usize = sizes.iter().product();
        let total: u128 = coords.iter().map(|&c| self.parts[c].total).product();
        if coords.iter().all(|&c| self.parts[c].uniform) {
            return SideWeights { len, total, num: None };
        }
        let mut num = vec![0u128; len];
        let mut t = vec![0usize; coords.len()];
        for w in num.iter_mut() {
            *w = coords.iter().zip(&t).map(|(&c, &v)| self.parts[c].num[v]).product();
            crate::hypergraph::advance(&mut t, &sizes);
        }
        SideWeights { len, total, num: Some(num) }
    }

    /// Measure on the remaining parts after dropping `coords`.
    pub fn without(&self, coords: &[usize]) -> WeightedMeasure {
        WeightedMeasure {
            parts: (0..self.parts.len())
                .filter(|c| !coords.contains(c))
                .map(|c| self.parts[c].clone())
                .collect(),
        }
    }

    /// Measure on an induced sub-hypergraph, renormalized per part.
    pub fn restrict(&self, subsets: &[Vec<usize>]) -> Result<WeightedMeasure> {
        let parts = self
            .parts
            .iter()
            .zip(subsets)
            .map(|(p, s)| {
                let mut s = s.clone();
                s.sort_unstable();
                s.dedup();
                p.restrict(&s)
            })
            .collect::<Result<Vec<_>>>()?;
        WeightedMeasure::new(parts)
    }
}

/// Integer weights on the elements of one side of a binary view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideWeights {
    len: usize,
    total: u128,
    /// `None` means every element has weight 1.
    num: Option<Vec<u128>>,
}

impl SideWeights {
    pub fn uniform(len: usize) -> Self {
        SideWeights { len, total: len as u128, num: None }
    }

    pub fn from_part(p: &PartWeights) -> Self {
        SideWeights {
            len: p.len(),
            total: p.total,
            num: if p.uniform { None } else { Some(p.num.clone()) },
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn is_uniform(&self) -> bool {
        self.num.is_none()
    }

    #[inline]
    pub fn weight(&self, i: usize) -> u128 {
        match &self.num {
            None => 1,
            Some(w) => w[i],
        }
    }

    /// Integer mass of a set, over [`Self::total`].
    pub fn mass(&self, s: &BitSet) -> u128 {
        match &self.num {
            None => s.count() as u128,
            Some(w) => s.iter().map(|i| w[i]).sum(),
        }
    }

    /// Integer mass of `a ∩ b`.
    pub fn mass_and(&self, a: &BitSet, b: &BitSet) -> u128 {
        match &self.num {
            None => a.and_count(b) as u128,
            Some(_) => self.mass(&a.and(b)),
        }
    }

    pub fn measure(&self, s: &BitSet) -> Rational {
        Rational::new(self.mass(s), self.total)
    }

    /// Elements of positive weight.
    pub fn support(&self) -> BitSet {
        match &self.num {
            None => BitSet::full(self.len),
            Some(w) => BitSet::from_indices(self.len, (0..self.len).filter(|&i| w[i] > 0)),
        }
    }

    pub fn restricted_to(&self, keep: &[usize]) -> SideWeights {
        match &self.num {
            None => SideWeights::uniform(keep.len()),
            Some(w) => {
                let num: Vec<u128> = keep.iter().map(|&i| w[i]).collect();
                SideWeights { len: keep.len(), total: num.iter().sum::<u128>().max(1), num: Some(num) }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn rational_weights_sum_to_one() {
        let p = PartWeights::from_rationals(&[ratio(1, 2), ratio(1, 4), ratio(1, 4)]).unwrap();
        assert_eq!(p.total(), 4);
        assert_eq!(p.weight(0), ratio(1, 2));
        assert!(PartWeights::from_rationals(&[ratio(1, 2), ratio(1, 3)]).is_err());
    }

    #[test]
    fn box_measure_is_product() {
        let m = WeightedMeasure::new(vec![
            PartWeights::from_rationals(&[ratio(1, 2), ratio(1, 8), ratio(1, 8), ratio(1, 4)]).unwrap(),
            PartWeights::uniform(3),
        ])
        .unwrap();
        assert_eq!(m.box_measure(&[vec![0, 3], vec![1, 2]]), ratio(3, 4) * ratio(2, 3));
    }

    proptest::proptest! {
        // Fubini: μ(box) = Σ_{left element} w(l) · μ(right sub-box)
        #[test]
        fn finitary_fubini(ws in proptest::collection::vec(proptest::collection::vec(1u128..5, 1..4), 3),
                           masks in proptest::collection::vec(0u8..16, 3)) {
            let parts: Vec<PartWeights> = ws.iter().map(|w| PartWeights::from_integer_weights(w.clone())).collect();
            let m = WeightedMeasure::new(parts).unwrap();
            let sets: Vec<Vec<usize>> = ws.iter().zip(&masks)
                .map(|(w, &mask)| (0..w.len()).filter(|&i| mask >> i & 1 == 1).collect())
                .collect();
            let whole = m.box_measure(&sets);
            let rest = m.without(&[0]);
            let sub = rest.box_measure(&sets[1..]);
            let mut acc = Rational::new(0, 1);
            for &v in &sets[0] {
                acc += m.part(0).weight(v) * sub;
            }
            proptest::prop_assert_eq!(whole, acc);
        }
    }
}
