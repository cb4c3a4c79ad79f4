use alloc::format;
use alloc::vec::Vec;

use super::partition::VertexPartition;
use crate::error::{Error, Result};
use crate::measure::WeightedMeasure;
use crate::rational::{ratio, Rational};

/// How to dissolve the error class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Redistribution {
    /// Class 1 absorbs class 0.
    Merge,
    /// Class 0 is split into pieces `A^t_0` with `μ(A^t_0) ≤ 2ε′ μ(A_t)`.
    Proportional(Rational),
}

/// Density tolerance after merging: if boxes had density in
/// `[0, f) ∪ (1 − f, 1]` and each error class has measure at most `ε` times
/// class 1, merged boxes grow by a factor at most `(1 + ε)^k` and their density
/// lies in `[0, ε′) ∪ (1 − ε′, 1]` for `ε′ = 1 − (1 − f) / (1 + ε)^k`.
pub fn merge_error_bound(eps: &Rational, f: &Rational, k: usize) -> Rational {
    let one = ratio(1, 1);
    let grow = (0..k).fold(one, |acc, _| acc * (one + eps));
    let keep = if *f >= one { ratio(0, 1) } else { (one - f) / grow };
    one - keep
}

/// Density tolerance after a proportional split with parameter `ε′`: `(2k + 1) ε′`.
pub fn proportional_error_bound(eps_prime: &Rational, k: usize) -> Rational {
    ratio(2 * k as u128 + 1, 1) * eps_prime
}

fn merge(p: &VertexPartition) -> VertexPartition {
    let num_classes = p.num_classes.max(2);
    VertexPartition {
        part: p.part,
        num_classes,
        assignment: p.assignment.iter().map(|&c| if c == 0 { 1 } else { c }).collect(),
        provenance: None,
    }
}

fn proportional(p: &VertexPartition, mu: &WeightedMeasure, eps_prime: &Rational) -> Result<VertexPartition> {
    let w = mu.part(p.part).numerators();
    let mass = p.class_mass(mu.part(p.part));
    let (num, den) = (*eps_prime.numer(), *eps_prime.denom());
    let mut added = alloc::vec![0u128; p.num_classes];
    let mut assignment = p.assignment.clone();
    let mut t = 1;
    for v in 0..assignment.len() {
        if assignment[v] != 0 {
            continue;
        }
        // piece + w ≤ 2ε′ · μ(A_t)
        while t < p.num_classes && (added[t] + w[v]) * den > 2 * num * mass[t] {
            t += 1;
        }
        if t >= p.num_classes {
            return Err(Error::Infeasible(format!("error class of part {} does not fit", p.part)));
        }
        added[t] += w[v];
        assignment[v] = t;
    }
    Ok(VertexPartition { part: p.part, num_classes: p.num_classes, assignment, provenance: None })
}

/// Removes the error class from every partition.
pub fn redistribute_error(
    parts: &[VertexPartition],
    mu: &WeightedMeasure,
    strategy: &Redistribution,
) -> Result<Vec<VertexPartition>> {
    if let Redistribution::Proportional(e) = strategy {
        if *e >= ratio(1, 2) {
            return Err(Error::Infeasible(format!("ε′ = {e} must be below 1/2")));
        }
    }
    parts
        .iter()
        .map(|p| {
            p.validate(mu.part(p.part).len())?;
            match strategy {
                Redistribution::Merge => Ok(merge(p)),
                Redistribution::Proportional(e) => proportional(p, mu, e),
            }
        })
        .collect()
}
