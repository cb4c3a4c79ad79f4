use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::relation::Relation;

/// Disjoint pairs `(U_i, V_i)` covering both sides with
/// `A ∩ (U_i × Y) = A ∩ (X × V_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetrization {
    pub components: Vec<(Vec<usize>, Vec<usize>)>,
    pub left_assignment: Vec<usize>,
    pub right_assignment: Vec<usize>,
}

impl Symmetrization {
    /// Exact check of the defining equality for every component.
    pub fn check(&self, a: &Relation) -> bool {
        (0..a.left_len()).all(|x| {
            a.left_fiber(x).iter().all(|y| self.left_assignment[x] == self.right_assignment[y])
        })
    }
}

/// Connected components of the bipartite support graph of `A`; vertices
/// without edges form one extra component at the end.
pub fn local_symmetrize(a: &Relation) -> Result<Symmetrization> {
    let (lw, rw) = (a.left_weights(), a.right_weights());
    let positive = (0..a.left_len()).any(|x| lw.weight(x) > 0 && a.left_fiber(x).iter().any(|y| rw.weight(y) > 0));
    if !positive {
        return Err(Error::DegenerateSet);
    }
    const UNSET: usize = usize::MAX;
    let mut left = vec![UNSET; a.left_len()];
    let mut right = vec![UNSET; a.right_len()];
    let mut components = Vec::new();
    for start in 0..a.left_len() {
        if left[start] != UNSET || a.left_fiber(start).is_empty() {
            continue;
        }
        let id = components.len();
        let (mut us, mut vs) = (Vec::new(), Vec::new());
        let mut queue = VecDeque::from([(true, start)]);
        left[start] = id;
        while let Some((is_left, v)) = queue.pop_front() {
            if is_left {
                us.push(v);
                for y in a.left_fiber(v).iter() {
                    if right[y] == UNSET {
                        right[y] = id;
                        queue.push_back((false, y));
                    }
                }
            } else {
                vs.push(v);
                for x in a.right_fiber(v).iter() {
                    if left[x] == UNSET {
                        left[x] = id;
                        queue.push_back((true, x));
                    }
                }
            }
        }
        us.sort_unstable();
        vs.sort_unstable();
        components.push((us, vs));
    }
    let iso_l: Vec<usize> = (0..a.left_len()).filter(|&x| left[x] == UNSET).collect();
    let iso_r: Vec<usize> = (0..a.right_len()).filter(|&y| right[y] == UNSET).collect();
    if !iso_l.is_empty() || !iso_r.is_empty() {
        let id = components.len();
        for &x in &iso_l {
            left[x] = id;
        }
        for &y in &iso_r {
            right[y] = id;
        }
        components.push((iso_l, iso_r));
    }
    Ok(Symmetrization { components, left_assignment: left, right_assignment: right })
}
