use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fibers::FiberCombination;
use crate::measure::PartWeights;
use crate::rational::{parse_rational, Rational};

/// A partition `X_i = A_0 ⊔ A_1 ⊔ … ⊔ A_{N'-1}` of one part, with `A_0` the
/// (possibly empty) error class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    pub part: usize,
    /// `N'`, counting the error slot.
    pub num_classes: usize,
    pub assignment: Vec<usize>,
    /// Fiber combination that produced each class, when known.
    pub provenance: Option<Vec<Option<FiberCombination>>>,
}

impl VertexPartition {
    pub fn new(part: usize, num_classes: usize, assignment: Vec<usize>) -> Result<Self> {
        let p = VertexPartition { part, num_classes, assignment, provenance: None };
        p.validate(p.assignment.len())?;
        Ok(p)
    }

    /// Every vertex in class 1.
    pub fn trivial(part: usize, n: usize) -> Self {
        VertexPartition { part, num_classes: 2, assignment: vec![1; n], provenance: None }
    }

    /// Vertex `v` in class `v + 1`.
    pub fn singletons(part: usize, n: usize) -> Self {
        VertexPartition { part, num_classes: n + 1, assignment: (1..=n).collect(), provenance: None }
    }

    /// Builds a partition from disjoint classes `1..`; uncovered vertices go to class 0.
    pub fn from_classes(part: usize, n: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = vec![0usize; n];
        for (t, c) in classes.iter().enumerate() {
            for &v in c {
                if v >= n {
                    return Err(Error::OutOfRange(format!("vertex {v} of part {part}")));
                }
                if assignment[v] != 0 {
                    return Err(Error::Mismatch(format!("vertex {v} assigned twice")));
                }
                assignment[v] = t + 1;
            }
        }
        Ok(VertexPartition { part, num_classes: classes.len() + 1, assignment, provenance: None })
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.num_classes == 0 {
            return Err(Error::Mismatch("a partition needs at least one class slot".into()));
        }
        if self.assignment.len() != n {
            return Err(Error::Mismatch(format!(
                "partition of part {} covers {} vertices, expected {n}",
                self.part,
                self.assignment.len()
            )));
        }
        if let Some(&c) = self.assignment.iter().find(|&&c| c >= self.num_classes) {
            return Err(Error::Mismatch(format!("class {c} out of range in part {}", self.part)));
        }
        if let Some(p) = &self.provenance {
            if p.len() != self.num_classes {
                return Err(Error::Mismatch("provenance length differs from class count".into()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn class(&self, t: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&v| self.assignment[v] == t).collect()
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn error_class(&self) -> Vec<usize> {
        self.class(0)
    }

    pub fn has_error(&self) -> bool {
        self.assignment.contains(&0)
    }

    /// Number of nonempty classes, the error class included.
    pub fn nonempty_classes(&self) -> usize {
        let mut seen = vec![false; self.num_classes];
        for &c in &self.assignment {
            seen[c] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }

    pub fn class_mass(&self, w: &PartWeights) -> Vec<u128> {
        let mut m = vec![0u128; self.num_classes];
        for (v, &c) in self.assignment.iter().enumerate() {
            m[c] += w.numerators()[v];
        }
        m
    }

    /// Common refinement; class 0 of the result is the union of both error classes.
    pub fn intersect(&self, other: &VertexPartition) -> Result<VertexPartition> {
        if self.assignment.len() != other.assignment.len() {
            return Err(Error::Mismatch("intersecting partitions of different parts".into()));
        }
        let mut ids = alloc::collections::BTreeMap::new();
        let mut assignment = Vec::with_capacity(self.assignment.len());
        for (&a, &b) in self.assignment.iter().zip(&other.assignment) {
            if a == 0 || b == 0 {
                assignment.push(0);
                continue;
            }
            let next = ids.len() + 1;
            assignment.push(*ids.entry((a, b)).or_insert(next));
        }
        Ok(VertexPartition { part: self.part, num_classes: ids.len() + 1, assignment, provenance: None })
    }

    /// Renumbers classes `1..` by decreasing mass (ties by first vertex), dropping
    /// empty classes. Provenance follows its class.
    pub fn renumber_by_mass(&self, w: &PartWeights) -> VertexPartition {
        let mass = self.class_mass(w);
        let mut first = vec![usize::MAX; self.num_classes];
        for (v, &c) in self.assignment.iter().enumerate() {
            first[c] = first[c].min(v);
        }
        let mut order: Vec<usize> = (1..self.num_classes).filter(|&c| first[c] != usize::MAX).collect();
        order.sort_by(|&a, &b| mass[b].cmp(&mass[a]).then(first[a].cmp(&first[b])));
        let mut map = vec![0usize; self.num_classes];
        for (i, &c) in order.iter().enumerate() {
            map[c] = i + 1;
        }
        let provenance = self.provenance.as_ref().map(|p| {
            let mut q = vec![p[0].clone()];
            q.extend(order.iter().map(|&c| p[c].clone()));
            q
        });
        VertexPartition {
            part: self.part,
            num_classes: order.len() + 1,
            assignment: self.assignment.iter().map(|&c| map[c]).collect(),
            provenance,
        }
    }
}

/// A rectangle `left × right` inside a product of two parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rectangle {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// A partition of `X_p × X_q` with class 0 as the error class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairPartition {
    pub parts: (usize, usize),
    pub sizes: (usize, usize),
    pub num_classes: usize,
    /// Class of `(x, y)` at index `x · sizes.1 + y`.
    pub assignment: Vec<usize>,
    /// Rectangle decomposition of each class, when known.
    pub rectangles: Option<Vec<Vec<Rectangle>>>,
}

impl PairPartition {
    /// The product partition whose classes are `P × Q` for classes `P` of `a` and `Q` of `b`.
    /// A pair touching either error class lands in class 0.
    pub fn from_rectangles(a: &VertexPartition, b: &VertexPartition) -> PairPartition {
        let (na, nb) = (a.assignment.len(), b.assignment.len());
        let cols = b.num_classes - 1;
        let class_of = |ca: usize, cb: usize| if ca == 0 || cb == 0 { 0 } else { (ca - 1) * cols + cb };
        let mut assignment = Vec::with_capacity(na * nb);
        for x in 0..na {
            for y in 0..nb {
                assignment.push(class_of(a.assignment[x], b.assignment[y]));
            }
        }
        let num_classes = (a.num_classes - 1) * cols + 1;
        let ac = a.classes();
        let bc = b.classes();
        let mut rects = vec![Vec::new(); num_classes];
        #[allow(clippy::needless_range_loop)]
        for ca in 1..a.num_classes {
            for cb in 1..b.num_classes {
                if !ac[ca].is_empty() && !bc[cb].is_empty() {
                    rects[class_of(ca, cb)].push(Rectangle { left: ac[ca].clone(), right: bc[cb].clone() });
                }
            }
        }
        #[allow(clippy::needless_range_loop)]
        for ca in 0..a.num_classes {
            for cb in 0..b.num_classes {
                if (ca == 0 || cb == 0) && !ac[ca].is_empty() && !bc[cb].is_empty() {
                    rects[0].push(Rectangle { left: ac[ca].clone(), right: bc[cb].clone() });
                }
            }
        }
        PairPartition {
            parts: (a.part, b.part),
            sizes: (na, nb),
            num_classes,
            assignment,
            rectangles: Some(rects),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.parts.0 >= self.parts.1 {
            return Err(Error::Mismatch("pair partition parts must be increasing".into()));
        }
        if self.assignment.len() != self.sizes.0 * self.sizes.1 {
            return Err(Error::Mismatch("pair partition does not cover the product".into()));
        }
        if self.num_classes == 0 || self.assignment.iter().any(|&c| c >= self.num_classes) {
            return Err(Error::Mismatch("pair partition class out of range".into()));
        }
        if let Some(rects) = &self.rectangles {
            if rects.len() != self.num_classes {
                return Err(Error::Mismatch("rectangle list length differs from class count".into()));
            }
            let mut covered = vec![usize::MAX; self.assignment.len()];
            for (c, rs) in rects.iter().enumerate() {
                for r in rs {
                    for &x in &r.left {
                        for &y in &r.right {
                            if x >= self.sizes.0 || y >= self.sizes.1 {
                                return Err(Error::OutOfRange(format!("rectangle cell ({x}, {y})")));
                            }
                            let i = x * self.sizes.1 + y;
                            if covered[i] != usize::MAX || self.assignment[i] != c {
                                return Err(Error::Mismatch(format!(
                                    "rectangles of class {c} do not reproduce the class"
                                )));
                            }
                            covered[i] = c;
                        }
                    }
                }
            }
            if covered.contains(&usize::MAX) {
                return Err(Error::Mismatch("rectangles do not cover the product".into()));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn class_of(&self, x: usize, y: usize) -> usize {
        self.assignment[x * self.sizes.1 + y]
    }
}

/// A tolerance schedule `f: ℕ → (0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecayFunction {
    Constant(Rational),
    /// `1 / (n + 1)`
    Reciprocal,
    /// `1 / 2^n`
    Exponential,
    /// `table[n]`, holding the last entry beyond the end.
    Table(Vec<Rational>),
}

impl DecayFunction {
    pub fn constant(r: Rational) -> Result<Self> {
        let f = DecayFunction::Constant(r);
        f.check()?;
        Ok(f)
    }

    pub fn check(&self) -> Result<()> {
        let ok = |r: &Rational| *r.numer() > 0 && r.numer() <= r.denom();
        match self {
            DecayFunction::Constant(r) if !ok(r) => {
                Err(Error::OutOfRange(format!("decay value {r} outside (0, 1]")))
            }
            DecayFunction::Table(t) if t.is_empty() || !t.iter().all(ok) => {
                Err(Error::OutOfRange("decay table must be nonempty with values in (0, 1]".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, n: usize) -> Rational {
        match self {
            DecayFunction::Constant(r) => *r,
            DecayFunction::Reciprocal => Rational::new(1, n as u128 + 1),
            DecayFunction::Exponential => Rational::new(1, 1u128 << n.min(126)),
            DecayFunction::Table(t) => t[n.min(t.len() - 1)],
        }
    }

    /// Parses `const:p/q`, `reciprocal`, `exp`, or `table:p/q,p/q,…`.
    pub fn parse(s: &str) -> Result<Self> {
        let f = match s.split_once(':') {
            Some(("const", r)) => DecayFunction::Constant(parse_rational(r)?),
            Some(("table", t)) => {
                DecayFunction::Table(t.split(',').map(|x| parse_rational(x.trim())).collect::<Result<_>>()?)
            }
            None if s == "reciprocal" => DecayFunction::Reciprocal,
            None if s == "exp" => DecayFunction::Exponential,
            _ => return Err(Error::OutOfRange(format!("unknown decay function `{s}`"))),
        };
        f.check()?;
        Ok(f)
    }

    pub fn describe(&self) -> String {
        match self {
            DecayFunction::Constant(r) => format!("const:{}", crate::rational::format_rational(r)),
            DecayFunction::Reciprocal => "reciprocal".into(),
            DecayFunction::Exponential => "exp".into(),
            DecayFunction::Table(t) => {
                let parts: Vec<String> = t.iter().map(crate::rational::format_rational).collect();
                format!("table:{}", parts.join(","))
            }
        }
    }
}
