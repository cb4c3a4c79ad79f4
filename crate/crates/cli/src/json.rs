//! JSON forms of witnesses, partitions, reports and stability profiles.
//! Every rational is written as a `p/q` string.

use serde::{Deserialize, Serialize};
use stablereg_core::fibers::FiberTerm;
use stablereg_core::rational::{format_rational, parse_rational};
use stablereg_core::regularity::{
    BoxReport, ClassDecency, DecayFunction, ErrorCheck, PairPartition, Rectangle, RegularityReport, SigmaSets,
    Variant, VertexPartition,
};
use stablereg_core::witness::{
    Direction, LadderWitness, MuLadderWitness, ProfileEntry, StabilityProfile, StabilityValue, TreeWitness,
};
use stablereg_core::{FiberCombination, Rational};

use crate::error::CliError;

pub fn rat(r: &Rational) -> String {
    format_rational(r)
}

pub fn parse_rat(s: &str) -> Result<Rational, CliError> {
    Ok(parse_rational(s)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    /// `ladder`, `tree` or `mu-ladder`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub view: Option<String>,
    pub height: usize,
    /// Ladder `a_i`, tree leaves, or the least element of each μ-ladder cell.
    pub left: Vec<usize>,
    /// Ladder `b_j` or internal tree nodes.
    pub right: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<Vec<usize>>>,
}

impl WitnessJson {
    pub fn ladder(w: &LadderWitness, view: Option<&str>) -> Self {
        WitnessJson {
            kind: "ladder".into(),
            view: view.map(String::from),
            height: w.height(),
            left: w.left.clone(),
            right: w.right.clone(),
            cells: None,
        }
    }

    pub fn tree(w: &TreeWitness, view: Option<&str>) -> Self {
        WitnessJson {
            kind: "tree".into(),
            view: view.map(String::from),
            height: w.height,
            left: w.leaves.clone(),
            right: w.internal.clone(),
            cells: None,
        }
    }

    pub fn mu_ladder(w: &MuLadderWitness, view: Option<&str>) -> Self {
        WitnessJson {
            kind: "mu-ladder".into(),
            view: view.map(String::from),
            height: w.height(),
            left: w.cells.iter().map(|c| c[0]).collect(),
            right: w.right.clone(),
            cells: Some(w.cells.clone()),
        }
    }

    pub fn to_ladder(&self) -> LadderWitness {
        LadderWitness { left: self.left.clone(), right: self.right.clone() }
    }

    pub fn to_tree(&self) -> TreeWitness {
        TreeWitness { height: self.height, leaves: self.left.clone(), internal: self.right.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub param: usize,
    pub sign: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberJson {
    pub left: Vec<usize>,
    pub terms: Vec<TermJson>,
}

impl From<&FiberCombination> for FiberJson {
    fn from(c: &FiberCombination) -> Self {
        FiberJson {
            left: c.left.clone(),
            terms: c.terms.iter().map(|t| TermJson { param: t.param, sign: t.sign as u8 }).collect(),
        }
    }
}

impl FiberJson {
    pub fn to_core(&self) -> FiberCombination {
        FiberCombination::new(
            self.left.clone(),
            self.terms.iter().map(|t| FiberTerm { param: t.param, sign: t.sign != 0 }).collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub part: usize,
    pub num_classes: usize,
    pub assignment: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<Option<FiberJson>>>,
}

impl From<&VertexPartition> for PartitionJson {
    fn from(p: &VertexPartition) -> Self {
        PartitionJson {
            part: p.part,
            num_classes: p.num_classes,
            assignment: p.assignment.clone(),
            provenance: p.provenance.as_ref().map(|v| v.iter().map(|c| c.as_ref().map(FiberJson::from)).collect()),
        }
    }
}

impl PartitionJson {
    pub fn to_core(&self) -> Result<VertexPartition, CliError> {
        let mut p = VertexPartition::new(self.part, self.num_classes, self.assignment.clone())?;
        p.provenance =
            self.provenance.as_ref().map(|v| v.iter().map(|c| c.as_ref().map(FiberJson::to_core)).collect());
        p.validate(self.assignment.len())?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangleJson {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPartitionJson {
    pub parts: [usize; 2],
    pub sizes: [usize; 2],
    pub num_classes: usize,
    pub assignment: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rectangles: Option<Vec<Vec<RectangleJson>>>,
}

impl From<&PairPartition> for PairPartitionJson {
    fn from(p: &PairPartition) -> Self {
        PairPartitionJson {
            parts: [p.parts.0, p.parts.1],
            sizes: [p.sizes.0, p.sizes.1],
            num_classes: p.num_classes,
            assignment: p.assignment.clone(),
            rectangles: p.rectangles.as_ref().map(|rs| {
                rs.iter()
                    .map(|c| c.iter().map(|r| RectangleJson { left: r.left.clone(), right: r.right.clone() }).collect())
                    .collect()
            }),
        }
    }
}

impl PairPartitionJson {
    pub fn to_core(&self) -> Result<PairPartition, CliError> {
        let p = PairPartition {
            parts: (self.parts[0], self.parts[1]),
            sizes: (self.sizes[0], self.sizes[1]),
            num_classes: self.num_classes,
            assignment: self.assignment.clone(),
            rectangles: self.rectangles.as_ref().map(|rs| {
                rs.iter()
                    .map(|c| c.iter().map(|r| Rectangle { left: r.left.clone(), right: r.right.clone() }).collect())
                    .collect()
            }),
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaJson {
    pub xy: Vec<[usize; 2]>,
    pub xz: Vec<[usize; 2]>,
    pub yz: Vec<[usize; 2]>,
}

impl From<&SigmaSets> for SigmaJson {
    fn from(s: &SigmaSets) -> Self {
        let conv = |v: &Vec<(usize, usize)>| v.iter().map(|&(a, b)| [a, b]).collect();
        SigmaJson { xy: conv(&s.xy), xz: conv(&s.xz), yz: conv(&s.yz) }
    }
}

impl SigmaJson {
    pub fn to_core(&self) -> SigmaSets {
        let conv = |v: &Vec<[usize; 2]>| v.iter().map(|p| (p[0], p[1])).collect();
        SigmaSets { xy: conv(&self.xy), xz: conv(&self.xz), yz: conv(&self.yz) }
    }
}

/// Partitions as read by `verify`; `partition` writes a superset of this.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionFile {
    #[serde(default)]
    pub partitions: Vec<PartitionJson>,
    #[serde(default)]
    pub pairs: Vec<PairPartitionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxJson {
    pub classes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<[usize; 2]>,
    pub measure: String,
    pub edge_measure: String,
    pub density: String,
    pub degenerate: bool,
    pub regular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCheckJson {
    pub index: usize,
    pub measure: String,
    pub bound: String,
    pub strict: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDecencyJson {
    pub part: usize,
    pub class: usize,
    pub measure: String,
    pub exceptional_measure: String,
    pub tolerance: String,
    pub decent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub variant: String,
    pub eps: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay: Option<String>,
    pub num_classes: usize,
    pub tolerance: String,
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_box: Option<BoxJson>,
    pub irregular: Vec<usize>,
    pub error_checks: Vec<ErrorCheckJson>,
    pub decency: Vec<ClassDecencyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaJson>,
    pub boxes: Vec<BoxJson>,
}

fn box_json(b: &BoxReport) -> BoxJson {
    BoxJson {
        classes: b.classes.clone(),
        join: b.join.map(|(a, c)| [a, c]),
        measure: rat(&b.measure),
        edge_measure: rat(&b.edge_measure),
        density: rat(&b.density),
        degenerate: b.degenerate,
        regular: b.regular,
    }
}

fn box_core(b: &BoxJson) -> Result<BoxReport, CliError> {
    Ok(BoxReport {
        classes: b.classes.clone(),
        join: b.join.map(|j| (j[0], j[1])),
        measure: parse_rat(&b.measure)?,
        edge_measure: parse_rat(&b.edge_measure)?,
        density: parse_rat(&b.density)?,
        degenerate: b.degenerate,
        regular: b.regular,
    })
}

impl From<&RegularityReport> for ReportJson {
    fn from(r: &RegularityReport) -> Self {
        ReportJson {
            variant: r.variant.name().into(),
            eps: rat(&r.eps),
            decay: r.decay.as_ref().map(DecayFunction::describe),
            num_classes: r.num_classes,
            tolerance: rat(&r.tolerance),
            verdict: r.verdict,
            worst_box: r.worst_box().map(box_json),
            irregular: r.irregular.clone(),
            error_checks: r
                .error_checks
                .iter()
                .map(|c| ErrorCheckJson {
                    index: c.index,
                    measure: rat(&c.measure),
                    bound: rat(&c.bound),
                    strict: c.strict,
                    holds: c.holds,
                })
                .collect(),
            decency: r
                .decency
                .iter()
                .map(|c| ClassDecencyJson {
                    part: c.part,
                    class: c.class,
                    measure: rat(&c.measure),
                    exceptional_measure: rat(&c.exceptional_measure),
                    tolerance: rat(&c.tolerance),
                    decent: c.decent,
                })
                .collect(),
            sigma: r.sigma.as_ref().map(SigmaJson::from),
            boxes: r.boxes.iter().map(box_json).collect(),
        }
    }
}

impl ReportJson {
    pub fn to_core(&self) -> Result<RegularityReport, CliError> {
        let variant = Variant::parse(&self.variant)
            .ok_or_else(|| CliError::Input(format!("unknown variant `{}`", self.variant)))?;
        Ok(RegularityReport {
            variant,
            eps: parse_rat(&self.eps)?,
            decay: self.decay.as_deref().map(DecayFunction::parse).transpose()?,
            num_classes: self.num_classes,
            tolerance: parse_rat(&self.tolerance)?,
            boxes: self.boxes.iter().map(box_core).collect::<Result<_, _>>()?,
            irregular: self.irregular.clone(),
            error_checks: self
                .error_checks
                .iter()
                .map(|c| {
                    Ok(ErrorCheck {
                        index: c.index,
                        measure: parse_rat(&c.measure)?,
                        bound: parse_rat(&c.bound)?,
                        strict: c.strict,
                        holds: c.holds,
                    })
                })
                .collect::<Result<_, CliError>>()?,
            decency: self
                .decency
                .iter()
                .map(|c| {
                    Ok(ClassDecency {
                        part: c.part,
                        class: c.class,
                        measure: parse_rat(&c.measure)?,
                        exceptional_measure: parse_rat(&c.exceptional_measure)?,
                        tolerance: parse_rat(&c.tolerance)?,
                        decent: c.decent,
                    })
                })
                .collect::<Result<_, CliError>>()?,
            sigma: self.sigma.as_ref().map(SigmaJson::to_core),
            verdict: self.verdict,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityValueJson {
    pub cap: usize,
    pub least_stable: Option<usize>,
}

impl From<&StabilityValue> for StabilityValueJson {
    fn from(v: &StabilityValue) -> Self {
        StabilityValueJson { cap: v.cap, least_stable: v.least_stable }
    }
}

pub fn direction_name(d: &Direction, k: usize) -> String {
    match d {
        Direction::Flattening { left } => format!("flatten {}", stablereg_core::view::format_grouping(left, k)),
        Direction::Slicing { coord } => format!("slice {coord}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntryJson {
    pub direction: String,
    pub tree: Option<StabilityValueJson>,
    pub ladder: Option<StabilityValueJson>,
    pub tree_witness: Option<WitnessJson>,
    pub ladder_witness: Option<WitnessJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_tree_slice: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_ladder_slice: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ProfileEntryJson {
    pub fn new(e: &ProfileEntry, k: usize) -> Self {
        ProfileEntryJson {
            direction: direction_name(&e.direction, k),
            tree: e.tree.as_ref().map(Into::into),
            ladder: e.ladder.as_ref().map(Into::into),
            tree_witness: e.tree_witness.as_ref().map(|w| WitnessJson::tree(w, None)),
            ladder_witness: e.ladder_witness.as_ref().map(|w| WitnessJson::ladder(w, None)),
            worst_tree_slice: e.worst_tree_slice,
            worst_ladder_slice: e.worst_ladder_slice,
            error: e.error.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub cap: usize,
    pub entries: Vec<ProfileEntryJson>,
}

impl ProfileJson {
    pub fn new(p: &StabilityProfile, k: usize) -> Self {
        ProfileJson { cap: p.cap, entries: p.entries.iter().map(|e| ProfileEntryJson::new(e, k)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use stablereg_core::families::{half_graph, prefix_partition, ternary_word_hypergraph};
    use stablereg_core::rational::ratio;
    use stablereg_core::regularity::{verify_stable_regularity, verify_strong_stable_regularity};
    use stablereg_core::WeightedMeasure;

    #[test]
    fn partition_round_trip_is_byte_identical() {
        let mut p = VertexPartition::new(1, 3, vec![0, 1, 2, 2, 1]).unwrap();
        p.provenance = Some(vec![
            None,
            Some(FiberCombination::new(vec![0], vec![FiberTerm { param: 4, sign: true }])),
            None,
        ]);
        let text = to_text(&PartitionJson::from(&p));
        let back: PartitionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_core().unwrap(), p);
        assert_eq!(to_text(&back), text);
    }

    #[test]
    fn report_recheck_after_round_trip() {
        let h = ternary_word_hypergraph(2).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let parts: Vec<_> = (0..3).map(|i| prefix_partition(2, 1, i).unwrap()).collect();
        let r = verify_stable_regularity(&h, &parts, &mu, &ratio(1, 10)).unwrap();
        assert!(!r.verdict);
        let text = to_text(&ReportJson::from(&r));
        let back: ReportJson = serde_json::from_str(&text).unwrap();
        let core = back.to_core().unwrap();
        assert_eq!(core, r);
        assert!(core.recheck());
        assert_eq!(back.worst_box.unwrap().density, "2/9");
    }

    #[test]
    fn strong_report_keeps_decay() {
        let h = half_graph(4).unwrap();
        let mu = WeightedMeasure::uniform(h.sizes());
        let parts = vec![VertexPartition::singletons(0, 4), VertexPartition::singletons(1, 4)];
        let f = DecayFunction::parse("reciprocal").unwrap();
        let r = verify_strong_stable_regularity(&h, &parts, &mu, &ratio(1, 2), &f).unwrap();
        let j = ReportJson::from(&r);
        assert_eq!(j.decay.as_deref(), Some("reciprocal"));
        assert_eq!(j.to_core().unwrap(), r);
    }

    #[test]
    fn rejects_bad_partitions() {
        let j = PartitionJson { part: 0, num_classes: 2, assignment: vec![0, 3], provenance: None };
        assert!(j.to_core().is_err());
        assert!(parse_rat("1/0").is_err());
    }
}
