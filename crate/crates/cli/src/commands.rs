use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use stablereg_core::decency::is_decent;
use stablereg_core::families::{
    blob_weights, half_graph, leq_eq_hypergraph, random_bipartite, random_hypergraph, ternary_word_hypergraph,
};
use stablereg_core::regularity::{
    build_decent_partition, build_mixed_partition, build_slicewise_pair_partitions, verify_approx_perfect,
    verify_slicewise_regularity, verify_stable_regularity, verify_strong_slicewise, verify_strong_stable_regularity,
    DecayFunction, DecentPartitionConfig, MixedPartitionConfig, RegularityReport, SigmaSets, SlicewiseConfig,
    VertexPartition,
};
use stablereg_core::view::{format_grouping, parse_grouping};
use stablereg_core::witness::{
    find_ladder, find_mu_ladder, find_tree, ladder_to_tree, max_ladder_height, profile_directions, profile_entry,
    tree_rank, tree_to_ladder, Budget, StabilityProfile, DEFAULT_BUDGET,
};
use stablereg_core::{BinaryView, BitSet, Error, PartWeights, Rational};

use crate::error::{exit, CliError};
use crate::hgx::{self, HgxFile};
use crate::json::{
    parse_rat, rat, to_text, ClassDecencyJson, PairPartitionJson, PartitionFile, PartitionJson, ProfileJson,
    ReportJson, SigmaJson, WitnessJson,
};
use crate::repro;

pub const TOOL: &str = "stablereg";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const BUDGET_ENV: &str = "STABLEREG_BUDGET";

/// Settings shared by every command.
#[derive(Clone, Debug)]
pub struct Context {
    pub seed: u64,
    pub budget: u64,
}

impl Default for Context {
    fn default() -> Self {
        Context { seed: 0, budget: DEFAULT_BUDGET }
    }
}

/// `--budget` wins over the environment, which wins over the default.
pub fn resolve_budget(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    match (flag, env) {
        (Some(b), _) => Ok(b),
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{BUDGET_ENV} must be an integer, got `{s}`"))),
        (None, None) => Ok(DEFAULT_BUDGET),
    }
}

/// What a command produced: the primary output, an optional note for stderr
/// and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub note: Option<String>,
    pub code: i32,
}

impl Outcome {
    fn new(output: String, pass: bool) -> Self {
        Outcome { output, note: None, code: if pass { exit::PASS } else { exit::FAIL } }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    params: BTreeMap<&'static str, String>,
    #[serde(flatten)]
    body: T,
}

fn envelope<T: Serialize>(command: &str, params: BTreeMap<&'static str, String>, body: T) -> String {
    to_text(&Envelope { tool: TOOL, version: VERSION, command, params, body })
}

pub fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn read_path(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn write_path(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load(path: &Path) -> Result<HgxFile, CliError> {
    hgx::read(&read_path(path)?)
}

fn default_view(k: usize) -> String {
    format_grouping(&[0], k)
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a hypergraph from one of the built-in families as HGX.
    Gen(GenArgs),
    /// Tree and ladder stability of one view, of every slice, or the full profile.
    CheckStability(CheckArgs),
    /// Search for a ladder, tree or μ-ladder in one view.
    Witness(WitnessArgs),
    /// Recheck a serialized witness against a hypergraph.
    VerifyWitness(VerifyWitnessArgs),
    /// Build a partition and verify it.
    Partition(PartitionArgs),
    /// Verify partitions against one definition of regularity.
    Verify(VerifyArgs),
    /// Run a reproduction suite.
    Repro(ReproArgs),
}

pub fn run(cmd: &Command, ctx: &Context) -> Result<Outcome, CliError> {
    match cmd {
        Command::Gen(a) => gen(a, ctx),
        Command::CheckStability(a) => check_stability(a, ctx),
        Command::Witness(a) => witness(a, ctx),
        Command::VerifyWitness(a) => verify_witness(a),
        Command::Partition(a) => partition(a, ctx),
        Command::Verify(a) => verify(a),
        Command::Repro(a) => repro::run(a.suite, ctx),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    HalfGraph,
    LeqEq,
    Ternary,
    RandomBipartite,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureName {
    Uniform,
    Blob,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: FamilyName,
    /// Part size for half-graph, leq-eq and random-bipartite.
    #[arg(long)]
    pub n: Option<usize>,
    /// Word length for ternary.
    #[arg(long)]
    pub m: Option<usize>,
    /// Edge probability for the random families.
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    pub p: Rational,
    /// Comma-separated part sizes for random.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "uniform")]
    pub measure: MeasureName,
}

fn need(v: Option<usize>, flag: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::Input(format!("this family needs --{flag}")))
}

pub fn gen(a: &GenArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let hg = match a.family {
        FamilyName::HalfGraph => half_graph(need(a.n, "n")?)?,
        FamilyName::LeqEq => leq_eq_hypergraph(need(a.n, "n")?)?,
        FamilyName::Ternary => ternary_word_hypergraph(need(a.m, "m")?)?,
        FamilyName::RandomBipartite => random_bipartite(need(a.n, "n")?, a.p, ctx.seed)?,
        FamilyName::Random => {
            let sizes = a.sizes.as_ref().ok_or_else(|| CliError::Input("random needs --sizes".into()))?;
            random_hypergraph(sizes, a.p, ctx.seed)?
        }
    };
    let mut file = HgxFile::uniform(hg);
    if a.measure == MeasureName::Blob {
        for (i, &n) in file.hg.sizes().to_vec().iter().enumerate() {
            file.mu.replace_part(i, PartWeights::from_rationals(&blob_weights(n)?)?)?;
        }
    }
    Ok(Outcome::new(hgx::write(&file), true))
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub input: PathBuf,
    /// Coordinate grouping such as `0|12`.
    #[arg(long)]
    pub view: Option<String>,
    /// Stability parameter; required with --view or --slicewise.
    #[arg(long)]
    pub d: Option<usize>,
    /// Check every slice in every direction.
    #[arg(long, conflicts_with = "view")]
    pub slicewise: bool,
    /// Height cap for the full profile.
    #[arg(long, default_value_t = 8)]
    pub cap: usize,
    /// Where to write a witness when one is found.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SearchVerdict {
    stable: bool,
    witness: Option<WitnessJson>,
}

#[derive(Serialize)]
struct ViewCheck {
    view: String,
    d: usize,
    tree: SearchVerdict,
    ladder: SearchVerdict,
    stable: bool,
}

#[derive(Serialize)]
struct SliceDirectionCheck {
    coord: usize,
    slices: usize,
    max_tree_height: usize,
    max_ladder_height: usize,
    tree_unstable: Vec<usize>,
    ladder_unstable: Vec<usize>,
    stable: bool,
}

#[derive(Serialize)]
struct SlicewiseCheck {
    d: usize,
    directions: Vec<SliceDirectionCheck>,
    stable: bool,
}

#[derive(Serialize)]
struct ProfileBody {
    profile: ProfileJson,
}

fn check_stability(a: &CheckArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let file = load(&a.input)?;
    let hg = &file.hg;
    let k = hg.arity();
    let mut params = BTreeMap::from([("input", a.input.display().to_string()), ("budget", ctx.budget.to_string())]);
    if let Some(view) = &a.view {
        let d = need(a.d, "d")?;
        let left = parse_grouping(view, k)?;
        let view = format_grouping(&left, k);
        params.insert("view", view.clone());
        params.insert("d", d.to_string());
        let rel = BinaryView::new(hg, &left)?.relation();
        let mut budget = Budget::new(ctx.budget);
        let tree = if d == 0 { None } else { find_tree(&rel, d, None, &mut budget)? };
        let ladder = if d == 0 { None } else { find_ladder(&rel, d, &mut budget)? };
        if let Some(path) = &a.witness_out {
            let w = match (&ladder, &tree) {
                (Some(l), _) => Some(WitnessJson::ladder(l, Some(&view))),
                (None, Some(t)) => Some(WitnessJson::tree(t, Some(&view))),
                _ => None,
            };
            if let Some(w) = w {
                write_path(path, &to_text(&w))?;
            }
        }
        let body = ViewCheck {
            stable: d > 0 && tree.is_none() && ladder.is_none(),
            tree: SearchVerdict { stable: d > 0 && tree.is_none(), witness: tree.map(|t| WitnessJson::tree(&t, Some(&view))) },
            ladder: SearchVerdict {
                stable: d > 0 && ladder.is_none(),
                witness: ladder.map(|l| WitnessJson::ladder(&l, Some(&view))),
            },
            view,
            d,
        };
        return Ok(Outcome::new(envelope("check-stability", params, body), true));
    }
    if a.slicewise {
        let d = need(a.d, "d")?;
        if k < 3 {
            return Err(CliError::Input("slices need arity at least 3".into()));
        }
        params.insert("d", d.to_string());
        params.insert("slicewise", "true".into());
        let mut directions = Vec::new();
        for coord in 0..k {
            let heights: Vec<(usize, usize)> = (0..hg.sizes()[coord])
                .into_par_iter()
                .map(|v| -> Result<(usize, usize), Error> {
                    let s = hg.slice(&[(coord, v)])?;
                    let rel = BinaryView::new(&s, &[0])?.relation();
                    let mut budget = Budget::new(ctx.budget);
                    let th = tree_rank(&rel, None, d, &mut budget)?.map_or(0, |t| t.0);
                    let lh = max_ladder_height(&rel, d, &mut budget)?.0;
                    Ok((th, lh))
                })
                .collect::<Result<_, _>>()?;
            let tree_unstable: Vec<usize> = (0..heights.len()).filter(|&v| heights[v].0 >= d).collect();
            let ladder_unstable: Vec<usize> = (0..heights.len()).filter(|&v| heights[v].1 >= d).collect();
            directions.push(SliceDirectionCheck {
                coord,
                slices: heights.len(),
                max_tree_height: heights.iter().map(|h| h.0).max().unwrap_or(0),
                max_ladder_height: heights.iter().map(|h| h.1).max().unwrap_or(0),
                stable: d > 0 && tree_unstable.is_empty() && ladder_unstable.is_empty(),
                tree_unstable,
                ladder_unstable,
            });
        }
        let stable = directions.iter().all(|c| c.stable);
        return Ok(Outcome::new(envelope("check-stability", params, SlicewiseCheck { d, directions, stable }), true));
    }
    params.insert("cap", a.cap.to_string());
    let entries = profile_directions(k)
        .par_iter()
        .map(|dir| profile_entry(hg, dir, a.cap, ctx.budget))
        .collect::<Result<Vec<_>, _>>()?;
    let profile = StabilityProfile { cap: a.cap, entries };
    let exhausted = profile.entries.iter().any(|e| e.error.is_some());
    let out = envelope("check-stability", params, ProfileBody { profile: ProfileJson::new(&profile, k) });
    Ok(Outcome {
        output: out,
        note: exhausted.then(|| "search budget exhausted for some directions".to_string()),
        code: if exhausted { exit::BUDGET } else { exit::PASS },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    Ladder,
    Tree,
    MuLadder,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub view: Option<String>,
    #[arg(long, value_enum)]
    pub kind: WitnessKind,
    /// Height of the requested object.
    #[arg(long)]
    pub d: usize,
    /// Build the tree from a ladder of height `2^d`.
    #[arg(long)]
    pub via_ladder: bool,
    /// Build the ladder from a tree of height `2^(d+1) − 2`.
    #[arg(long)]
    pub via_tree: bool,
}

fn too_tall(h: usize) -> CliError {
    CliError::Input(format!("height {h} is too large for a Hodges conversion"))
}

pub fn witness(a: &WitnessArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let file = load(&a.input)?;
    let k = file.hg.arity();
    let left = parse_grouping(a.view.as_deref().unwrap_or(&default_view(k)), k)?;
    let view_name = format_grouping(&left, k);
    let view = BinaryView::new(&file.hg, &left)?;
    let mut budget = Budget::new(ctx.budget);
    let v = Some(view_name.as_str());
    let found = match a.kind {
        WitnessKind::Ladder if a.via_tree => {
            let e = u32::try_from(a.d + 1).ok().filter(|&e| e < 20).ok_or_else(|| too_tall(a.d))?;
            let rel = view.relation();
            match find_tree(&rel, (1usize << e) - 2, None, &mut budget)? {
                Some(t) => Some(WitnessJson::ladder(&tree_to_ladder(&rel, &t, &mut budget)?, v)),
                None => None,
            }
        }
        WitnessKind::Ladder => find_ladder(&view.relation(), a.d, &mut budget)?.map(|w| WitnessJson::ladder(&w, v)),
        WitnessKind::Tree if a.via_ladder => {
            let e = u32::try_from(a.d).ok().filter(|&e| e < 20).ok_or_else(|| too_tall(a.d))?;
            match find_ladder(&view.relation(), 1usize << e, &mut budget)? {
                Some(l) => Some(WitnessJson::tree(&ladder_to_tree(&l)?, v)),
                None => None,
            }
        }
        WitnessKind::Tree => find_tree(&view.relation(), a.d, None, &mut budget)?.map(|w| WitnessJson::tree(&w, v)),
        WitnessKind::MuLadder => {
            let rel = view.weighted_relation(&file.mu)?;
            find_mu_ladder(&rel, a.d, &mut budget)?.map(|w| WitnessJson::mu_ladder(&w, v))
        }
    };
    Ok(match found {
        Some(w) => Outcome::new(to_text(&w), true),
        None => Outcome {
            output: String::new(),
            note: Some(format!("no witness of height {} in view {view_name}", a.d)),
            code: exit::FAIL,
        },
    })
}

#[derive(Args, Debug)]
pub struct VerifyWitnessArgs {
    pub input: PathBuf,
    pub witness: PathBuf,
    /// View to check against when the witness does not name one.
    #[arg(long)]
    pub view: Option<String>,
}

#[derive(Serialize)]
struct WitnessCheck {
    kind: String,
    view: String,
    height: usize,
    valid: bool,
}

fn verify_witness(a: &VerifyWitnessArgs) -> Result<Outcome, CliError> {
    let file = load(&a.input)?;
    let w: WitnessJson = serde_json::from_str(&read_path(&a.witness)?)?;
    let k = file.hg.arity();
    let name = a.view.clone().or_else(|| w.view.clone()).unwrap_or_else(|| default_view(k));
    let left = parse_grouping(&name, k)?;
    let view = BinaryView::new(&file.hg, &left)?;
    let valid = match w.kind.as_str() {
        "ladder" => w.height == w.left.len() && w.to_ladder().validate(&view.relation()),
        "tree" => w.to_tree().validate(&view.relation()),
        "mu-ladder" => {
            let rel = view.weighted_relation(&file.mu)?;
            let right = &w.right;
            let ok_range = !right.is_empty() && right.iter().all(|&b| b < rel.right_len());
            ok_range && w.height == right.len() && mu_ladder_valid(&rel, right, w.cells.as_deref())
        }
        other => return Err(CliError::Input(format!("unknown witness kind `{other}`"))),
    };
    let params = BTreeMap::from([
        ("input", a.input.display().to_string()),
        ("witness", a.witness.display().to_string()),
    ]);
    let body = WitnessCheck { kind: w.kind.clone(), view: format_grouping(&left, k), height: w.height, valid };
    Ok(Outcome::new(envelope("verify-witness", params, body), valid))
}

fn mu_ladder_valid(rel: &stablereg_core::Relation, right: &[usize], cells: Option<&[Vec<usize>]>) -> bool {
    let computed = stablereg_core::witness::ladder_cells(rel, right);
    let positive = computed.iter().all(|c| rel.left_weights().mass(c) > 0);
    let listed = cells.is_none_or(|cs| {
        cs.len() == computed.len() && cs.iter().zip(&computed).all(|(l, c)| c.iter().eq(l.iter().copied()))
    });
    positive && listed
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Decent,
    Mixed,
    SlicewisePairs,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long, value_parser = rational_arg)]
    pub eps: Rational,
    #[arg(long, value_parser = rational_arg)]
    pub delta: Rational,
    /// Fiber depth of the decent-set search.
    #[arg(long)]
    pub d: usize,
    /// Decay function for the strong check of `mixed`, e.g. `const:1/10`; defaults to the constant δ.
    #[arg(long)]
    pub f: Option<String>,
    /// View for `decent`; defaults to the first coordinate against the rest.
    #[arg(long)]
    pub view: Option<String>,
    /// Let the slice-wise heuristic fall back to singleton partitions.
    #[arg(long)]
    pub singletons: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecentCheckJson {
    pub view: String,
    pub remainder: String,
    pub remainder_ok: bool,
    pub classes: Vec<ClassDecencyJson>,
    pub verdict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentativeJson {
    pub z_class: usize,
    pub z: usize,
    pub share: String,
    pub majority: bool,
}

#[derive(Serialize)]
struct PartitionBody {
    pass: bool,
    partitions: Vec<PartitionJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pairs: Vec<PairPartitionJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    representatives: Vec<RepresentativeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decency: Option<DecentCheckJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<ReportJson>,
}

/// Every nonempty class of `p` is `(eps, delta)`-decent in the view and the
/// remainder has measure at most `eps`.
pub fn check_decent_partition(
    view: &BinaryView,
    file: &HgxFile,
    p: &VertexPartition,
    eps: &Rational,
    delta: &Rational,
) -> Result<DecentCheckJson, CliError> {
    let rel = view.weighted_relation(&file.mu)?;
    let w = rel.left_weights();
    let mut classes = Vec::new();
    for (t, class) in p.classes().iter().enumerate().skip(1) {
        let set = BitSet::from_indices(p.len(), class.iter().copied());
        if w.mass(&set) == 0 {
            continue;
        }
        let v = is_decent(&rel, &set, eps, delta)?;
        classes.push(ClassDecencyJson {
            part: p.part,
            class: t,
            measure: rat(&v.set_measure),
            exceptional_measure: rat(&v.exceptional_measure),
            tolerance: rat(delta),
            decent: v.decent,
        });
    }
    let remainder = w.measure(&BitSet::from_indices(p.len(), p.error_class()));
    let remainder_ok = remainder <= *eps;
    let verdict = remainder_ok && classes.iter().all(|c| c.decent);
    let k = view.hypergraph().arity();
    Ok(DecentCheckJson { view: format_grouping(view.left_coords(), k), remainder: rat(&remainder), remainder_ok, classes, verdict })
}

fn partition(a: &PartitionArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let file = load(&a.input)?;
    let (hg, mu) = (&file.hg, &file.mu);
    let k = hg.arity();
    let mut params = BTreeMap::from([
        ("input", a.input.display().to_string()),
        ("eps", rat(&a.eps)),
        ("delta", rat(&a.delta)),
        ("d", a.d.to_string()),
        ("seed", ctx.seed.to_string()),
        ("budget", ctx.budget.to_string()),
    ]);
    let mut budget = Budget::new(ctx.budget);
    let mut body = PartitionBody {
        pass: false,
        partitions: vec![],
        pairs: vec![],
        representatives: vec![],
        decency: None,
        report: None,
    };
    match a.method {
        Method::Decent => {
            params.insert("method", "decent".into());
            let left = parse_grouping(a.view.as_deref().unwrap_or(&default_view(k)), k)?;
            params.insert("view", format_grouping(&left, k));
            let view = BinaryView::new(hg, &left)?;
            let mut cfg = DecentPartitionConfig::new(a.eps, a.delta, a.d);
            cfg.seed = ctx.seed;
            let p = build_decent_partition(&view, mu, &cfg, &mut budget)?;
            let check = check_decent_partition(&view, &file, &p, &a.eps, &a.delta)?;
            body.pass = check.verdict;
            body.decency = Some(check);
            body.partitions.push(PartitionJson::from(&p));
        }
        Method::Mixed => {
            params.insert("method", "mixed".into());
            let f = match &a.f {
                Some(s) => DecayFunction::parse(s)?,
                None => DecayFunction::constant(a.delta)?,
            };
            params.insert("f", f.describe());
            let cfg = MixedPartitionConfig { eps: a.eps, delta: a.delta, depth: a.d, seed: ctx.seed };
            let m = build_mixed_partition(hg, mu, &cfg, &mut budget)?;
            let report = verify_strong_stable_regularity(hg, &m.parts, mu, &a.eps, &f)?;
            body.pass = report.verdict;
            body.partitions = m.parts.iter().map(PartitionJson::from).collect();
            body.representatives = m
                .representatives
                .iter()
                .map(|r| RepresentativeJson { z_class: r.z_class, z: r.z, share: rat(&r.share), majority: r.majority })
                .collect();
            body.report = Some(ReportJson::from(&report));
        }
        Method::SlicewisePairs => {
            params.insert("method", "slicewise-pairs".into());
            params.insert("singletons", a.singletons.to_string());
            let cfg = SlicewiseConfig {
                eps: a.eps,
                delta: a.delta,
                depth: a.d,
                seed: ctx.seed,
                allow_singletons: a.singletons,
            };
            let out = build_slicewise_pair_partitions(hg, mu, &cfg, &mut budget)?;
            let report = verify_slicewise_regularity(hg, &out.pairs, mu, &a.eps)?;
            if let Some(s) = &out.stage_delta {
                params.insert("stage_delta", rat(s));
            }
            body.pass = report.verdict;
            body.pairs = out.pairs.iter().map(PairPartitionJson::from).collect();
            body.report = Some(ReportJson::from(&report));
        }
    }
    let pass = body.pass;
    Ok(Outcome::new(envelope("partition", params, body), pass))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Stable,
    StrongStable,
    ApproxPerfect,
    Slicewise,
    StrongSlicewise,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub input: PathBuf,
    /// Partition JSON files; their partitions, pairs and Σ sets are pooled.
    #[arg(required = true)]
    pub partitions: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    #[arg(long, value_parser = rational_arg)]
    pub eps: Rational,
    /// Decay function for the strong and approximately perfect variants.
    #[arg(long)]
    pub f: Option<String>,
}

#[derive(Serialize)]
struct VerifyBody {
    report: ReportJson,
}

pub fn verify_partitions(
    file: &HgxFile,
    pooled: &PartitionFile,
    variant: VariantArg,
    eps: &Rational,
    f: Option<&str>,
) -> Result<RegularityReport, CliError> {
    let (hg, mu) = (&file.hg, &file.mu);
    let parts = pooled.partitions.iter().map(PartitionJson::to_core).collect::<Result<Vec<_>, _>>()?;
    let decay = || -> Result<DecayFunction, CliError> {
        let s = f.ok_or_else(|| CliError::Input("this variant needs --f".into()))?;
        Ok(DecayFunction::parse(s)?)
    };
    Ok(match variant {
        VariantArg::Stable => verify_stable_regularity(hg, &parts, mu, eps)?,
        VariantArg::StrongStable => verify_strong_stable_regularity(hg, &parts, mu, eps, &decay()?)?,
        VariantArg::ApproxPerfect => verify_approx_perfect(hg, &parts, mu, eps, &decay()?)?,
        VariantArg::Slicewise => {
            let pairs = pooled.pairs.iter().map(PairPartitionJson::to_core).collect::<Result<Vec<_>, _>>()?;
            verify_slicewise_regularity(hg, &pairs, mu, eps)?
        }
        VariantArg::StrongSlicewise => {
            let n = parts.iter().map(|p| p.num_classes).max().unwrap_or(1);
            let sigma = pooled.sigma.as_ref().map_or_else(|| SigmaSets::all(n), SigmaJson::to_core);
            verify_strong_slicewise(hg, &parts, &sigma, mu, eps, &decay()?)?
        }
    })
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let file = load(&a.input)?;
    let mut pooled = PartitionFile::default();
    for path in &a.partitions {
        let p: PartitionFile = serde_json::from_str(&read_path(path)?)?;
        pooled.partitions.extend(p.partitions);
        pooled.pairs.extend(p.pairs);
        if p.sigma.is_some() {
            pooled.sigma = p.sigma;
        }
    }
    let report = verify_partitions(&file, &pooled, a.variant, &a.eps, a.f.as_deref())?;
    let mut params = BTreeMap::from([
        ("input", a.input.display().to_string()),
        ("variant", report.variant.name().to_string()),
        ("eps", rat(&a.eps)),
    ]);
    if let Some(f) = &report.decay {
        params.insert("f", f.describe());
    }
    let note = report.worst_box().map(|b| {
        let classes: Vec<String> = b.classes.iter().map(|c| c.to_string()).collect();
        format!("worst box: classes ({}) density {} measure {}", classes.join(", "), rat(&b.density), rat(&b.measure))
    });
    let pass = report.verdict;
    let mut out = Outcome::new(envelope("verify", params, VerifyBody { report: ReportJson::from(&report) }), pass);
    if !pass {
        out.note = note.or_else(|| Some("verification failed".into()));
    }
    Ok(out)
}

#[derive(Args, Debug)]
pub struct ReproArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: repro::Suite,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_precedence() {
        assert_eq!(resolve_budget(Some(5), Some("7")).unwrap(), 5);
        assert_eq!(resolve_budget(None, Some(" 7 ")).unwrap(), 7);
        assert_eq!(resolve_budget(None, None).unwrap(), DEFAULT_BUDGET);
        assert!(resolve_budget(None, Some("lots")).is_err());
    }

    #[test]
    fn exit_codes() {
        let budget = CliError::Core(Error::BudgetExceeded(stablereg_core::error::SearchState { spent: 1, prefix: vec![] }));
        assert_eq!(budget.exit_code(), exit::BUDGET);
        assert_eq!(CliError::Input("x".into()).exit_code(), exit::INPUT);
        assert_eq!(CliError::Core(Error::HeuristicFailed("x".into())).exit_code(), exit::FAIL);
        assert_eq!(CliError::Core(Error::DegenerateSet).exit_code(), exit::INPUT);
    }

    #[test]
    fn gen_families() {
        let ctx = Context::default();
        let args = |family, n, m| GenArgs { family, n, m, p: rational_arg("1/2").unwrap(), sizes: None, measure: MeasureName::Uniform };
        let out = gen(&args(FamilyName::HalfGraph, Some(3), None), &ctx).unwrap();
        assert_eq!(out.output, "HGX 1\n2 3 3\nedges\n0 1\n0 2\n1 2\nend\n");
        let out = gen(&args(FamilyName::Ternary, None, Some(4)), &ctx).unwrap();
        assert!(out.output.contains("family ternary-words 4"));
        assert!(gen(&args(FamilyName::LeqEq, None, None), &ctx).is_err());
        let a = gen(&args(FamilyName::RandomBipartite, Some(6), None), &ctx).unwrap();
        let b = gen(&args(FamilyName::RandomBipartite, Some(6), None), &ctx).unwrap();
        assert_eq!(a, b);
    }
}
