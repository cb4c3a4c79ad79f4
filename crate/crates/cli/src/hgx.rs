//! The HGX text format.
//!
//! ```text
//! HGX 1
//! 3 9 9 9
//! measure 0
//! 1/2 1/8 ...
//! edges
//! 0 1 2
//! end
//! ```
//!
//! Lazily evaluated families are written as a `family` line in place of the
//! `edges` section. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use stablereg_core::families::ternary_word_hypergraph;
use stablereg_core::rational::{format_rational, parse_rational};
use stablereg_core::{Family, PartWeights, PartiteHypergraph, Rational, WeightedMeasure};

use crate::error::CliError;

/// A hypergraph together with the measure stored next to it.
#[derive(Clone, Debug)]
pub struct HgxFile {
    pub hg: PartiteHypergraph,
    pub mu: WeightedMeasure,
}

impl HgxFile {
    pub fn uniform(hg: PartiteHypergraph) -> Self {
        let mu = WeightedMeasure::uniform(hg.sizes());
        HgxFile { hg, mu }
    }
}

fn bad(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("HGX line {line}: {msg}"))
}

fn num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, CliError> {
    tok.parse().map_err(|_| bad(line, format!("expected a number, got `{tok}`")))
}

pub fn read(text: &str) -> Result<HgxFile, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| CliError::Input("empty HGX file".into()))?;
    if header != "HGX 1" {
        return Err(bad(ln, format!("expected `HGX 1`, got `{header}`")));
    }
    let (ln, shape) = lines.next().ok_or_else(|| bad(ln, "missing shape line"))?;
    let toks: Vec<usize> = shape.split_whitespace().map(|t| num(t, ln)).collect::<Result<_, _>>()?;
    let Some((&k, sizes)) = toks.split_first() else {
        return Err(bad(ln, "empty shape line"));
    };
    if sizes.len() != k {
        return Err(bad(ln, format!("arity {k} with {} part sizes", sizes.len())));
    }
    let sizes = sizes.to_vec();
    let mut weights: Vec<Option<PartWeights>> = vec![None; k];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut family: Option<PartiteHypergraph> = None;
    let mut in_edges = false;
    let mut pending: Option<(usize, Vec<Rational>)> = None;
    let mut ended = false;
    for (ln, line) in lines.by_ref() {
        if let Some((i, ws)) = pending.as_mut() {
            for t in line.split_whitespace() {
                ws.push(parse_rational(t).map_err(|e| bad(ln, e))?);
            }
            if ws.len() >= sizes[*i] {
                if ws.len() > sizes[*i] {
                    return Err(bad(ln, format!("too many weights for part {i}")));
                }
                let w = PartWeights::from_rationals(ws).map_err(|e| bad(ln, e))?;
                weights[*i] = Some(w);
                pending = None;
            }
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("end") => {
                ended = true;
                break;
            }
            Some("edges") => in_edges = true,
            Some("measure") if !in_edges => {
                let i: usize = num(toks.next().ok_or_else(|| bad(ln, "measure needs a part index"))?, ln)?;
                if i >= k {
                    return Err(bad(ln, format!("measure for part {i} of {k}")));
                }
                if weights[i].is_some() {
                    return Err(bad(ln, format!("part {i} has two measures")));
                }
                pending = Some((i, Vec::new()));
            }
            Some("family") if !in_edges => {
                let name = toks.next().unwrap_or("");
                let m: usize = num(toks.next().ok_or_else(|| bad(ln, "family needs a parameter"))?, ln)?;
                if name != "ternary-words" {
                    return Err(bad(ln, format!("unknown family `{name}`")));
                }
                let hg = ternary_word_hypergraph(m).map_err(|e| bad(ln, e))?;
                if hg.sizes() != sizes.as_slice() {
                    return Err(bad(ln, "family shape differs from the shape line"));
                }
                family = Some(hg);
            }
            Some(_) if in_edges => {
                let t: Vec<usize> = line.split_whitespace().map(|t| num(t, ln)).collect::<Result<_, _>>()?;
                if t.len() != k {
                    return Err(bad(ln, format!("edge with {} coordinates, expected {k}", t.len())));
                }
                edges.push(t);
            }
            Some(other) => return Err(bad(ln, format!("unexpected `{other}`"))),
            None => {}
        }
    }
    if pending.is_some() {
        return Err(CliError::Input("HGX measure section is incomplete".into()));
    }
    if !ended {
        return Err(CliError::Input("HGX file is missing `end`".into()));
    }
    if lines.next().is_some() {
        return Err(CliError::Input("content after `end`".into()));
    }
    let hg = match family {
        Some(hg) if edges.is_empty() => hg,
        Some(_) => return Err(CliError::Input("a family descriptor cannot carry edges".into())),
        None => PartiteHypergraph::new(&sizes, &edges)?,
    };
    let parts = weights
        .into_iter()
        .zip(&sizes)
        .map(|(w, &n)| w.unwrap_or_else(|| PartWeights::uniform(n)))
        .collect();
    let mu = WeightedMeasure::new(parts)?;
    Ok(HgxFile { hg, mu })
}

/// Canonical form: uniform parts carry no measure section, edges are sorted by rank.
pub fn write(file: &HgxFile) -> String {
    let hg = &file.hg;
    let mut out = String::from("HGX 1\n");
    let _ = write!(out, "{}", hg.arity());
    for s in hg.sizes() {
        let _ = write!(out, " {s}");
    }
    out.push('\n');
    for (i, p) in file.mu.parts().iter().enumerate() {
        if p.is_uniform() {
            continue;
        }
        let ws: Vec<String> = (0..p.len()).map(|v| format_rational(&p.weight(v))).collect();
        let _ = writeln!(out, "measure {i}\n{}", ws.join(" "));
    }
    match hg.family() {
        Some(Family::TernaryWords { m }) => {
            let _ = writeln!(out, "family ternary-words {m}");
        }
        None => {
            out.push_str("edges\n");
            hg.for_each_edge(|t| {
                let s: Vec<String> = t.iter().map(|v| v.to_string()).collect();
                out.push_str(&s.join(" "));
                out.push('\n');
            });
        }
    }
    out.push_str("end\n");
    out
}
