//! Runs the nine acceptance criteria and prints one line per criterion.
//!
//! Criteria 2 and 4 cannot be met as stated (see the README). Their lines
//! print FAIL, and the run only succeeds when every criterion reproduces its
//! recorded outcome, so a change in either direction is noticed.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use stablereg::repro::{self, ReproResult};
use stablereg_core::boxes::{density, VertexBox};
use stablereg_core::families::{half_graph, ternary_word_hypergraph};
use stablereg_core::rational::ratio;
use stablereg_core::witness::DEFAULT_BUDGET;
use stablereg_core::{BinaryView, Relation, WeightedMeasure};

const BIN: &str = env!("CARGO_BIN_EXE_stablereg");

/// Criteria whose recorded outcome is a failure.
const RECORDED_FAILURES: [usize; 2] = [2, 4];

type Criterion = (usize, &'static str, fn() -> Verdict, u64);

struct Verdict {
    pass: bool,
    detail: String,
}

fn summarize(rs: &[ReproResult]) -> Verdict {
    let failed: Vec<&str> = rs.iter().filter(|r| !r.pass).map(|r| r.id.as_str()).collect();
    Verdict {
        pass: failed.is_empty(),
        detail: if failed.is_empty() { format!("{} checks", rs.len()) } else { format!("failed: {}", failed.join(", ")) },
    }
}

fn measured<'a>(r: &'a ReproResult, key: &str) -> &'a str {
    r.measured.get(key).map(String::as_str).unwrap_or("?")
}

fn c1() -> Verdict {
    let rs = repro::ternary_density_table(6, 3).unwrap();
    let mut v = summarize(&rs);
    v.pass &= rs.len() == 6 && rs.iter().take(3).all(|r| r.measured.contains_key("counted"));
    v.detail = format!("{}; m=6 density {}", v.detail, measured(&rs[5], "density"));
    v
}

/// Tallest ladder by exhaustive search over index tuples.
fn brute_ladder_height(rel: &Relation, cap: usize) -> usize {
    fn extend(rel: &Relation, a: &mut Vec<usize>, b: &mut Vec<usize>, cap: usize, best: &mut usize) {
        *best = (*best).max(a.len());
        if a.len() == cap {
            return;
        }
        for x in 0..rel.left_len() {
            for y in 0..rel.right_len() {
                let i = a.len();
                let ok = rel.contains(x, y)
                    && (0..i).all(|j| rel.contains(a[j], y) && !rel.contains(x, b[j]));
                if ok {
                    a.push(x);
                    b.push(y);
                    extend(rel, a, b, cap, best);
                    a.pop();
                    b.pop();
                }
            }
        }
    }
    let mut best = 0;
    extend(rel, &mut vec![], &mut vec![], cap, &mut best);
    best
}

fn c2() -> Verdict {
    let rs: Vec<ReproResult> = (1..=3).map(|m| repro::ternary_slice_stability(m, 7, DEFAULT_BUDGET).unwrap()).collect();
    let stable = rs.iter().all(|r| measured(r, "unstable_slices") == "0");
    let tallest: Vec<&str> = rs.iter().map(|r| measured(r, "tallest_ladder")).collect();
    // Independent oracle on the small levels.
    let mut oracle_tallest = 0;
    for m in 1..=2 {
        let hg = ternary_word_hypergraph(m).unwrap();
        for c in 0..3 {
            for v in 0..hg.sizes()[c] {
                let s = hg.slice(&[(c, v)]).unwrap();
                let rel = BinaryView::new(&s, &[0]).unwrap().relation();
                oracle_tallest = oracle_tallest.max(brute_ladder_height(&rel, 3));
            }
        }
    }
    let tall_enough = rs.iter().any(|r| measured(r, "tallest_ladder").parse::<usize>().unwrap_or(0) >= 2);
    Verdict {
        pass: stable && tall_enough,
        detail: format!(
            "no ladder of height 7 in any slice: {stable}; tallest per m = {}; brute-force tallest at m <= 2: {oracle_tallest}",
            tallest.join("/")
        ),
    }
}

fn c3() -> Verdict {
    let eps = ratio(1, 100);
    let rs = repro::ternary_irregularity(2, eps, 10_000, 0).unwrap();
    let mut v = summarize(&rs);
    // Direct triple count for the identical configurations.
    let hg = ternary_word_hypergraph(2).unwrap();
    let edges = hg.edges();
    let mut all_irregular = true;
    for mask in (0..256u64).map(|s| s << 1) {
        let cls = |x: usize| (mask >> x & 1) as usize;
        let mut e = [[[0u64; 2]; 2]; 2];
        for t in &edges {
            e[cls(t[0])][cls(t[1])][cls(t[2])] += 1;
        }
        let size = [(0..9).filter(|&x| cls(x) == 0).count() as u64, (0..9).filter(|&x| cls(x) == 1).count() as u64];
        let mut found = false;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let tot = size[i] * size[j] * size[k];
                    let c = e[i][j][k];
                    found |= tot > 0 && 100 * c >= tot && 100 * c <= 99 * tot;
                }
            }
        }
        all_irregular &= found;
    }
    v.pass &= all_irregular;
    v.detail = format!(
        "{}; identical {} + sampled {} configurations; direct count agrees: {all_irregular}",
        v.detail,
        measured(&rs[0], "checked"),
        measured(&rs[1], "checked")
    );
    v
}

fn c4() -> Verdict {
    let rs = repro::half_graph_threshold(24).unwrap();
    // Cross-check the search against the core density oracle on small n.
    let oracle_ok = (2..=8).all(|n| match repro::half_graph_regular_pair(n) {
        Some((a, b)) => {
            let hg = half_graph(n).unwrap();
            let mu = WeightedMeasure::uniform(hg.sizes());
            let side = |m: u64| -> Vec<Vec<usize>> {
                (0..2).map(|c| (0..n).filter(|&v| (m >> v & 1) as usize == c).collect::<Vec<_>>()).filter(|c| !c.is_empty()).collect()
            };
            side(a).iter().all(|x| {
                side(b).iter().all(|y| {
                    let d = density(&hg, &VertexBox::new(vec![x.clone(), y.clone()]), &mu).unwrap().density;
                    d <= ratio(1, 4) || d >= ratio(3, 4)
                })
            })
        }
        None => false,
    });
    Verdict {
        pass: rs[0].pass && oracle_ok,
        detail: format!(
            "minimal n = {} (recorded {}); regular pair at n = 24 with densities {}; small-n recheck ok: {oracle_ok}",
            measured(&rs[0], "minimal_n"),
            measured(&rs[0], "recorded"),
            measured(&rs[1], "densities")
        ),
    }
}

fn c5() -> Verdict {
    let rs = repro::leq_eq_suite(9, DEFAULT_BUDGET, 0).unwrap();
    let mut v = summarize(&rs);
    v.detail = format!("{}; mixed partition with {} class slots", v.detail, measured(&rs[3], "classes"));
    v
}

fn c6() -> Verdict {
    let r = repro::good_pair_suite(1000, 4096, 0).unwrap();
    Verdict {
        pass: r.pass,
        detail: format!(
            "{} pairs met the hypotheses, {} counterexamples",
            measured(&r, "pairs_with_hypotheses"),
            measured(&r, "counterexamples")
        ),
    }
}

fn c7() -> Verdict {
    let r = repro::perfect_homogeneous_suite(50, 3, 0).unwrap();
    Verdict {
        pass: r.pass && measured(&r, "configurations") == "3200",
        detail: format!(
            "{} configurations, {} perfect, {} disagreements",
            measured(&r, "configurations"),
            measured(&r, "perfect_configurations"),
            measured(&r, "disagreements")
        ),
    }
}

fn c8() -> Verdict {
    let rs = repro::hodges_suite(100, 2, 0, DEFAULT_BUDGET).unwrap();
    let mut v = summarize(&rs);
    let failures: usize = rs.iter().map(|r| measured(r, "failures").parse::<usize>().unwrap()).sum();
    v.detail = format!("{}; {failures} failed conversions", v.detail);
    v
}

fn run_bin(args: &[String], threads: &str) -> (Vec<u8>, i32) {
    let o = Command::new(BIN).args(args).args(["--threads", threads]).output().expect("binary runs");
    (o.stdout, o.status.code().unwrap_or(-1))
}

fn c9() -> Verdict {
    let dir = tempfile::TempDir::new().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let prep = |args: &[&str]| {
        let o = Command::new(BIN).args(args).output().unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    };
    prep(&["gen", "leq-eq", "--n", "9", "-o", &p("leq9.hgx")]);
    prep(&["gen", "leq-eq", "--n", "4", "-o", &p("leq4.hgx")]);
    prep(&["gen", "half-graph", "--n", "16", "-o", &p("h16.hgx")]);
    prep(&["gen", "ternary", "--m", "2", "-o", &p("t2.hgx")]);
    prep(&["witness", &p("h16.hgx"), "--kind", "ladder", "--d", "6", "-o", &p("w.json")]);
    prep(&[
        "partition", &p("leq9.hgx"), "--method", "mixed", "--eps", "1/2", "--delta", "1/10", "--d", "2", "-o",
        &p("mixed.json"),
    ]);
    let commands: Vec<Vec<String>> = [
        vec!["gen", "random", "--sizes", "5,6,7", "--p", "1/3", "--seed", "4"],
        vec!["gen", "random-bipartite", "--n", "10", "--measure", "blob", "--seed", "2"],
        vec!["check-stability", &p("leq4.hgx")],
        vec!["check-stability", &p("t2.hgx"), "--slicewise", "--d", "7"],
        vec!["check-stability", &p("leq4.hgx"), "--view", "0|12", "--d", "3"],
        vec!["witness", &p("h16.hgx"), "--kind", "mu-ladder", "--d", "4"],
        vec!["witness", &p("h16.hgx"), "--kind", "tree", "--d", "3", "--via-ladder"],
        vec!["verify-witness", &p("h16.hgx"), &p("w.json")],
        vec!["partition", &p("h16.hgx"), "--method", "decent", "--eps", "1/4", "--delta", "1/4", "--d", "3", "--seed", "3"],
        vec!["partition", &p("leq9.hgx"), "--method", "mixed", "--eps", "1/2", "--delta", "1/10", "--d", "2"],
        vec!["partition", &p("leq4.hgx"), "--method", "slicewise-pairs", "--eps", "1/10", "--delta", "1/10", "--d", "2"],
        vec!["verify", &p("leq9.hgx"), &p("mixed.json"), "--variant", "strong-stable", "--eps", "1/2", "--f", "const:1/10"],
        vec!["repro", "--suite", "leq-eq"],
        vec!["repro", "--suite", "lemmas"],
        vec!["repro", "--suite", "ternary"],
    ]
    .iter()
    .map(|c| c.iter().map(|s| s.to_string()).collect())
    .collect();
    let mut differing = Vec::new();
    for c in &commands {
        let one = run_bin(c, "1");
        let four = run_bin(c, "4");
        if one != four || one.0.is_empty() {
            differing.push(c[..2].join(" "));
        }
    }
    Verdict {
        pass: differing.is_empty(),
        detail: if differing.is_empty() {
            format!("{} commands byte-identical at 1 and 4 threads", commands.len())
        } else {
            format!("outputs differ: {}", differing.join("; "))
        },
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "ternary density closed form", c1, 60),
        (2, "slice-wise 7-stability of the ternary family", c2, 600),
        (3, "ternary family fails stable regularity", c3, 600),
        (4, "half-graph irregularity threshold", c4, 900),
        (5, "x<=y=z separation", c5, 300),
        (6, "good-pair lemma property suite", c6, 600),
        (7, "perfect iff homogeneous", c7, 600),
        (8, "Hodges conversions", c8, 600),
        (9, "determinism across thread counts", c9, 600),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f, limit) in criteria {
        let start = Instant::now();
        let mut v = f();
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(limit) {
            v.pass = false;
            v.detail = format!("{}; over the {limit} s limit", v.detail);
        }
        println!(
            "criterion {id} {}: {name} ({:.1?}): {}",
            if v.pass { "PASS" } else { "FAIL" },
            elapsed,
            v.detail
        );
        if v.pass == RECORDED_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("all criteria match their recorded outcomes");
        ExitCode::SUCCESS
    } else {
        println!("criteria differing from the recorded outcome: {unexpected:?}");
        ExitCode::FAILURE
    }
}
