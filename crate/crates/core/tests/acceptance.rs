//! End-to-end acceptance run: one PASS/FAIL line per criterion, with the
//! measured runtime against its budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bundle_embed::coding::{p_param, updown, Code, IndexConvention, Vertex};
use bundle_embed::embed_esa::{self, esa_bound};
use bundle_embed::embed_l1::{self, intervals::int, L1Options, Rat, ScaleMode};
use bundle_embed::graph::{dist_formula, BundleGraph};
use bundle_embed::harness::{evaluate, evaluate_with, run_suite, Corpus, EvalOptions, Suite, SuiteOptions};
use bundle_embed::products::{self, check_composed_xy, check_isomorphism, oslash, Levels};
use bundle_embed::report::{exact, EmbeddingKind, PairPolicy};
use rayon::prelude::*;

struct Failure {
    detail: String,
    /// A gap in the source argument, recorded in the decisions ledger: the
    /// line still reads FAIL but does not fail the run.
    known: bool,
}

impl Failure {
    fn new(detail: impl Into<String>) -> Self {
        Failure {
            detail: detail.into(),
            known: false,
        }
    }

    fn known(detail: impl Into<String>) -> Self {
        Failure {
            detail: detail.into(),
            known: true,
        }
    }
}

impl From<String> for Failure {
    fn from(detail: String) -> Self {
        Failure::new(detail)
    }
}

type Outcome = Result<String, Failure>;

fn c(s: &str) -> Code {
    s.parse().unwrap()
}

fn v(s: &str) -> Vertex {
    s.parse().unwrap()
}

fn corpus(kappas: &[u32]) -> Corpus {
    Corpus::enumerate(6, 2, kappas)
}

fn worked_example() -> Outcome {
    let code = c("0,0,1,0,0,2,1,1,1,2,1,0");
    let g = BundleGraph::materialize(&code, 2).map_err(|e| e.to_string())?;
    for (a, b, want) in [("5:(1,1)", "9:(1,0)", 4), ("5:(1,1)", "9:(0,1)", 6)] {
        let f = dist_formula(&code, &v(a), &v(b));
        let bfs = g.dist_bfs(&v(a), &v(b)).map_err(|e| e.to_string())?;
        if f != want || bfs != want {
            return Err(Failure::new(format!("d({a}, {b}): formula {f}, BFS {bfs}, expected {want}")));
        }
    }
    Ok("d = 4 and d = 6 by formula and BFS".into())
}

fn metric() -> Outcome {
    let corpus = corpus(&[2, 3]);
    let s = run_suite(&corpus, &[Suite::MetricOracle], &SuiteOptions::default());
    if s.pass() && !s.vacuous() {
        let checks: u64 = s.entries.iter().map(|e| e.checks).sum();
        Ok(format!("{} graphs, {checks} checks", s.cases()))
    } else {
        Err(Failure::new(s.render()))
    }
}

fn l1_bounds() -> Outcome {
    let corpus = corpus(&[2]);
    let results: Vec<Result<(u64, u64), String>> = corpus
        .codes
        .par_iter()
        .map(|code| {
            let r = evaluate(EmbeddingKind::L1, code, 2, PairPolicy::All).map_err(|e| format!("({code}): {e}"))?;
            if !r.pass {
                return Err(format!("({code}): {:?}", r.extra.first_violation));
            }
            let emb = embed_l1::build_l1(code, 2).map_err(|e| e.to_string())?;
            let n = embed_l1::check_intersection_lemma(&emb).map_err(|e| format!("({code}): {e}"))?;
            Ok((r.pairs, n))
        })
        .collect();
    let mut pairs = 0;
    let mut formula = 0;
    for r in results {
        let (p, n) = r?;
        pairs += p;
        formula += n;
    }
    let diamond = evaluate(EmbeddingKind::L1, &c("0,1,0"), 2, PairPolicy::All).map_err(|e| e.to_string())?;
    if diamond.distortion != Some(int(2)) {
        return Err(Failure::new(format!("diamond distortion {:?}", diamond.distortion)));
    }
    Ok(format!(
        "{} codes, {pairs} pairs, {formula} intersection checks, diamond distortion 2",
        corpus.codes.len()
    ))
}

fn linf_bounds() -> Outcome {
    let corpus = corpus(&[2, 3]);
    let entries = corpus.entries();
    let reports: Vec<_> = entries
        .par_iter()
        .map(|(code, k)| evaluate(EmbeddingKind::Linf, code, *k, PairPolicy::All).map_err(|e| e.to_string()))
        .collect();
    let mut third = true;
    let mut pairs = 0;
    for r in reports {
        let r = r?;
        if !r.pass {
            return Err(Failure::new(format!("({}) kappa={}: {:?}", r.code, r.kappa, r.extra.first_violation)));
        }
        third &= r.extra.third_bound_holds == Some(true);
        pairs += r.pairs;
    }
    Ok(format!("{} graphs, {pairs} pairs, d/3 bound holds on all pairs: {third}", entries.len()))
}

fn esa_bounds() -> Outcome {
    let codes = corpus(&[2]).codes;
    let per_code: Vec<Result<(u64, u64, u64, Option<String>, Rat), String>> = codes
        .par_iter()
        .map(|code| {
            let fail = |e: String| format!("({code}): {e}");
            let r = evaluate(EmbeddingKind::Esa, code, 2, PairPolicy::All).map_err(|e| fail(e.to_string()))?;
            if !r.pass {
                return Err(fail(format!("{:?}", r.extra.first_violation)));
            }
            let emb = embed_esa::build_esa(code, 2).map_err(|e| fail(e.to_string()))?;
            let blocks = embed_esa::check_block_lemma(&emb).map_err(fail)?;
            let p = p_param(code, IndexConvention::Positive).map_err(|e| fail(e.to_string()))?;
            let vs = emb.vertices();
            let (mut checked, mut failed, mut first) = (0, 0, None);
            for a in 0..vs.len() {
                for b in a + 1..vs.len() {
                    if updown(code, &vs[a], &vs[b]) {
                        continue;
                    }
                    checked += 1;
                    if let Err(e) = embed_esa::esa_separation_check(&emb, &vs[a], &vs[b], p) {
                        failed += 1;
                        first.get_or_insert_with(|| format!("({code}) {} {}: {e}", vs[a], vs[b]));
                    }
                }
            }
            Ok((blocks, checked, failed, first, r.distortion.unwrap_or_else(|| int(0))))
        })
        .collect();
    let (mut blocks, mut checked, mut failed, mut first, mut worst) = (0, 0, 0, None, int(1));
    for r in per_code {
        let (b, c, f, msg, d) = r.map_err(Failure::new)?;
        blocks += b;
        checked += c;
        failed += f;
        if first.is_none() {
            first = msg;
        }
        worst = worst.max(d);
    }
    let trials = 10_000;
    embed_esa::check_esa_axioms(trials, 0).map_err(|v| Failure::new(format!("axioms: {v:?}")))?;
    let summary = format!(
        "{} codes: bounds hold on every pair (largest distortion {}), {blocks} block-lemma checks, {trials} axiom trials",
        codes.len(),
        exact(&worst)
    );
    if failed == 0 {
        Ok(format!("{summary}, separation on {checked} incomparable pairs"))
    } else {
        Err(Failure::known(format!(
            "{summary}; separation fails on {failed} of {checked} incomparable pairs, first {}",
            first.unwrap_or_default()
        )))
    }
}

fn constants() -> Outcome {
    for name in ["diamond", "laakso", "parasol"] {
        let code = products::named_base(name).unwrap();
        let p = p_param(&code, IndexConvention::Positive).map_err(|e| Failure::new(e.to_string()))?;
        if p != 1 || esa_bound(p) != int(8) {
            return Err(Failure::new(format!("{name}: p = {p}")));
        }
    }
    let codes = corpus(&[2]).codes;
    let mut notes = Vec::new();
    for conv in [IndexConvention::Positive, IndexConvention::IncludeZero] {
        let ps: Vec<usize> = codes.iter().map(|w| p_param(w, conv).unwrap()).collect();
        let failures: Vec<String> = codes
            .par_iter()
            .enumerate()
            .flat_map_iter(|(a, w)| {
                let ps = &ps;
                codes.iter().enumerate().filter_map(move |(b, wp)| {
                    let pc = p_param(&oslash(w, wp), conv).unwrap();
                    (pc > ps[a].max(ps[b])).then(|| format!("({w}) / ({wp}): {pc} > {}", ps[a].max(ps[b])))
                })
            })
            .collect();
        if !failures.is_empty() {
            notes.push(format!("{conv}: {} pairs exceed, first {}", failures.len(), failures[0]));
        }
    }
    let summary = format!("p = 1 and bound 8 for the three bases; {} pairs x 2 conventions", codes.len() * codes.len());
    if notes.is_empty() {
        Ok(summary)
    } else {
        Err(Failure::known(format!("{summary}; p(W/W') <= max fails under {}", notes.join("; "))))
    }
}

fn product_correctness() -> Outcome {
    for name in ["diamond", "laakso", "parasol"] {
        let g = products::named_base(name).unwrap();
        let iso = check_isomorphism(&g, &g, Levels::All, 2).map_err(|e| e.to_string())?;
        if !iso.holds() {
            return Err(Failure::new(format!("{name}: {:?}", iso.mismatch)));
        }
    }
    let codes = corpus(&[2]).codes;
    let bad = codes.par_iter().find_map_any(|w| {
        codes
            .iter()
            .find_map(|wp| check_composed_xy(w, wp).err().map(|(r, i)| format!("({w}) / ({wp}) at r={r}, i={i}")))
    });
    match bad {
        Some(msg) => Err(Failure::new(msg)),
        None => Ok(format!("three isomorphisms, {} composed x/y pairs", codes.len() * codes.len())),
    }
}

fn paper_exact() -> Outcome {
    let code = c("0,1,0");
    let sep = embed_l1::build_l1(&code, 2).map_err(|e| e.to_string())?;
    let grid = embed_l1::build_l1_with(
        &code,
        2,
        L1Options {
            mode: ScaleMode::PaperExact,
            ..L1Options::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let n = sep.vertices().len();
    for a in 0..n {
        for b in a + 1..n {
            let (x, y) = (sep.dist_by_index(a, b), grid.dist_by_index(a, b));
            if x != y {
                return Err(Failure::new(format!("{} {}: separated {x}, paper_exact {y}", sep.vertices()[a], sep.vertices()[b])));
            }
        }
    }
    let r = evaluate_with(
        EmbeddingKind::L1,
        &code,
        2,
        PairPolicy::All,
        EvalOptions {
            scale_mode: ScaleMode::PaperExact,
            ..EvalOptions::default()
        },
    )
    .map_err(|e| e.to_string())?;
    if !r.pass {
        return Err(Failure::new(format!("{:?}", r.extra.first_violation)));
    }
    Ok(format!("{} pairs equal", n * (n - 1) / 2))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 8] = [
        ("1 worked-example regression", 1, worked_example),
        ("2 metric oracle", 120, metric),
        ("3 L1 bounds", 300, l1_bounds),
        ("4 linf bounds", 60, linf_bounds),
        ("5 ESA bounds", 300, esa_bounds),
        ("6 product constants", 30, constants),
        ("7 product correctness", 120, product_correctness),
        ("8 paper-exact L1 cross-check", 60, paper_exact),
    ];
    let (mut passed, mut failed) = (0, 0);
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let over = (took > Duration::from_secs(budget)).then(|| format!("; over the {budget} s budget"));
        let line = match (&outcome, &over) {
            (Ok(d), None) => {
                passed += 1;
                format!("PASS criterion {name}: {d}")
            }
            (Ok(d), Some(o)) => {
                failed += 1;
                format!("FAIL criterion {name}: {d}{o}")
            }
            (Err(f), _) => {
                let known = f.known && over.is_none();
                if !known {
                    failed += 1;
                }
                let tag = if known { " (documented gap)" } else { "" };
                format!("FAIL{tag} criterion {name}: {}{}", f.detail.trim_end(), over.as_deref().unwrap_or(""))
            }
        };
        println!("{line} [{:.2} s / {budget} s]", took.as_secs_f64());
    }
    println!("{passed} of 8 criteria passed, {failed} unexpected failures");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
