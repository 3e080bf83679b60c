//! Corpus enumeration, exhaustive pair evaluation and the invariant suites.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coding::{p_param, updown, Code, IndexConvention, Vertex};
use crate::embed_esa::{self, EsaOptions};
use crate::embed_l1::{self, intervals::int, L1Options, Rat, ScaleMode};
use crate::embed_linf::{dist_linf, psi_linf};
use crate::error::{Error, Result};
use crate::graph::{self, dist_formula, BundleGraph};
use crate::products::{self, Levels};
use crate::report::{DistortionReport, EmbeddingKind, PairPolicy, ReportExtra};

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub scale_mode: ScaleMode,
    pub convention: IndexConvention,
    pub vertex_limit: u64,
    pub esa_length_cap: u64,
    pub interval_limit: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            scale_mode: ScaleMode::Separated,
            convention: IndexConvention::Positive,
            vertex_limit: graph::DEFAULT_VERTEX_LIMIT,
            esa_length_cap: embed_esa::DEFAULT_LENGTH_CAP,
            interval_limit: embed_l1::DEFAULT_INTERVAL_LIMIT,
        }
    }
}

/// The `T_{W,κ}` vertices in height-major, address-lexicographic order.
pub fn code_vertices(code: &Code, kappa: u32) -> Vec<Vertex> {
    (0..=code.height())
        .flat_map(|r| graph::addresses(kappa, code.depth(r)).map(move |a| Vertex::new(r, a)))
        .collect()
}

/// Unordered index pairs `(a, b)`, `a < b`, selected by the policy, in
/// increasing lexicographic order.
pub fn select_pairs(n: usize, policy: PairPolicy) -> Vec<(usize, usize)> {
    let total = n * n.saturating_sub(1) / 2;
    match policy {
        PairPolicy::All => (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect(),
        PairPolicy::Sample { n: want, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picks = rand::seq::index::sample(&mut rng, total, want.min(total)).into_vec();
            picks.sort_unstable();
            let mut out = Vec::with_capacity(picks.len());
            let (mut a, mut row_start) = (0usize, 0usize);
            for t in picks {
                while t >= row_start + (n - 1 - a) {
                    row_start += n - 1 - a;
                    a += 1;
                }
                out.push((a, a + 1 + (t - row_start)));
            }
            out
        }
    }
}

#[derive(Clone, Debug)]
struct Acc {
    c1: Option<Rat>,
    c2: Option<Rat>,
    violation: Option<(usize, String)>,
    equality: bool,
    third: bool,
}

impl Acc {
    fn empty() -> Self {
        Acc {
            c1: None,
            c2: None,
            violation: None,
            equality: true,
            third: true,
        }
    }

    fn merge(self, other: Acc) -> Acc {
        let pick = |a: Option<Rat>, b: Option<Rat>, min: bool| match (a, b) {
            (Some(x), Some(y)) => Some(if (x < y) == min { x } else { y }),
            (x, None) => x,
            (None, y) => y,
        };
        let violation = match (self.violation, other.violation) {
            (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
            (x, None) => x,
            (None, y) => y,
        };
        Acc {
            c1: pick(self.c1, other.c1, true),
            c2: pick(self.c2, other.c2, false),
            violation,
            equality: self.equality && other.equality,
            third: self.third && other.third,
        }
    }
}

pub fn evaluate(kind: EmbeddingKind, code: &Code, kappa: u32, policy: PairPolicy) -> Result<DistortionReport> {
    evaluate_with(kind, code, kappa, policy, EvalOptions::default())
}

/// Builds the embedding and compares embedded distances with graph
/// distances over the selected pairs.
pub fn evaluate_with(
    kind: EmbeddingKind,
    code: &Code,
    kappa: u32,
    policy: PairPolicy,
    opts: EvalOptions,
) -> Result<DistortionReport> {
    if kappa == 0 {
        return Err(Error::Usage("kappa must be at least 1".into()));
    }
    let count = graph::vertex_count(code, kappa).ok_or(Error::Overflow("vertex count"))?;
    if count > opts.vertex_limit {
        return Err(Error::SizeGuard {
            count: count.to_string(),
            limit: opts.vertex_limit,
        });
    }
    let mut extra = ReportExtra {
        vertices: count,
        pair_policy: Some(policy),
        ..ReportExtra::default()
    };
    let vertices = code_vertices(code, kappa);

    let (bound, dist): (Rat, Box<dyn Fn(usize, usize) -> Rat + Sync>) = match kind {
        EmbeddingKind::Linf => {
            let psi = vertices.iter().map(|v| psi_linf(code, v)).collect::<Result<Vec<_>>>()?;
            (int(6), Box::new(move |a, b| int(dist_linf(&psi[a], &psi[b]))))
        }
        EmbeddingKind::L1 => {
            let emb = embed_l1::build_l1_with(
                code,
                kappa,
                L1Options {
                    mode: opts.scale_mode,
                    vertex_limit: opts.vertex_limit,
                    interval_limit: opts.interval_limit,
                },
            )?;
            debug_assert_eq!(emb.vertices(), &vertices[..]);
            extra.scale_mode = Some(opts.scale_mode);
            (int(2), Box::new(move |a, b| emb.dist_by_index(a, b)))
        }
        EmbeddingKind::Esa => {
            let p = p_param(code, opts.convention)?;
            let emb = embed_esa::build_esa_with(
                code,
                kappa,
                EsaOptions {
                    length_cap: opts.esa_length_cap,
                    vertex_limit: opts.vertex_limit,
                },
            )?;
            debug_assert_eq!(emb.vertices(), &vertices[..]);
            extra.p_w = Some((p, opts.convention));
            (embed_esa::esa_bound(p), Box::new(move |a, b| emb.dist_by_index(a, b)))
        }
    };

    let pairs = select_pairs(vertices.len(), policy);
    let acc = pairs
        .par_iter()
        .enumerate()
        .fold(Acc::empty, |mut acc, (t, &(a, b))| {
            let (u, v) = (&vertices[a], &vertices[b]);
            let d = int(dist_formula(code, u, v) as u64);
            let e = dist(a, b);
            let ratio = &e / &d;
            if acc.c1.as_ref().is_none_or(|c| ratio < *c) {
                acc.c1 = Some(ratio.clone());
            }
            if acc.c2.as_ref().is_none_or(|c| ratio > *c) {
                acc.c2 = Some(ratio);
            }
            let mut problem = None;
            if e > d {
                problem = Some(format!("{u}, {v}: embedded {} exceeds d = {d}", crate::report::exact(&e)));
            } else if &e * &bound < d {
                problem = Some(format!(
                    "{u}, {v}: embedded {} below d / {} with d = {d}",
                    crate::report::exact(&e),
                    crate::report::exact(&bound)
                ));
            } else if updown(code, u, v) && e != d {
                acc.equality = false;
                problem = Some(format!("{u}, {v}: comparable pair embedded at {} not {d}", crate::report::exact(&e)));
            }
            if kind == EmbeddingKind::Linf && &e * int(3) < d {
                acc.third = false;
            }
            if let Some(msg) = problem {
                if acc.violation.as_ref().is_none_or(|(i, _)| t < *i) {
                    acc.violation = Some((t, msg));
                }
            }
            acc
        })
        .reduce(Acc::empty, Acc::merge);

    let c1 = acc.c1.unwrap_or_else(Rat::one);
    let c2 = acc.c2.unwrap_or_else(Rat::one);
    let distortion = (!c1.is_zero()).then(|| &c2 / &c1);
    if kind == EmbeddingKind::Linf {
        extra.third_bound_holds = Some(acc.third);
    }
    let pass = acc.violation.is_none() && acc.equality && distortion.as_ref().is_some_and(|x| *x <= bound);
    extra.first_violation = acc.violation.map(|(_, m)| m);
    Ok(DistortionReport {
        code: code.clone(),
        kappa,
        embedding: kind,
        pairs: pairs.len() as u64,
        c1,
        c2,
        distortion,
        bound,
        comparable_equality: acc.equality,
        pass,
        extra,
    })
}

/// Every code with top height at most `max_height` and depths at most
/// `max_depth`, crossed with a list of branching numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    pub max_height: usize,
    pub max_depth: usize,
    pub kappas: Vec<u32>,
    pub codes: Vec<Code>,
}

impl Corpus {
    /// Codes ordered by height, then lexicographically by depth word.
    pub fn enumerate(max_height: usize, max_depth: usize, kappas: &[u32]) -> Self {
        let mut codes = Vec::new();
        for top in 1..=max_height {
            let interior = top - 1;
            let total = (max_depth + 1).pow(interior as u32);
            for mut idx in 0..total {
                let mut depths = vec![0usize; top + 1];
                for slot in depths[1..top].iter_mut().rev() {
                    *slot = idx % (max_depth + 1);
                    idx /= max_depth + 1;
                }
                codes.push(Code::new(depths).expect("boundary depths are zero"));
            }
        }
        Corpus {
            max_height,
            max_depth,
            kappas: kappas.to_vec(),
            codes,
        }
    }

    pub fn from_codes(codes: Vec<Code>, kappas: &[u32]) -> Self {
        Corpus {
            max_height: codes.iter().map(Code::height).max().unwrap_or(0),
            max_depth: codes.iter().map(Code::max_depth).max().unwrap_or(0),
            kappas: kappas.to_vec(),
            codes,
        }
    }

    pub fn empty() -> Self {
        Corpus::from_codes(Vec::new(), &[])
    }

    /// `(code, κ)` for every code and branching number.
    pub fn entries(&self) -> Vec<(Code, u32)> {
        self.codes
            .iter()
            .flat_map(|c| self.kappas.iter().map(move |&k| (c.clone(), k)))
            .collect()
    }

    /// `H<max_height>:D<max_depth>:K<k1,k2,..>`, e.g. `H6:D2:K2,3`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "corpus spec",
            input: spec.to_string(),
        };
        let mut h = None;
        let mut d = None;
        let mut k = None;
        for part in spec.split(':') {
            let part = part.trim();
            let (tag, rest) = part.split_at(part.chars().next().ok_or_else(err)?.len_utf8());
            match tag {
                "H" | "h" => h = Some(rest.parse::<usize>().map_err(|_| err())?),
                "D" | "d" => d = Some(rest.parse::<usize>().map_err(|_| err())?),
                "K" | "k" => {
                    k = Some(
                        rest.split(',')
                            .map(|x| x.trim().parse::<u32>().map_err(|_| err()))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                _ => return Err(err()),
            }
        }
        let kappas = k.unwrap_or_else(|| vec![2]);
        if kappas.contains(&0) {
            return Err(err());
        }
        Ok(Corpus::enumerate(h.ok_or_else(err)?, d.ok_or_else(err)?, &kappas))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    MetricOracle,
    LemmaL1,
    LemmaEsa,
    Products,
    Bounds,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::MetricOracle, Suite::LemmaL1, Suite::LemmaEsa, Suite::Products, Suite::Bounds];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::MetricOracle => "metric_oracle",
            Suite::LemmaL1 => "lemma_l1",
            Suite::LemmaEsa => "lemma_esa",
            Suite::Products => "products",
            Suite::Bounds => "bounds",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s.trim().replace('-', "_"))
            .ok_or_else(|| Error::Parse {
                what: "suite",
                input: s.to_string(),
            })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub eval: EvalOptions,
    /// ESA entries with a larger `μ` are skipped.
    pub esa_max_mu: u64,
    pub axiom_trials: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            eval: EvalOptions::default(),
            esa_max_mu: 7,
            axiom_trials: 10_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteEntry {
    pub suite: Suite,
    /// What was checked, e.g. a code and branching number.
    pub case: String,
    pub checks: u64,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteSummary {
    pub entries: Vec<SuiteEntry>,
    pub skipped: u64,
}

impl SuiteSummary {
    pub fn cases(&self) -> usize {
        self.entries.len()
    }

    pub fn vacuous(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.failure.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteEntry> {
        self.entries.iter().filter(|e| e.failure.is_some())
    }

    /// One line per suite plus a verdict line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for suite in Suite::ALL {
            let mine: Vec<_> = self.entries.iter().filter(|e| e.suite == suite).collect();
            if mine.is_empty() {
                continue;
            }
            let failed = mine.iter().filter(|e| e.failure.is_some()).count();
            let checks: u64 = mine.iter().map(|e| e.checks).sum();
            out.push_str(&format!("{suite}: {} cases, {checks} checks, {failed} failed\n", mine.len()));
            if let Some(e) = mine.iter().find(|e| e.failure.is_some()) {
                out.push_str(&format!("  first failure [{}]: {}\n", e.case, e.failure.as_deref().unwrap_or("")));
            }
        }
        if self.skipped > 0 {
            out.push_str(&format!("skipped: {} cases above size caps\n", self.skipped));
        }
        let verdict = if self.vacuous() {
            "PASS (vacuous: 0 cases)".to_string()
        } else if self.pass() {
            format!("PASS ({} cases)", self.cases())
        } else {
            format!("FAIL ({} of {} cases)", self.failures().count(), self.cases())
        };
        out.push_str(&verdict);
        out.push('\n');
        out
    }
}

fn entry(suite: Suite, case: String, outcome: std::result::Result<u64, String>) -> SuiteEntry {
    match outcome {
        Ok(checks) => SuiteEntry {
            suite,
            case,
            checks,
            failure: None,
        },
        Err(msg) => SuiteEntry {
            suite,
            case,
            checks: 0,
            failure: Some(msg),
        },
    }
}

fn case_name(code: &Code, kappa: u32) -> String {
    format!("({code}) kappa={kappa}")
}

/// BFS against the closed form on every pair, plus symmetry, the triangle
/// inequality, unit edges and `d ≥ |r − s|`.
pub fn metric_oracle(code: &Code, kappa: u32, vertex_limit: u64) -> std::result::Result<u64, String> {
    let g = BundleGraph::materialize_with_limit(code, kappa, vertex_limit).map_err(|e| e.to_string())?;
    let vs = g.vertices();
    let n = vs.len();
    let table: Vec<Vec<usize>> = (0..n).map(|a| g.bfs_from(a)).collect();
    let mut checks = 0u64;
    for a in 0..n {
        for b in 0..n {
            let (u, v) = (&vs[a], &vs[b]);
            let f = dist_formula(code, u, v);
            if f != table[a][b] {
                return Err(format!("d({u}, {v}): formula {f}, BFS {}", table[a][b]));
            }
            if table[a][b] != table[b][a] {
                return Err(format!("d({u}, {v}) is not symmetric"));
            }
            if f < u.height.abs_diff(v.height) {
                return Err(format!("d({u}, {v}) = {f} below the height gap"));
            }
            if g.has_edge(a, b) && f != 1 {
                return Err(format!("edge {u} -- {v} at distance {f}"));
            }
            checks += 4;
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[a][c] > table[a][b] + table[b][c] {
                    return Err(format!("triangle inequality fails at {}, {}, {}", vs[a], vs[b], vs[c]));
                }
            }
        }
    }
    Ok(checks + (n * n * n) as u64)
}

fn lemma_l1(code: &Code, kappa: u32, opts: &EvalOptions) -> std::result::Result<u64, String> {
    let emb = embed_l1::build_l1_with(
        code,
        kappa,
        L1Options {
            mode: opts.scale_mode,
            vertex_limit: opts.vertex_limit,
            interval_limit: opts.interval_limit,
        },
    )
    .map_err(|e| e.to_string())?;
    Ok(embed_l1::check_selection_lemma(&emb)? + embed_l1::check_piece_lemma(&emb)? + embed_l1::check_intersection_lemma(&emb)?)
}

fn lemma_esa(code: &Code, kappa: u32, opts: &EvalOptions) -> std::result::Result<u64, String> {
    let emb = embed_esa::build_esa_with(
        code,
        kappa,
        EsaOptions {
            length_cap: opts.esa_length_cap,
            vertex_limit: opts.vertex_limit,
        },
    )
    .map_err(|e| e.to_string())?;
    let p = p_param(code, opts.convention).map_err(|e| e.to_string())?;
    Ok(embed_esa::check_block_lemma(&emb)? + embed_esa::check_separation(&emb, p)?)
}

fn bounds(code: &Code, kappa: u32, kind: EmbeddingKind, opts: &EvalOptions) -> std::result::Result<u64, String> {
    let report = evaluate_with(kind, code, kappa, PairPolicy::All, *opts).map_err(|e| e.to_string())?;
    if report.pass {
        Ok(report.pairs)
    } else {
        Err(report.extra.first_violation.unwrap_or_else(|| {
            format!(
                "distortion {} above bound {}",
                report.distortion.as_ref().map_or("inf".into(), crate::report::exact),
                crate::report::exact(&report.bound)
            )
        }))
    }
}

/// `⊘` on one code pair: the composed `x''`/`y''` tables, the
/// `p(W⊘W') ≤ max(p(W), p(W'))` inequality under both conventions, and
/// the closed form against level-by-level composition.
pub fn product_pair(w: &Code, wp: &Code) -> std::result::Result<u64, String> {
    let name = || format!("({w}) / ({wp})");
    products::check_composed_xy(w, wp).map_err(|(r, i)| format!("{}: composed x/y differ at r={r}, i={i}", name()))?;
    let composed = products::oslash(w, wp);
    for conv in [IndexConvention::Positive, IndexConvention::IncludeZero] {
        let p = |c: &Code| p_param(c, conv).map_err(|e| e.to_string());
        let (pw, pwp, pc) = (p(w)?, p(wp)?, p(&composed)?);
        if pc > pw.max(pwp) {
            return Err(format!("{}: p = {pc} exceeds max({pw}, {pwp}) under {conv}", name()));
        }
    }
    let by_levels = products::oslash_by_levels(w, wp).map_err(|e| e.to_string())?;
    if by_levels != composed {
        return Err(format!("{}: closed form ({composed}) but levelwise ({by_levels})", name()));
    }
    Ok(4)
}

fn named_products(kappa: u32) -> Vec<SuiteEntry> {
    let mut out = Vec::new();
    for name in ["diamond", "laakso", "parasol"] {
        let g = products::named_base(name).expect("known base");
        let case = format!("{name} / {name} kappa={kappa}");
        let iso = products::check_isomorphism(&g, &g, Levels::All, kappa)
            .map_err(|e| e.to_string())
            .and_then(|c| {
                if c.holds() {
                    Ok((c.vertices + c.edges) as u64)
                } else {
                    Err(format!("isomorphism fails: {:?}", c.mismatch))
                }
            });
        out.push(entry(Suite::Products, format!("{case} isomorphism"), iso));
        let metric = products::check_metric_consistency(&g, &g, Levels::All, kappa)
            .map_err(|e| e.to_string())
            .and_then(|r| r);
        out.push(entry(Suite::Products, format!("{case} metric"), metric));
    }
    out
}

/// Runs the chosen suites over the corpus. Entries run in parallel; the
/// order of the summary is deterministic.
pub fn run_suite(corpus: &Corpus, suites: &[Suite], opts: &SuiteOptions) -> SuiteSummary {
    let mut suites = suites.to_vec();
    suites.sort_unstable();
    suites.dedup();
    let entries = corpus.entries();
    let mut out = Vec::new();
    let mut skipped = 0u64;
    let esa_ok = |code: &Code, kappa: u32| embed_esa::mu(code, kappa).is_some_and(|m| m <= opts.esa_max_mu);

    for suite in suites {
        match suite {
            Suite::MetricOracle => {
                out.extend(entries.par_iter().map(|(c, k)| {
                    entry(suite, case_name(c, *k), metric_oracle(c, *k, opts.eval.vertex_limit))
                }).collect::<Vec<_>>());
            }
            Suite::LemmaL1 => {
                out.extend(entries.par_iter().map(|(c, k)| entry(suite, case_name(c, *k), lemma_l1(c, *k, &opts.eval))).collect::<Vec<_>>());
            }
            Suite::LemmaEsa => {
                let (run, skip): (Vec<_>, Vec<_>) = entries.iter().partition(|(c, k)| esa_ok(c, *k));
                skipped += skip.len() as u64;
                if !entries.is_empty() {
                    let axioms = embed_esa::check_esa_axioms(opts.axiom_trials, opts.seed)
                        .map(|_| opts.axiom_trials as u64)
                        .map_err(|v| format!("{v:?}"));
                    out.push(entry(suite, format!("summing norm axioms, {} trials", opts.axiom_trials), axioms));
                }
                out.extend(run.par_iter().map(|(c, k)| entry(suite, case_name(c, *k), lemma_esa(c, *k, &opts.eval))).collect::<Vec<_>>());
            }
            Suite::Products => {
                let codes = &corpus.codes;
                out.extend(
                    codes
                        .par_iter()
                        .map(|w| {
                            let outcome = codes.iter().try_fold(0u64, |acc, wp| Ok(acc + product_pair(w, wp)?));
                            entry(suite, format!("({w}) / corpus"), outcome)
                        })
                        .collect::<Vec<_>>(),
                );
                if !codes.is_empty() {
                    for &k in &corpus.kappas {
                        out.extend(named_products(k));
                    }
                }
            }
            Suite::Bounds => {
                for kind in EmbeddingKind::ALL {
                    let run: Vec<_> = entries
                        .iter()
                        .filter(|(c, k)| kind != EmbeddingKind::Esa || esa_ok(c, *k))
                        .collect();
                    skipped += (entries.len() - run.len()) as u64;
                    out.extend(
                        run.par_iter()
                            .map(|(c, k)| entry(suite, format!("{kind} {}", case_name(c, *k)), bounds(c, *k, kind, &opts.eval)))
                            .collect::<Vec<_>>(),
                    );
                }
            }
        }
    }
    SuiteSummary { entries: out, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed_l1::intervals::rat;

    fn c(s: &str) -> Code {
        s.parse().unwrap()
    }

    #[test]
    fn corpus_sizes() {
        assert_eq!(Corpus::enumerate(6, 2, &[2]).codes.len(), 364);
        assert_eq!(Corpus::enumerate(4, 1, &[2]).codes.len(), 1 + 2 + 4 + 8);
        let k = Corpus::enumerate(3, 1, &[2, 3]);
        assert_eq!(k.entries().len(), 14);
        assert_eq!(k.codes[0].to_string(), "0,0");
        assert_eq!(Corpus::parse_spec("H6:D2:K2,3").unwrap().kappas, vec![2, 3]);
        assert!(Corpus::parse_spec("H6").is_err());
    }

    #[test]
    fn sampled_pairs_are_distinct_and_ordered() {
        let all = select_pairs(7, PairPolicy::All);
        assert_eq!(all.len(), 21);
        let s = select_pairs(7, PairPolicy::Sample { n: 10, seed: 3 });
        assert_eq!(s.len(), 10);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|p| all.contains(p)));
        assert_eq!(s, select_pairs(7, PairPolicy::Sample { n: 10, seed: 3 }));
        assert_eq!(select_pairs(7, PairPolicy::Sample { n: 100, seed: 0 }), all);
    }

    #[test]
    fn diamond_reports() {
        let d = c("0,1,0");
        for kind in [EmbeddingKind::L1, EmbeddingKind::Linf] {
            let r = evaluate(kind, &d, 2, PairPolicy::All).unwrap();
            assert_eq!(r.distortion, Some(int(2)), "{kind}");
            assert_eq!(r.c1, rat(1, 2));
            assert_eq!(r.c2, int(1));
            assert_eq!(r.pairs, 6);
            assert!(r.pass && r.comparable_equality);
        }
        let r = evaluate(EmbeddingKind::Linf, &d, 2, PairPolicy::All).unwrap();
        assert_eq!(r.extra.third_bound_holds, Some(true));
        let r = evaluate(EmbeddingKind::Esa, &d, 2, PairPolicy::All).unwrap();
        assert_eq!(r.bound, int(8));
        assert!(r.pass);
    }

    #[test]
    fn single_edge_is_isometric() {
        for kind in EmbeddingKind::ALL {
            let r = evaluate(kind, &Code::edge(), 2, PairPolicy::All).unwrap();
            assert_eq!(r.pairs, 1);
            assert_eq!(r.distortion, Some(int(1)));
            assert!(r.pass);
        }
    }

    #[test]
    fn suites_on_small_corpora() {
        let small = Corpus::enumerate(4, 1, &[2]);
        let s = run_suite(&small, &[Suite::MetricOracle], &SuiteOptions::default());
        assert!(s.pass() && !s.vacuous());
        let diamond = Corpus::from_codes(vec![c("0,1,0")], &[2]);
        let s = run_suite(&diamond, &Suite::ALL, &SuiteOptions::default());
        assert!(s.pass(), "{}", s.render());
        let s = run_suite(&Corpus::empty(), &Suite::ALL, &SuiteOptions::default());
        assert!(s.vacuous() && s.pass());
        assert!(s.render().contains("vacuous"));
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("lemma-l1".parse::<Suite>().is_ok());
        assert!("nope".parse::<Suite>().is_err());
    }
}
