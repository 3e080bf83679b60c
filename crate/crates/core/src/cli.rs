//! Command-line front end.
//!
//! Exit status: 0 on success or a passing verification, 1 when a
//! verification or suite fails, 2 on usage, parse or size-guard errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::coding::{p_param, Code, IndexConvention, Vertex};
use crate::embed_esa::{self, EsaOptions};
use crate::embed_l1::{self, L1Options, ScaleMode};
use crate::embed_linf::psi_linf;
use crate::error::Error;
use crate::graph::{self, dist_formula, BundleGraph};
use crate::harness::{self, Corpus, EvalOptions, Suite, SuiteOptions};
use crate::products::{self, Levels};
use crate::report::{csv_row, EmbeddingKind, PairPolicy, CSV_HEADER};

#[derive(Parser, Debug)]
#[command(name = "bundle-embed", version, about = "Bundle graphs from depth codes and their bi-Lipschitz embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report errors on stderr as a JSON object.
    #[arg(long, global = true)]
    json_errors: bool,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Materialize T_{W,κ} and dump its vertices and edges.
    Graph {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Distance between two vertices by the closed form, optionally by BFS.
    Dist {
        #[arg(long = "w", value_name = "CODE")]
        code: Code,
        #[arg(long)]
        u: Vertex,
        #[arg(long)]
        v: Vertex,
        /// Branching number; defaults to the smallest one the addresses allow.
        #[arg(long)]
        kappa: Option<u32>,
        /// Also run BFS on the materialized graph.
        #[arg(long)]
        bfs: bool,
        #[arg(long, default_value_t = graph::DEFAULT_VERTEX_LIMIT)]
        vertex_limit: u64,
    },
    /// Build an embedding and dump it per vertex.
    Embed {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_name = "linf|l1|esa")]
        embedding: EmbeddingKind,
        #[command(flatten)]
        modes: ModeArgs,
        /// ESA only: number of blocks to show.
        #[arg(long, default_value_t = 8)]
        blocks: u64,
    },
    /// Distortion report for one embedding.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_name = "linf|l1|esa")]
        embedding: EmbeddingKind,
        /// `all`, `sample:N` or `sample:N:SEED`.
        #[arg(long, default_value = "all")]
        pairs: PairPolicy,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        #[command(flatten)]
        modes: ModeArgs,
        /// Add a `meta` object with version and timing.
        #[arg(long)]
        meta: bool,
    },
    /// Run invariant suites over a corpus.
    Suite {
        /// `H<max height>:D<max depth>:K<k1,k2,..>`.
        #[arg(long, default_value = "H6:D2:K2,3", conflicts_with = "codes")]
        corpus: String,
        /// Explicit codes instead of an enumerated corpus (repeatable).
        #[arg(long = "w", value_name = "CODE")]
        codes: Vec<Code>,
        /// Branching numbers for `--w` codes.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        kappas: Vec<u32>,
        /// Comma-separated suites; all when omitted.
        #[arg(long, value_delimiter = ',')]
        suites: Vec<Suite>,
        #[command(flatten)]
        modes: ModeArgs,
        /// ESA entries with a larger μ are skipped.
        #[arg(long, default_value_t = 7)]
        esa_max_mu: u64,
        #[arg(long, default_value_t = 10_000)]
        axiom_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Compose two codes with the ⊘ product.
    Oslash {
        #[arg(long = "w", value_name = "CODE")]
        code: Code,
        #[arg(long = "w2", value_name = "CODE")]
        second: Code,
        /// Replace only the edges between heights n and n+1.
        #[arg(long)]
        n: Option<usize>,
        /// Check the edge-replacement graph against the composed code.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 2)]
        kappa: u32,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Iterate ⊘ on a base code; with `--embedding`, a CSV distortion sweep.
    Family {
        #[arg(long = "w", value_name = "CODE")]
        code: Code,
        /// Largest family index.
        #[arg(long)]
        k: usize,
        #[arg(long)]
        embedding: Option<EmbeddingKind>,
        #[arg(long, default_value_t = 2)]
        kappa: u32,
        #[arg(long, default_value = "all")]
        pairs: PairPolicy,
        #[command(flatten)]
        modes: ModeArgs,
        #[arg(long, default_value_t = products::DEFAULT_FAMILY_LENGTH_LIMIT)]
        length_limit: usize,
    },
    /// p_W under both index conventions.
    Pw {
        #[arg(long = "w", value_name = "CODE")]
        code: Code,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
}

#[derive(Args, Debug)]
struct CodeArgs {
    /// Depth word, e.g. `0,1,0`.
    #[arg(long = "w", value_name = "CODE")]
    code: Code,
    #[arg(long, default_value_t = 2)]
    kappa: u32,
}

#[derive(Args, Debug)]
struct ModeArgs {
    #[arg(long, default_value_t = ScaleMode::Separated, value_name = "separated|paper_exact")]
    scale_mode: ScaleMode,
    #[arg(long, default_value_t = IndexConvention::Positive, value_name = "positive|include_zero")]
    convention: IndexConvention,
    #[arg(long, default_value_t = graph::DEFAULT_VERTEX_LIMIT)]
    vertex_limit: u64,
    #[arg(long, default_value_t = embed_esa::DEFAULT_LENGTH_CAP)]
    esa_length_cap: u64,
    #[arg(long, default_value_t = embed_l1::DEFAULT_INTERVAL_LIMIT)]
    interval_limit: usize,
}

impl ModeArgs {
    fn eval(&self) -> EvalOptions {
        EvalOptions {
            scale_mode: self.scale_mode,
            convention: self.convention,
            vertex_limit: self.vertex_limit,
            esa_length_cap: self.esa_length_cap,
            interval_limit: self.interval_limit,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
    Text,
}

/// What a command produced: its output and whether its checks held.
struct Done {
    output: String,
    ok: bool,
}

impl Done {
    fn ok(output: String) -> Self {
        Done { output, ok: true }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidCode(_) => "invalid_code",
        Error::Parse { .. } => "parse",
        Error::HeightOutOfRange { .. } => "height_out_of_range",
        Error::InvalidVertex { .. } => "invalid_vertex",
        Error::SizeGuard { .. } => "size_guard",
        Error::Overflow(_) => "overflow",
        Error::NoPParam { .. } => "no_p_param",
        Error::SelectionOutOfRange { .. } => "selection_out_of_range",
        Error::UnregisteredBase => "unregistered_base",
        Error::NotGridRepresentable { .. } => "not_grid_representable",
        Error::NonIntegerSelection { .. } => "non_integer_selection",
        Error::NotCylinder(_) => "not_cylinder",
        Error::EsaCap { .. } => "esa_cap",
        Error::MalformedComposite(_) => "malformed_composite",
        Error::Usage(_) => "usage",
    }
}

fn report_error(kind: &str, message: &str, as_json: bool) {
    if as_json {
        eprintln!("{}", json!({ "error": kind, "message": message }));
    } else {
        eprintln!("error: {message}");
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let as_json = args.iter().any(|a| a == "--json-errors");
            if as_json {
                report_error("usage", e.render().to_string().trim(), true);
            } else {
                eprint!("{}", e.render());
            }
            return 2;
        }
    };
    match execute(&cli.command) {
        Ok(done) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &done.output) {
                    report_error("io", &format!("cannot write {}: {e}", path.display()), cli.json_errors);
                    return 2;
                }
            } else {
                print!("{}", done.output);
            }
            if done.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            report_error(error_kind(&e), &e.to_string(), cli.json_errors);
            2
        }
    }
}

fn lines<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().fold(String::new(), |mut s, x| {
        let _ = writeln!(s, "{x}");
        s
    })
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

fn execute(cmd: &Command) -> Result<Done, Error> {
    match cmd {
        Command::Graph { code, format } => {
            let g = BundleGraph::materialize(&code.code, code.kappa)?;
            Ok(Done::ok(match format {
                TextFormat::Text => g.dump(),
                TextFormat::Json => pretty(&json!({
                    "code": code.code.to_string(),
                    "kappa": code.kappa,
                    "vertices": g.vertices().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "edges": g.edges(),
                })),
            }))
        }
        Command::Dist {
            code,
            u,
            v,
            kappa,
            bfs,
            vertex_limit,
        } => {
            let kappa = kappa.unwrap_or_else(|| {
                [u, v]
                    .iter()
                    .filter_map(|x| x.address.max_entry())
                    .max()
                    .map_or(1, |m| m + 1)
            });
            code.check_vertex(u, Some(kappa))?;
            code.check_vertex(v, Some(kappa))?;
            let d = dist_formula(code, u, v);
            if !bfs {
                return Ok(Done::ok(format!("{d}\n")));
            }
            let g = BundleGraph::materialize_with_limit(code, kappa, *vertex_limit)?;
            let b = g.dist_bfs(u, v)?;
            Ok(Done {
                output: format!("formula {d}\nbfs {b}\n"),
                ok: b == d,
            })
        }
        Command::Embed {
            code,
            embedding,
            modes,
            blocks,
        } => {
            let (w, kappa) = (&code.code, code.kappa);
            let out = match embedding {
                EmbeddingKind::Linf => {
                    let count = graph::vertex_count(w, kappa).ok_or(Error::Overflow("vertex count"))?;
                    if count > modes.vertex_limit {
                        return Err(Error::SizeGuard {
                            count: count.to_string(),
                            limit: modes.vertex_limit,
                        });
                    }
                    let mut s = String::new();
                    for v in harness::code_vertices(w, kappa) {
                        let psi = psi_linf(w, &v)?;
                        let coeffs: Vec<String> = psi.iter().map(|(a, c)| format!("{a}:{c}")).collect();
                        let _ = writeln!(s, "{v} norm={} [{}]", psi.norm(), coeffs.join(" "));
                    }
                    s
                }
                EmbeddingKind::L1 => embed_l1::build_l1_with(
                    w,
                    kappa,
                    L1Options {
                        mode: modes.scale_mode,
                        vertex_limit: modes.vertex_limit,
                        interval_limit: modes.interval_limit,
                    },
                )?
                .dump(),
                EmbeddingKind::Esa => embed_esa::build_esa_with(
                    w,
                    kappa,
                    EsaOptions {
                        length_cap: modes.esa_length_cap,
                        vertex_limit: modes.vertex_limit,
                    },
                )?
                .dump(*blocks),
            };
            Ok(Done::ok(out))
        }
        Command::Verify {
            code,
            embedding,
            pairs,
            format,
            modes,
            meta,
        } => {
            let start = Instant::now();
            let report = harness::evaluate_with(*embedding, &code.code, code.kappa, *pairs, modes.eval())?;
            let seconds = start.elapsed().as_secs_f64();
            let output = match format {
                ReportFormat::Json => {
                    let meta = meta.then(|| json!({ "version": env!("CARGO_PKG_VERSION"), "seconds": seconds }));
                    format!("{}\n", report.to_json(meta))
                }
                ReportFormat::Csv => format!("{CSV_HEADER}\n{}\n", csv_row(&report, None, seconds)),
                ReportFormat::Text => {
                    let v = report.to_json_value();
                    let field = |k: &str| v[k].as_str().unwrap_or_default().to_string();
                    let mut s = format!(
                        "{} on ({}) kappa={}: {} pairs, c1={} c2={} distortion={} bound={} comparable_equality={} pass={}\n",
                        report.embedding,
                        report.code,
                        report.kappa,
                        report.pairs,
                        field("c1_exact"),
                        field("c2_exact"),
                        field("distortion_exact"),
                        field("bound_exact"),
                        report.comparable_equality,
                        report.pass
                    );
                    if let Some(t) = report.extra.third_bound_holds {
                        let _ = writeln!(s, "d/3 bound holds: {t}");
                    }
                    if let Some(f) = &report.extra.first_violation {
                        let _ = writeln!(s, "first violation: {f}");
                    }
                    s
                }
            };
            Ok(Done {
                output,
                ok: report.pass,
            })
        }
        Command::Suite {
            corpus,
            codes,
            kappas,
            suites,
            modes,
            esa_max_mu,
            axiom_trials,
            seed,
            format,
        } => {
            if kappas.contains(&0) {
                return Err(Error::Usage("kappa must be at least 1".into()));
            }
            let corpus = if codes.is_empty() {
                Corpus::parse_spec(corpus)?
            } else {
                Corpus::from_codes(codes.clone(), kappas)
            };
            let suites = if suites.is_empty() { Suite::ALL.to_vec() } else { suites.clone() };
            let opts = SuiteOptions {
                eval: modes.eval(),
                esa_max_mu: *esa_max_mu,
                axiom_trials: *axiom_trials,
                seed: *seed,
            };
            let summary = harness::run_suite(&corpus, &suites, &opts);
            let output = match format {
                TextFormat::Text => summary.render(),
                TextFormat::Json => pretty(&json!({
                    "pass": summary.pass(),
                    "vacuous": summary.vacuous(),
                    "cases": summary.cases(),
                    "skipped": summary.skipped,
                    "entries": summary.entries.iter().map(|e| json!({
                        "suite": e.suite.to_string(),
                        "case": e.case,
                        "checks": e.checks,
                        "failure": e.failure,
                    })).collect::<Vec<_>>(),
                })),
            };
            Ok(Done {
                output,
                ok: summary.pass(),
            })
        }
        Command::Oslash {
            code,
            second,
            n,
            check,
            kappa,
            format,
        } => {
            let (composed, levels) = match n {
                Some(n) => (products::oslash_n(code, second, *n)?, Levels::Single(*n)),
                None => (products::oslash(code, second), Levels::All),
            };
            let iso = if *check {
                Some(products::check_isomorphism(code, second, levels, *kappa)?)
            } else {
                None
            };
            let ok = iso.as_ref().is_none_or(|c| c.holds());
            let output = match format {
                TextFormat::Text => {
                    let mut s = format!("{composed}\n");
                    if let Some(c) = &iso {
                        match &c.mismatch {
                            None => {
                                let _ = writeln!(s, "isomorphism holds: {} vertices, {} edges", c.vertices, c.edges);
                            }
                            Some(m) => {
                                let _ = writeln!(s, "isomorphism fails: {m}");
                            }
                        }
                    }
                    s
                }
                TextFormat::Json => pretty(&json!({
                    "code": composed.to_string(),
                    "isomorphism": iso.as_ref().map(|c| json!({
                        "holds": c.holds(),
                        "vertices": c.vertices,
                        "edges": c.edges,
                        "mismatch": c.mismatch,
                    })),
                })),
            };
            Ok(Done { output, ok })
        }
        Command::Family {
            code,
            k,
            embedding,
            kappa,
            pairs,
            modes,
            length_limit,
        } => {
            let members = (1..=*k)
                .map(|i| products::family_with_limit(code, i, *length_limit))
                .collect::<Result<Vec<_>, _>>()?;
            let Some(kind) = embedding else {
                return Ok(Done::ok(lines(members.iter().enumerate().map(|(i, c)| format!("{} {c}", i + 1)))));
            };
            let mut out = format!("{CSV_HEADER}\n");
            let mut ok = true;
            for (i, member) in members.iter().enumerate() {
                let start = Instant::now();
                let report = harness::evaluate_with(*kind, member, *kappa, *pairs, modes.eval())?;
                ok &= report.pass;
                let _ = writeln!(out, "{}", csv_row(&report, Some(i + 1), start.elapsed().as_secs_f64()));
            }
            Ok(Done { output: out, ok })
        }
        Command::Pw { code, format } => {
            let pos = p_param(code, IndexConvention::Positive)?;
            let zero = p_param(code, IndexConvention::IncludeZero)?;
            Ok(Done::ok(match format {
                TextFormat::Text => format!("positive {pos}\ninclude_zero {zero}\n"),
                TextFormat::Json => pretty(&json!({
                    "code": code.to_string(),
                    "positive": pos,
                    "include_zero": zero,
                })),
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_subcommand() {
        for argv in [
            "x graph --w 0,1,0",
            "x dist --w 0,1,0 --u 1:(0) --v 1:(1) --bfs",
            "x embed --w 0,1,0 --embedding esa --blocks 2",
            "x verify --w 0,1,0 --embedding l1 --pairs sample:3:7 --format csv --scale-mode paper_exact",
            "x suite --corpus H3:D1:K2 --suites metric_oracle,bounds",
            "x suite --w 0,1,0 --w 0,0 --kappas 2,3",
            "x oslash --w 0,1,0 --w2 0,1,0 --n 0 --check",
            "x family --w 0,1,0 --k 3 --embedding linf",
            "x pw --w 0,1,0 --format json --json-errors",
        ] {
            let parsed = Cli::try_parse_from(argv.split(' '));
            assert!(parsed.is_ok(), "{argv}: {:?}", parsed.err());
        }
        assert!(Cli::try_parse_from("x verify --w 0,1 --embedding l1".split(' ')).is_err());
        assert!(Cli::try_parse_from("x verify --w 0,1,0 --embedding l2".split(' ')).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run("x pw --w 0,1,0".split(' ')), 0);
        assert_eq!(run("x pw --w 1,0".split(' ')), 2);
        assert_eq!(run("x graph --w 0,3,0 --kappa 1000".split(' ')), 2);
    }
}
