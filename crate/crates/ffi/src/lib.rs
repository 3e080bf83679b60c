//! C ABI over `bundle_embed`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns a
//! [`BeStatus`]; on failure `be_last_error()` describes the problem for the
//! calling thread. Strings returned through `char **` out-parameters are
//! owned by the caller and released with `be_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bundle_embed::coding::{p_param, Code, IndexConvention, Vertex};
use bundle_embed::error::Error;
use bundle_embed::graph::{dist_formula, BundleGraph};
use bundle_embed::harness;
use bundle_embed::products;
use bundle_embed::report::{exact, DistortionReport, EmbeddingKind, PairPolicy};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BeStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidCode = 4,
    InvalidVertex = 5,
    SizeGuard = 6,
    Overflow = 7,
    EsaCap = 8,
    Embedding = 9,
    Usage = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BeEmbedding {
    Linf = 0,
    L1 = 1,
    Esa = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BeConvention {
    Positive = 0,
    IncludeZero = 1,
}

/// A validated depth code.
pub struct BeCode(Code);

/// A materialized bundle graph.
pub struct BeGraph(BundleGraph);

/// A distortion report.
pub struct BeReport(DistortionReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BeStatus {
    match e {
        Error::InvalidCode(_) | Error::HeightOutOfRange { .. } => BeStatus::InvalidCode,
        Error::Parse { .. } => BeStatus::Parse,
        Error::InvalidVertex { .. } => BeStatus::InvalidVertex,
        Error::SizeGuard { .. } => BeStatus::SizeGuard,
        Error::Overflow(_) => BeStatus::Overflow,
        Error::EsaCap { .. } => BeStatus::EsaCap,
        Error::Usage(_) | Error::MalformedComposite(_) => BeStatus::Usage,
        Error::NoPParam { .. }
        | Error::SelectionOutOfRange { .. }
        | Error::UnregisteredBase
        | Error::NotGridRepresentable { .. }
        | Error::NonIntegerSelection { .. }
        | Error::NotCylinder(_) => BeStatus::Embedding,
    }
}

struct Fail(BeStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BeStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            BeStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(BeStatus::NullArgument, format!("{what} is null"))
}

unsafe fn arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(BeStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(BeStatus::Panic, "string contains a nul byte".into()))?;
    put(out, c.into_raw(), "out")
}

fn vertex(s: &str) -> Result<Vertex, Fail> {
    Ok(s.parse::<Vertex>()?)
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn be_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn be_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a depth word such as `"0,1,0"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_code_parse(s: *const c_char, out: *mut *mut BeCode) -> BeStatus {
    guard(|| {
        let code: Code = text(s, "code text")?.parse()?;
        put(out, Box::into_raw(Box::new(BeCode(code))), "out")
    })
}

/// # Safety
/// `code` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn be_code_free(code: *mut BeCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_code_to_string(code: *const BeCode, out: *mut *mut c_char) -> BeStatus {
    guard(|| put_string(out, arg(code, "code")?.0.to_string()))
}

/// Top height `M + 1`.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_code_height(code: *const BeCode, out: *mut usize) -> BeStatus {
    guard(|| put(out, arg(code, "code")?.0.height(), "out"))
}

/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_p_param(code: *const BeCode, convention: BeConvention, out: *mut usize) -> BeStatus {
    guard(|| {
        let conv = match convention {
            BeConvention::Positive => IndexConvention::Positive,
            BeConvention::IncludeZero => IndexConvention::IncludeZero,
        };
        put(out, p_param(&arg(code, "code")?.0, conv)?, "out")
    })
}

/// Closed-form distance between vertices written as `r:(a1,a2,..)`.
///
/// # Safety
/// Handles and strings must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_dist(code: *const BeCode, u: *const c_char, v: *const c_char, out: *mut usize) -> BeStatus {
    guard(|| {
        let code = &arg(code, "code")?.0;
        let (u, v) = (vertex(text(u, "u")?)?, vertex(text(v, "v")?)?);
        code.check_vertex(&u, None)?;
        code.check_vertex(&v, None)?;
        put(out, dist_formula(code, &u, &v), "out")
    })
}

/// `W ⊘ W'`.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_oslash(w: *const BeCode, w2: *const BeCode, out: *mut *mut BeCode) -> BeStatus {
    guard(|| {
        let c = products::oslash(&arg(w, "w")?.0, &arg(w2, "w2")?.0);
        put(out, Box::into_raw(Box::new(BeCode(c))), "out")
    })
}

/// The `k`-th member of the family generated by `w`, `k >= 1`.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_family(w: *const BeCode, k: usize, out: *mut *mut BeCode) -> BeStatus {
    guard(|| {
        let c = products::family(&arg(w, "w")?.0, k)?;
        put(out, Box::into_raw(Box::new(BeCode(c))), "out")
    })
}

/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_graph_materialize(code: *const BeCode, kappa: u32, out: *mut *mut BeGraph) -> BeStatus {
    guard(|| {
        let g = BundleGraph::materialize(&arg(code, "code")?.0, kappa)?;
        put(out, Box::into_raw(Box::new(BeGraph(g))), "out")
    })
}

/// # Safety
/// `graph` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn be_graph_free(graph: *mut BeGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// Handles must be valid; out-parameters must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_graph_size(graph: *const BeGraph, vertices: *mut usize, edges: *mut usize) -> BeStatus {
    guard(|| {
        let g = &arg(graph, "graph")?.0;
        put(vertices, g.vertex_count(), "vertices")?;
        put(edges, g.edge_count(), "edges")
    })
}

/// Vertex and edge listing, one per line.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_graph_dump(graph: *const BeGraph, out: *mut *mut c_char) -> BeStatus {
    guard(|| put_string(out, arg(graph, "graph")?.0.dump()))
}

/// Breadth-first distance.
///
/// # Safety
/// Handles and strings must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_graph_dist_bfs(graph: *const BeGraph, u: *const c_char, v: *const c_char, out: *mut usize) -> BeStatus {
    guard(|| {
        let g = &arg(graph, "graph")?.0;
        put(out, g.dist_bfs(&vertex(text(u, "u")?)?, &vertex(text(v, "v")?)?)?, "out")
    })
}

/// Builds an embedding and evaluates its distortion. `pairs` is `"all"`,
/// `"sample:N"` or `"sample:N:SEED"`; NULL means all pairs.
///
/// # Safety
/// Handles and strings must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_evaluate(
    embedding: BeEmbedding,
    code: *const BeCode,
    kappa: u32,
    pairs: *const c_char,
    out: *mut *mut BeReport,
) -> BeStatus {
    guard(|| {
        let kind = match embedding {
            BeEmbedding::Linf => EmbeddingKind::Linf,
            BeEmbedding::L1 => EmbeddingKind::L1,
            BeEmbedding::Esa => EmbeddingKind::Esa,
        };
        let policy: PairPolicy = if pairs.is_null() {
            PairPolicy::All
        } else {
            text(pairs, "pairs")?.parse()?
        };
        let r = harness::evaluate(kind, &arg(code, "code")?.0, kappa, policy)?;
        put(out, Box::into_raw(Box::new(BeReport(r))), "out")
    })
}

/// # Safety
/// `report` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn be_report_free(report: *mut BeReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_report_pass(report: *const BeReport, out: *mut bool) -> BeStatus {
    guard(|| put(out, arg(report, "report")?.0.pass, "out"))
}

/// Exact distortion as `"a/b"`, or `"inf"`.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_report_distortion(report: *const BeReport, out: *mut *mut c_char) -> BeStatus {
    guard(|| {
        let r = &arg(report, "report")?.0;
        put_string(out, r.distortion.as_ref().map_or_else(|| "inf".to_string(), exact))
    })
}

/// The report in the same JSON layout the command-line tool prints.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn be_report_json(report: *const BeReport, out: *mut *mut c_char) -> BeStatus {
    guard(|| put_string(out, arg(report, "report")?.0.to_json(None)))
}
