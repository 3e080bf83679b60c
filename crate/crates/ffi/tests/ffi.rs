use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use bundle_embed_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    be_string_free(s);
    out
}

unsafe fn parse(s: &str) -> *mut BeCode {
    let mut code = ptr::null_mut();
    assert_eq!(be_code_parse(c(s).as_ptr(), &mut code), BeStatus::Ok);
    code
}

unsafe fn last_error() -> String {
    CStr::from_ptr(be_last_error()).to_str().unwrap().to_owned()
}

#[test]
fn codes_and_products() {
    unsafe {
        let w = parse("0,1,0");
        let mut n = 0;
        assert_eq!(be_code_height(w, &mut n), BeStatus::Ok);
        assert_eq!(n, 2);
        assert_eq!(be_p_param(w, BeConvention::Positive, &mut n), BeStatus::Ok);
        assert_eq!(n, 1);
        assert_eq!(be_p_param(w, BeConvention::IncludeZero, &mut n), BeStatus::Ok);
        assert_eq!(n, 2);

        let mut prod = ptr::null_mut();
        assert_eq!(be_oslash(w, w, &mut prod), BeStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(be_code_to_string(prod, &mut s), BeStatus::Ok);
        assert_eq!(take(s), "0,2,1,2,0");
        be_code_free(prod);

        let mut fam = ptr::null_mut();
        assert_eq!(be_family(w, 2, &mut fam), BeStatus::Ok);
        assert_eq!(be_code_to_string(fam, &mut s), BeStatus::Ok);
        assert_eq!(take(s), "0,2,1,2,0");
        be_code_free(fam);
        be_code_free(w);
    }
}

#[test]
fn distances_agree_with_the_graph() {
    unsafe {
        let w = parse("0,0,1,0,0,2,1,1,1,2,1,0");
        let (u, v) = (c("5:(1,1)"), c("9:(0,1)"));
        let mut d = 0;
        assert_eq!(be_dist(w, u.as_ptr(), v.as_ptr(), &mut d), BeStatus::Ok);
        assert_eq!(d, 6);
        let mut g = ptr::null_mut();
        assert_eq!(be_graph_materialize(w, 2, &mut g), BeStatus::Ok);
        let mut bfs = 0;
        assert_eq!(be_graph_dist_bfs(g, u.as_ptr(), v.as_ptr(), &mut bfs), BeStatus::Ok);
        assert_eq!(bfs, 6);
        be_graph_free(g);
        be_code_free(w);

        let w = parse("0,1,0");
        assert_eq!(be_graph_materialize(w, 2, &mut g), BeStatus::Ok);
        let (mut nv, mut ne) = (0, 0);
        assert_eq!(be_graph_size(g, &mut nv, &mut ne), BeStatus::Ok);
        assert_eq!((nv, ne), (4, 4));
        let mut s = ptr::null_mut();
        assert_eq!(be_graph_dump(g, &mut s), BeStatus::Ok);
        assert!(take(s).starts_with("0:()\n1:(0)\n"));
        be_graph_free(g);
        be_code_free(w);
    }
}

#[test]
fn reports() {
    unsafe {
        let w = parse("0,1,0");
        let mut r = ptr::null_mut();
        assert_eq!(be_evaluate(BeEmbedding::L1, w, 2, ptr::null(), &mut r), BeStatus::Ok);
        let mut pass = false;
        assert_eq!(be_report_pass(r, &mut pass), BeStatus::Ok);
        assert!(pass);
        let mut s = ptr::null_mut();
        assert_eq!(be_report_distortion(r, &mut s), BeStatus::Ok);
        assert_eq!(take(s), "2");
        assert_eq!(be_report_json(r, &mut s), BeStatus::Ok);
        let json = take(s);
        assert!(json.contains("\"embedding\": \"l1\"") && json.contains("\"pass\": true"), "{json}");
        be_report_free(r);

        let policy = c("sample:3:7");
        assert_eq!(be_evaluate(BeEmbedding::Esa, w, 2, policy.as_ptr(), &mut r), BeStatus::Ok);
        assert_eq!(be_report_json(r, &mut s), BeStatus::Ok);
        assert!(take(s).contains("\"pairs\": 3"));
        be_report_free(r);
        be_code_free(w);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut code = ptr::null_mut();
        assert_eq!(be_code_parse(c("1,0").as_ptr(), &mut code), BeStatus::InvalidCode);
        assert!(code.is_null());
        assert!(last_error().contains("first and last depth"));
        assert_eq!(be_code_parse(c("0,x,0").as_ptr(), &mut code), BeStatus::Parse);
        assert_eq!(be_code_parse(ptr::null(), &mut code), BeStatus::NullArgument);
        assert_eq!(be_code_parse(c("0,0").as_ptr(), ptr::null_mut()), BeStatus::NullArgument);

        let w = parse("0,1,0");
        let mut d = 0;
        let bad = c("7:(0)");
        assert_eq!(be_dist(w, bad.as_ptr(), c("0:()").as_ptr(), &mut d), BeStatus::InvalidVertex);
        let mut g = ptr::null_mut();
        let big = parse("0,9,0");
        assert_eq!(be_graph_materialize(big, 10, &mut g), BeStatus::SizeGuard);
        be_code_free(big);
        let mut r = ptr::null_mut();
        assert_eq!(be_evaluate(BeEmbedding::Linf, w, 2, c("bogus").as_ptr(), &mut r), BeStatus::Parse);
        be_code_free(w);
        // freeing NULL is a no-op
        be_code_free(ptr::null_mut());
        be_string_free(ptr::null_mut());
    }
}

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(crate_dir().join("include/bundle_embed.h")).unwrap();
    for name in [
        "be_last_error", "be_string_free", "be_code_parse", "be_code_free", "be_code_to_string",
        "be_code_height", "be_p_param", "be_dist", "be_oslash", "be_family", "be_graph_materialize",
        "be_graph_free", "be_graph_size", "be_graph_dump", "be_graph_dist_bfs", "be_evaluate",
        "be_report_free", "be_report_pass", "be_report_distortion", "be_report_json",
        "typedef struct BeCode BeCode", "BE_STATUS_SIZE_GUARD = 6",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Builds tests/c/smoke.c against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let Some(cc) = ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok()) else {
        eprintln!("no C compiler; skipping");
        return;
    };
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libbundle_embed_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let exe: PathBuf = std::env::temp_dir().join(format!("bundle-embed-smoke-{}", std::process::id()));
    let status = Command::new(cc)
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    std::fs::remove_file(&exe).ok();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
