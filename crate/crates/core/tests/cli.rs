use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bundle-embed")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code_of(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn verify_diamond_l1() {
    let o = bin(&["verify", "--w", "0,1,0", "--kappa", "2", "--embedding", "l1", "--pairs", "all", "--format", "json"]);
    assert_eq!(code_of(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["distortion"], "2");
    assert_eq!(v["bound"], "2");
    assert_eq!(v["pass"], true);
    assert!(v.get("meta").is_none());
}

#[test]
fn worked_distance() {
    let o = bin(&["dist", "--w", "0,0,1,0,0,2,1,1,1,2,1,0", "--u", "5:(1,1)", "--v", "9:(0,1)"]);
    assert_eq!(code_of(&o), 0);
    assert_eq!(stdout(&o), "6\n");
    let o = bin(&["dist", "--w", "0,0,1,0,0,2,1,1,1,2,1,0", "--u", "5:(1,1)", "--v", "9:(1,0)", "--bfs"]);
    assert_eq!(stdout(&o), "formula 4\nbfs 4\n");
}

#[test]
fn oslash_examples() {
    let o = bin(&["oslash", "--w", "0,1,0", "--w2", "0,1,0"]);
    assert_eq!(stdout(&o), "0,2,1,2,0\n");
    let o = bin(&["oslash", "--w", "0,0,1,0,0", "--w2", "0,1,0", "--check", "--format", "json"]);
    assert_eq!(code_of(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["isomorphism"]["holds"], true);
    let o = bin(&["oslash", "--w", "0,1,0", "--w2", "0,1,0", "--n", "0"]);
    assert_eq!(stdout(&o), "0,2,1,0\n");
}

#[test]
fn pw_and_family() {
    assert_eq!(stdout(&bin(&["pw", "--w", "0,1,0"])), "positive 1\ninclude_zero 2\n");
    assert_eq!(stdout(&bin(&["family", "--w", "0,1,0", "--k", "2"])), "1 0,1,0\n2 0,2,1,2,0\n");
    let o = bin(&["family", "--w", "0,1,0", "--k", "2", "--embedding", "linf"]);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "code,kappa,k,embedding,distortion_exact,bound_exact,vertices,seconds");
    assert!(rows[1].starts_with("\"0,1,0\",2,1,linf,2,6,4,"));
    assert!(rows[2].starts_with("\"0,2,1,2,0\",2,2,linf,"));
}

#[test]
fn graph_dump() {
    let o = bin(&["graph", "--w", "0,1,0"]);
    assert_eq!(
        stdout(&o),
        "0:()\n1:(0)\n1:(1)\n2:()\n0:() -- 1:(0)\n0:() -- 1:(1)\n1:(0) -- 2:()\n1:(1) -- 2:()\n"
    );
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["verify", "--w", "0,1,1,2,0", "--embedding", "esa"],
        vec!["verify", "--w", "0,2,1,0", "--kappa", "3", "--embedding", "l1", "--pairs", "sample:20:5"],
        vec!["suite", "--corpus", "H3:D1:K2", "--format", "json"],
        vec!["embed", "--w", "0,1,0", "--embedding", "esa", "--blocks", "8"],
    ] {
        assert_eq!(stdout(&bin(&args)), stdout(&bin(&args)), "{args:?}");
    }
    // only the meta object may differ
    let strip = |o: Output| {
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(v.get("meta").is_some());
        v.as_object_mut().unwrap().remove("meta");
        v
    };
    let args = ["verify", "--w", "0,0,1,0", "--embedding", "l1", "--meta"];
    assert_eq!(strip(bin(&args)), strip(bin(&args)));
}

#[test]
fn exit_statuses() {
    // malformed code
    let o = bin(&["verify", "--w", "1,0", "--embedding", "l1"]);
    assert_eq!(code_of(&o), 2);
    // guard violation, machine-readable
    let o = bin(&["graph", "--w", "0,9,0", "--kappa", "10", "--json-errors"]);
    assert_eq!(code_of(&o), 2);
    let err: Value = serde_json::from_str(String::from_utf8(o.stderr).unwrap().trim()).unwrap();
    assert_eq!(err["error"], "size_guard");
    let o = bin(&["verify", "--w", "0,3,0", "--embedding", "esa", "--esa-length-cap", "100", "--json-errors"]);
    assert_eq!(code_of(&o), 2);
    let err: Value = serde_json::from_str(String::from_utf8(o.stderr).unwrap().trim()).unwrap();
    assert_eq!(err["error"], "esa_cap");
    // a failing suite: the product p bound does not hold for this pair
    let o = bin(&["suite", "--w", "0,1,1,0", "--w", "0,1,0", "--suites", "products"]);
    assert_eq!(code_of(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
    let o = bin(&["suite", "--w", "0,1,0", "--suites", "metric_oracle,lemma_l1,lemma_esa,bounds"]);
    assert_eq!(code_of(&o), 0);
    assert_eq!(code_of(&bin(&["--help"])), 0);
    assert_eq!(code_of(&bin(&["frobnicate"])), 2);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("bundle-embed-cli-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let o = bin(&["verify", "--w", "0,1,0", "--embedding", "linf", "--format", "csv", "--out", p]);
    assert_eq!(code_of(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("code,kappa,k,embedding"));
    assert!(text.lines().nth(1).unwrap().starts_with("\"0,1,0\",2,,linf,2,6,4,"));
}
