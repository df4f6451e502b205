use std::process::Command;

use superspecial_cli::{run, Output};

fn call(args: &[&str]) -> Output {
    run(std::iter::once("superspecial").chain(args.iter().copied()))
}

fn write_module(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn count_json_example() {
    let out = call(&["count", "--p", "11", "--g", "2", "--json"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout.trim_end(),
        r#"{"p":11,"g":2,"branch":"3mod8","h_field":1,"h_order":3,"unit_index":3,"per_genus":[1,1,3],"total":5}"#
    );
}

#[test]
fn count_rejects_composite() {
    let out = call(&["count", "--p", "4", "--g", "1"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("p must be prime"), "{}", out.stderr);
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_arguments_exit_2() {
    assert_eq!(call(&["count", "--p", "eleven", "--g", "2"]).code, 2);
    assert_eq!(call(&["count", "--p", "11"]).code, 2);
    assert_eq!(call(&["frobnicate"]).code, 2);
    assert_eq!(call(&["classnum", "--disc", "-5"]).code, 2);
    assert_eq!(call(&["classnum", "--disc", "12"]).code, 2);
    assert_eq!(call(&["hecke", "--p", "11", "--g", "2", "--ell", "2"]).code, 2);
    assert_eq!(call(&["hecke", "--p", "13", "--g", "2", "--ell", "3"]).code, 2);
    assert_eq!(call(&["table", "--pmax", "50", "--g", "0"]).code, 2);
    assert_eq!(call(&["--help"]).code, 0);
}

#[test]
fn table_csv_header_and_rows() {
    let out = call(&["table", "--pmax", "30", "--g", "3"]);
    assert_eq!(out.code, 0);
    let mut lines = out.stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,g,branch,h_field,h_order,unit_index,total,genus_sum_total"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 10);
    let ps: Vec<u64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    for r in &rows {
        assert_eq!(r[6], r[7]);
    }
    assert_eq!(rows[4], vec!["11", "3", "3mod8", "1", "3", "3", "6", "6"]);
}

#[test]
fn table_json_matches_csv() {
    let out = call(&["table", "--pmax", "30", "--g", "2", "--format", "json"]);
    assert_eq!(out.code, 0);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[4]["branch"], "3mod8");
    assert_eq!(rows[4]["total"], 5);
}

#[test]
fn classnum_oracle() {
    let out = call(&["classnum", "--disc", "-23", "--oracle"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim_end(), "3, oracle 3, agree");
    assert_eq!(call(&["classnum", "--disc", "-44"]).stdout.trim_end(), "3");
}

#[test]
fn classgroup_document() {
    let out = call(&["classgroup", "--disc", "-47"]);
    assert_eq!(out.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["h"], 5);
    assert_eq!(doc["cyclic"], true);
    let orders: Vec<u64> = doc["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders.iter().filter(|&&o| o == 5).count(), 4);
}

#[test]
fn hecke_report() {
    let out = call(&["hecke", "--p", "7", "--g", "3", "--ell", "3"]);
    assert_eq!(out.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["pic_R_loc"], 1);
    assert_eq!(doc["guarantee"], true);
    assert_eq!(doc["orbit_total_guaranteed"], 4);
}

#[test]
fn decompose_files() {
    let dir = tempfile::tempdir().unwrap();
    // R ⊕ O at p = 3, written with signed entries
    let good = write_module(
        &dir,
        "good.json",
        r#"{"p": 3, "k": 6, "n": 4, "entries": [0,-4,0,0, 1,-2,0,0, 0,0,0,-2, 0,0,2,-2]}"#,
    );
    let out = call(&["decompose", "--file", &good]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["invariants"], serde_json::json!({"case": "a", "r": 1, "s": 1}));
    assert_eq!(doc["tate_like"], true);
    assert!(doc.get("splitting").is_none());

    let out = call(&["decompose", "--file", &good, "--split"]);
    assert_eq!(out.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["splitting"].as_array().unwrap().len(), 4);

    let split7 = write_module(&dir, "b.json", r#"{"p": 7, "k": 4, "n": 2, "entries": [10, 0, 0, 4]}"#);
    let doc: serde_json::Value =
        serde_json::from_str(&call(&["decompose", "--file", &split7]).stdout).unwrap();
    assert_eq!(doc["invariants"], serde_json::json!({"case": "b", "r": 0, "s": 1, "t": 1}));

    // identity does not satisfy the minimal polynomial: an invariant failure
    let bad = write_module(&dir, "bad.json", r#"{"p": 3, "k": 4, "n": 2, "entries": [1,0,0,1]}"#);
    let out = call(&["decompose", "--file", &bad]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("invalid module"));

    let garbage = write_module(&dir, "garbage.json", "{not json");
    assert_eq!(call(&["decompose", "--file", &garbage]).code, 2);
    let short = write_module(&dir, "short.json", r#"{"p": 3, "k": 4, "n": 2, "entries": [1]}"#);
    assert_eq!(call(&["decompose", "--file", &short]).code, 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(call(&["decompose", "--file", missing.to_str().unwrap()]).code, 2);
}

#[test]
fn deuring_table() {
    let out = call(&["deuring", "--pmax", "50"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "p,h,hprime,t,integrality,parity");
    assert_eq!(lines[1], "5,1,1,1,ok,ok");
    assert!(lines.iter().skip(1).all(|l| l.ends_with("ok,ok")));
}

#[test]
fn selftest_passes_and_is_deterministic() {
    let a = call(&["selftest"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a, call(&["selftest"]));
    let b = call(&["selftest", "--seed", "7"]);
    assert_eq!(b.code, 0, "{}", b.stdout);
    assert_eq!(b, call(&["selftest", "--seed", "7"]));
}

#[test]
fn parallel_outputs_are_byte_identical() {
    for args in [
        &["table", "--pmax", "2000", "--g", "4"][..],
        &["deuring", "--pmax", "3000", "--format", "json"][..],
    ] {
        let first = call(args);
        assert_eq!(first.code, 0);
        for _ in 0..3 {
            assert_eq!(call(args), first);
        }
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_superspecial");
    let ok = Command::new(bin).args(["count", "--p", "13", "--g", "1", "--json"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains(r#""total":2"#));
    let bad = Command::new(bin).args(["count", "--p", "4", "--g", "1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("p must be prime"));
}
