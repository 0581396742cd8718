use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

use sepbound_core::catalog;
use sepbound_core::io::{poly_to_json, GroupSpecFile};
use sepbound_core::{Field, MultiPoly};

fn sepbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepbound")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

fn trivial_files(dir: &Path) -> (PathBuf, PathBuf) {
    let g = catalog::trivial(&Field::prime(3).unwrap(), 2);
    let group =
        write(dir, "trivial.json", &serde_json::to_value(GroupSpecFile::from_group(&g, Some("trivial"))).unwrap());
    let coords: Vec<Value> = (0..2).map(|i| poly_to_json(&MultiPoly::var(g.field(), 2, i))).collect();
    let cands = write(dir, "coords.json", &json!({ "candidates": coords }));
    (group, cands)
}

#[test]
fn gallery_s3() {
    let out = sepbound(&["gallery", "s3-perm"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["poset_nodes"], 16);
    assert_eq!(v["betti_above_bottom"], json!([0, 4]));
    assert_eq!(v["bound"], 3);
}

#[test]
fn gallery_gl7_bounds() {
    let out = sepbound(&["gallery", "gl7-f2", "bounds"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["bound_cohomological"], 9);
}

#[test]
fn gallery_parameters() {
    let out = sepbound(&["gallery", "s3-diag-n", "homology", "--n", "2", "--char", "0"]);
    assert_eq!(stdout_json(&out)["Q"], json!([6, 7, 8]));
    let out = sepbound(&["gallery", "c2c2-2n1", "classify"]);
    let v = stdout_json(&out);
    assert_eq!((v["generating_r"].clone(), v["rigid_r"].clone()), (json!(3), json!(4)));
    let out = sepbound(&["gallery", "cp-v2-vec", "separating", "--p", "3", "--n", "2"]);
    let v = stdout_json(&out);
    assert_eq!(v["candidates"].as_array().unwrap().len(), 5);
    assert_eq!(v["extensions"].as_array().unwrap().len(), 2);
}

#[test]
fn trivial_verify_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (group, cands) = trivial_files(dir.path());
    let out = sepbound(&[
        "separating",
        "verify",
        "--group",
        group.to_str().unwrap(),
        "--candidates",
        cands.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["extensions"].as_array().unwrap().len(), 3);
    assert!(v["extensions"].as_array().unwrap().iter().all(|e| e["verdict"] == "separating"));
}

#[test]
fn group_and_poset_commands() {
    let dir = tempfile::tempdir().unwrap();
    let g = catalog::s3_perm();
    let group = write(dir.path(), "s3.json", &serde_json::to_value(GroupSpecFile::from_group(&g, None)).unwrap());
    let group = group.to_str().unwrap();
    let info = stdout_json(&sepbound(&["group", "info", "--group", group]));
    assert_eq!(info["order"], 6);
    let classify = stdout_json(&sepbound(&["group", "classify", "--group", group]));
    assert_eq!(classify["minimal_reflecting"].as_array().unwrap().len(), 3);
    let dot = dir.path().join("s3.dot");
    let out = sepbound(&["poset", "build", "--group", group, "--dot", dot.to_str().unwrap()]);
    assert_eq!(stdout_json(&out)["nodes"].as_array().unwrap().len(), 16);
    let first = std::fs::read_to_string(&dot).unwrap();
    sepbound(&["poset", "build", "--group", group, "--dot", dot.to_str().unwrap()]);
    assert_eq!(first, std::fs::read_to_string(&dot).unwrap());
    assert!(first.starts_with("graph sep_poset"));
    let h = stdout_json(&sepbound(&["homology", "--group", group, "--char", "2"]));
    assert_eq!(h["betti_above_bottom"], json!([0, 4]));
    let b = stdout_json(&sepbound(&["bounds", "--group", group]));
    assert_eq!(b["bound_cohomological"], 3);
}

#[test]
fn shelling_command() {
    let out = sepbound(&["shelling", "--gallery", "s3-perm", "--verify-only"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verified"], true);
    assert!(v.get("order").is_none());
    let out = sepbound(&["shelling", "--gallery", "c2c2-2n1", "--verify-only"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["applicable"], false);
    let full = stdout_json(&sepbound(&["shelling", "--gallery", "s3-perm"]));
    assert_eq!(full["order"]["facets"].as_array().unwrap().len(), 18);
}

#[test]
fn search_and_removal() {
    let dir = tempfile::tempdir().unwrap();
    let g = catalog::c2_sign();
    let f = g.field().clone();
    let x = MultiPoly::var(&f, 1, 0);
    let empty = write(dir.path(), "base.json", &json!({ "candidates": [] }));
    let pool =
        write(dir.path(), "pool.json", &json!({ "candidates": [poly_to_json(&x.pow(4)), poly_to_json(&x.pow(2))] }));
    let gallery_args = ["--gallery", "c2-sign"];
    let mut args = vec!["separating", "search"];
    args.extend(gallery_args);
    args.extend(["--base", empty.to_str().unwrap(), "--pool", pool.to_str().unwrap(), "--target", "1"]);
    let out = sepbound(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["outcome"], "found");
    assert_eq!(v["pool_indices"], json!([1]));

    let out = sepbound(&["separating", "removal", "--gallery", "cp-vn", "--param", "p=3", "--param", "n=3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["all_refuted"], true);
}

#[test]
fn triangle_file() {
    let dir = tempfile::tempdir().unwrap();
    let (g, t) = sepbound_core::constructions::cp_triangle(3, 3).unwrap();
    let group = write(dir.path(), "v3.json", &serde_json::to_value(GroupSpecFile::from_group(&g, None)).unwrap());
    let entries: Vec<Value> =
        t.entries.iter().map(|(&(i, j), u)| json!({ "i": i, "j": j, "poly": poly_to_json(u) })).collect();
    let tri = write(dir.path(), "tri.json", &json!({ "triangle": entries }));
    let out = sepbound(&[
        "separating",
        "verify",
        "--extensions",
        "1",
        "--group",
        group.to_str().unwrap(),
        "--candidates",
        tri.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["candidates"].as_array().unwrap().len(), 4);
}

#[test]
fn report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = sepbound(&["report", "--gallery", "cp-v2-vec", "--seed", "7", "--json", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&text).unwrap();
    for key in ["tool_version", "scenario", "classification", "poset", "homology", "bounds", "separating"] {
        assert!(!v[key].is_null(), "{key}");
    }
}

#[test]
fn gl7_command() {
    let out = sepbound(&["gl7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["candidates"].as_array().unwrap().len(), 9);
    assert_eq!(v["relations"].as_array().unwrap().len(), 6);
}

#[test]
fn errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"field\": {\"p\": 6},\n  \"dimension\": 1,\n  \"generators\": []\n}\n").unwrap();
    let out = sepbound(&["group", "info", "--group", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(sepbound(&["gallery", "no-such-entry"]).status.code(), Some(1));
    assert_eq!(sepbound(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(sepbound(&["bounds"]).status.code(), Some(1));
    assert_eq!(sepbound(&["--help"]).status.code(), Some(0));
}
