use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_petalknot")).args(args).env_remove("PETALKNOT_TABLE").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    v
}

#[test]
fn identify_trefoil() {
    let v = json(&["identify", "1,3,5,2,4"]);
    assert_eq!(v["knot"], "3_1");
    assert_eq!(v["reduced_crossings"], 3);
    assert_eq!(v["unknotting_cost"], 1);
    assert_eq!(v["strands"], 5);
}

#[test]
fn identify_unknot_and_bad_input() {
    assert_eq!(json(&["identify", "1,2,3"])["knot"], "0_1");
    assert_eq!(run(&["identify", "1,2,3,4"]).status.code(), Some(2));
    assert_eq!(run(&["identify", "1,2,2"]).status.code(), Some(2));
    assert_eq!(run(&["identify", "x"]).status.code(), Some(2));
}

#[test]
fn self_check_passes_on_torus_knots() {
    for p in ["1,3,5,2,4", "1,4,7,3,6,2,5", "1,5,9,4,8,3,7,2,6"] {
        let out = run(&["identify", p, "--self-check", "--seed", "5"]);
        assert!(out.status.success(), "{p}");
    }
}

#[test]
fn budget_exceeded_exits_three() {
    assert_eq!(run(&["invariants", "1,5,9,4,8,3,7,2,6"]).status.code(), Some(3));
}

#[test]
fn compose_strand_counts() {
    let t = "1,3,5,2,4";
    assert_eq!(json(&["compose", t, t])["strands"], 6);
    assert_eq!(json(&["compose", t, "1,4,7,3,6,2,5"])["strands"], 8);
    let v = json(&["compose", t, t, t]);
    assert_eq!(v["strands"], 8);
    assert_eq!(v["fingerprint"]["determinant"], 27);
}

#[test]
fn unknot_certificate_replays() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let v = json(&["unknot", "1,4,7,3,6,2,5"]);
    assert_eq!(v["total_cost"], 3);
    std::fs::write(&path, v.to_string()).unwrap();
    assert!(run(&["unknot", "--replay", path.to_str().unwrap()]).status.success());
    let mut bad = v.clone();
    bad["total_cost"] = 2.into();
    std::fs::write(&path, bad.to_string()).unwrap();
    assert_eq!(run(&["unknot", "--replay", path.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn reduce_reports_stage_counts() {
    let v = json(&["reduce", "1,5,9,4,8,3,7,2,6"]);
    assert_eq!(v["counts"], serde_json::json!([36, 27, 21, 17, 15]));
}

#[test]
fn reverse_petal_matches_identify() {
    let a = json(&["reverse-petal", "1,4,7,3,6,2,5"]);
    let b = json(&["identify", "1,4,7,3,6,2,5"]);
    assert_eq!(a["fingerprint"], b["fingerprint"]);
}

#[test]
fn enumerate_and_classify() {
    assert_eq!(json(&["enumerate", "5"])["count"], 8);
    let v = json(&["classify", "5"]);
    let knots: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["knot"].as_str().unwrap()).collect();
    assert_eq!(knots.len(), 3);
    for k in ["0_1", "3_1", "m3_1"] {
        assert!(knots.contains(&k));
    }
    let csv = run(&["classify", "5", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("p,knot"));
    assert_eq!(run(&["classify", "9"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "11"]).status.code(), Some(2));
}

#[test]
fn classify_checkpoints_to_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let a = json(&["classify", "5", "--checkpoint", d, "--shards", "2"]);
    assert!(dir.path().join("classify-p5-shard0.json").exists());
    assert_eq!(a, json(&["classify", "5", "--checkpoint", d, "--shards", "2"]));
}

#[test]
fn svg_export_is_deterministic() {
    let a = run(&["export", "1,3,5,2,4", "--format", "svg"]);
    let b = run(&["export", "1,3,5,2,4", "--format", "svg"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let s = String::from_utf8(a.stdout).unwrap();
    assert!(s.contains(r#"width="1000" height="1000""#));
    assert_eq!(s.matches("<text").count(), 5);
    let pre = String::from_utf8(run(&["export", "1,3,5,2,4", "--unfold", "--format", "svg"]).stdout).unwrap();
    assert_eq!(pre.matches("<path").count(), 4);
}

#[test]
fn diagram_files_round_trip_through_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let v = json(&["export", "1,3,5,2,4", "--unfold"]);
    std::fs::write(&path, v["diagram"].to_string()).unwrap();
    let inv = json(&["invariants", "--diagram", path.to_str().unwrap()]);
    assert_eq!(inv["strands"], 4);
    assert_eq!(inv["fingerprint"]["determinant"], 3);
}

#[test]
fn unsupported_format_is_an_input_error() {
    assert_eq!(run(&["identify", "1,2,3", "--format", "svg"]).status.code(), Some(2));
    assert_eq!(run(&["identify", "1,2,3", "--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn table_override_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    std::fs::write(&path, "[]").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_petalknot"))
        .args(["identify", "1,3,5,2,4", "--format", "json"])
        .env("PETALKNOT_TABLE", &path)
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["knot"].is_null());
    let out = Command::new(env!("CARGO_BIN_EXE_petalknot"))
        .args(["identify", "1,3,5,2,4"])
        .env("PETALKNOT_TABLE", dir.path().join("missing.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
