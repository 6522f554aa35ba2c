use std::process::Command;

use hermcodes::ff::ConwayTable;
use hermcodes::witness7;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hermcodes"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("spawn");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn table_rows_and_determinism() {
    let (code, a, _) = run(&["table"]);
    assert_eq!(code, 0);
    let (_, b, _) = run(&["table"]);
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[1], "5,6 <= m <= 14,\"7, 8\"");
    assert_eq!(lines[4], "9,24 <= m <= 50,\"24, 25, 26, 32, 33, 41\"");
    assert!(lines[7].ends_with("138, 139, 140\""));
    let (_, one, _) = run(&["table", "--q", "7"]);
    assert_eq!(one, "q,cond_on_m,values\n7,14 <= m <= 29,\"18\"\n");
}

#[test]
fn bounds_reports() {
    let (code, out, _) = run(&["bounds", "--q", "7", "--m", "18"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["main"]["guaranteed"], 20);
    assert_eq!(v["dstar"], 32);
    assert_eq!(v["one_point_true"]["d_true"], 14);
    let (_, out, _) = run(&["bounds", "--q", "7", "--m", "21"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["route"], "main");
    let (_, out, _) = run(&["bounds", "--q", "7", "--m", "16"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["route"], "one-point");
    assert!(v["main"].is_null());
    let (code, out, _) = run(&["bounds", "--q", "5", "--m-range", "6..14", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 10);
    assert_eq!(run(&["bounds", "--q", "7", "--m", "40"]).0, 2);
    assert_eq!(run(&["bounds", "--q", "6", "--m", "10"]).0, 2);
}

#[test]
fn gaps_formula_and_oracle() {
    let (_, a, _) = run(&["gaps", "--q", "5"]);
    let (_, b, _) = run(&["gaps", "--q", "5", "--oracle"]);
    assert_eq!(a, b);
    let (_, c, _) = run(&["gaps", "--q", "5", "--oracle", "--seed", "3"]);
    assert_eq!(a, c);
}

#[test]
fn build_code_and_min_dist() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    let (code, _, _) = run(&["build-code", "--q", "3", "--m", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((v["k"].as_u64(), v["n"].as_u64()), (Some(23), Some(27)));
    let (code, out, _) = run(&["min-dist", "--q", "2", "--m", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["d"], 3);
    assert_eq!(run(&["min-dist", "--q", "4", "--m", "4"]).0, 2);
}

#[test]
fn witness_from_json_input() {
    let (h, input) = witness7::embedded_setup(&ConwayTable::builtin().unwrap()).unwrap();
    drop(h);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, serde_json::to_string(&input).unwrap()).unwrap();
    let (code, out, _) = run(&["verify-witness", "--input", path.to_str().unwrap(), "--no-orthogonality"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["off_curve"], 20);
    assert_eq!(v["minimum_distance"], 20);
}

#[test]
fn corrupted_conway_table() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/conway.txt")).unwrap();
    let bad = text.replace("7 2 3 6 1", "7 2 0 0 1");
    assert_ne!(bad, text);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conway.txt");
    std::fs::write(&path, bad).unwrap();
    let (code, out, _) = run(&["selftest", "--conway-table", path.to_str().unwrap()]);
    assert_ne!(code, 0);
    assert!(out.contains("conway table FAIL"), "{out}");
}
