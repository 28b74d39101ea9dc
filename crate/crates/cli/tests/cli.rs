use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn entropart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entropart"))
        .args(args)
        .env_remove("ENTROPART_LOG")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn normalize_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.csv", "3\n-1\n");
    let out = entropart(&["normalize", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "[0.75,0.25]\n");
}

#[test]
fn normalize_other_formats() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.json", "[1, 1, -2]");
    let out = entropart(&["normalize", "--input", &input, "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "y,p\n1,0.25\n2,0.25\n3,0.5\n");
}

#[test]
fn normalize_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.csv", "");
    let zeros = write(dir.path(), "zeros.csv", "0\n0\n0\n");
    let junk = write(dir.path(), "junk.csv", "1\nabc\n");
    assert_eq!(entropart(&["normalize", "--input", &empty]).status.code(), Some(2));
    assert_eq!(entropart(&["normalize", "--input", &zeros]).status.code(), Some(3));
    let out = entropart(&["normalize", "--input", &junk]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let missing = dir.path().join("nope.csv");
    assert_eq!(entropart(&["normalize", "--input", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn analyze_uniform_on_shape() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "u.csv", &"1\n".repeat(8));
    let out = entropart(&["analyze", "--input", &input, "--shape", "4x2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let sub = &v["reports"][0];
    assert_eq!(sub["kind"], "subadditivity");
    assert_eq!(sub["shape"], serde_json::json!([4, 2]));
    assert!(sub["residual"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(v["all_hold"], true);
}

#[test]
fn analyze_prime_length() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.csv", "1\n2\n3\n4\n5\n6\n7\n");
    let out = entropart(&["analyze", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let notes = v["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("prime")));
    assert!(v["reports"].as_array().unwrap().is_empty());
}

#[test]
fn analyze_scan_order() {
    let dir = tempfile::tempdir().unwrap();
    let values: String = (1..=16).map(|i| format!("{}\n", (i * 37 % 11) as f64 - 4.5)).collect();
    let input = write(dir.path(), "r.csv", &values);
    let out = entropart(&["analyze", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let mut shapes: Vec<Vec<u64>> = Vec::new();
    for r in json(&out)["reports"].as_array().unwrap() {
        let s: Vec<u64> = r["shape"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        if shapes.last() != Some(&s) {
            shapes.push(s);
        }
    }
    assert_eq!(shapes[..4], [vec![2, 8], vec![8, 2], vec![4, 4], vec![2, 2, 4]]);
}

#[test]
fn analyze_shape_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "u.csv", &"1\n".repeat(8));
    assert_eq!(entropart(&["analyze", "--input", &input, "--shape", "3x3"]).status.code(), Some(2));
}

#[test]
fn analyze_text_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "u.csv", "1\n2\n3\n4\n");
    let out = entropart(&["analyze", "--input", &input, "--shape", "2x2", "--format", "csv", "--base", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("kind,shape,grouping,base,residual,holds\nsubadditivity,2x2,1|2,2,"));
    let out = entropart(&["analyze", "--input", &input, "--shape", "2x2", "--format", "text"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("chain_rule"));
}

#[test]
fn cg_singlet() {
    let out = entropart(&["cg", "--j1", "1", "--j2", "1", "--j", "0", "--m", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["distribution"], serde_json::json!([0.0, 0.5, 0.5, 0.0]));
    let residual = v["subadditivity"]["residual"].as_f64().unwrap();
    assert!((residual - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn cg_stretched() {
    let out = entropart(&["cg", "--j1", "3", "--j2", "1", "--j", "4", "--m", "4", "--shape", "2x2x2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let f: Vec<f64> = v["distribution"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(f.iter().filter(|&&p| p == 1.0).count(), 1);
    assert_eq!(f.iter().filter(|&&p| p == 0.0).count(), 7);
    assert_eq!(v["subadditivity"]["residual"].as_f64().unwrap(), 0.0);
    assert_eq!(v["ssa"]["kind"], "strong_subadditivity");
}

#[test]
fn cg_invalid() {
    assert_eq!(entropart(&["cg", "--j1", "1", "--j2", "1", "--j", "4", "--m", "0"]).status.code(), Some(2));
    assert_eq!(entropart(&["cg", "--j1", "2", "--j2", "2", "--j", "2", "--m", "1"]).status.code(), Some(2));
    assert_eq!(entropart(&["cg", "--j1", "1", "--j2", "1", "--j", "2", "--m", "-2"]).status.code(), Some(0));
}

#[test]
fn plot_data_plane() {
    let out = entropart(&["plot-data", "--shape", "4x4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 17);
    assert_eq!(lines[0], "x1,x2,y");
    assert_eq!(lines[1], "1,1,1");
    assert_eq!(lines[16], "4,4,16");
    let out = entropart(&["plot-data", "--shape", "4x2"]);
    assert!(String::from_utf8(out.stdout).unwrap().lines().any(|l| l == "2,2,6"));
}

#[test]
fn plot_data_projections() {
    let out = entropart(&["plot-data", "--shape", "4x2", "--which", "projections"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 9);
    assert_eq!(entropart(&["plot-data", "--shape", "2x2x2", "--which", "projections"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let values: String = (1..=12).map(|i| format!("{}\n", 1.0 / i as f64)).collect();
    let input = write(dir.path(), "d.csv", &values);
    let a = entropart(&["analyze", "--input", &input]);
    let b = entropart(&["analyze", "--input", &input]);
    assert_eq!(a.stdout, b.stdout);
}
