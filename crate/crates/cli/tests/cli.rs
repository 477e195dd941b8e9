use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bcov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcov")).args(args).output().expect("spawn bcov")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

#[test]
fn pf_elliptic_periods() {
    let out = bcov(&["pf", "--model", "elliptic", "--order", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let c = v["payload"]["omega0"]["coeffs"].as_array().unwrap();
    assert_eq!(c.len(), 21);
    assert_eq!(&c[..3], &["1", "60", "13860"]);
    assert_eq!(v["passed"], Value::Bool(true));
}

#[test]
fn pf_order_zero() {
    let out = bcov(&["pf", "--model", "elliptic", "--order", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["payload"]["omega0"]["coeffs"], serde_json::json!(["1"]));
}

#[test]
fn pf_by_path() {
    let p = models_dir().join("quintic.toml");
    let out = bcov(&["pf", "--model", p.to_str().unwrap(), "--order", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["model"], "quintic");
    // 5 + 2875 q + ...
    assert_eq!(&v["payload"]["yukawa_flat"]["coeffs"].as_array().unwrap()[..2], &["5", "2875"]);
}

#[test]
fn bad_model_path_is_a_load_failure() {
    let out = bcov(&["pf", "--model", "/no/such/model.toml"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_model_is_a_load_failure() {
    let dir = std::env::temp_dir().join(format!("bcov-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("broken.toml");
    std::fs::write(&p, "name = \"broken\"\nkind = \"threefold\"\n").unwrap();
    let out = bcov(&["pf", "--model", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn every_suite_passes() {
    for suite in ["elliptic-identities", "lambda-lifts", "quintic-ring", "modular"] {
        let out = bcov(&["verify", "--suite", suite, "--order", "20"]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        let checks = v["checks"].as_array().unwrap();
        assert!(checks.len() > 1, "{suite}");
        assert!(checks.iter().all(|c| c["passed"] == Value::Bool(true)));
    }
}

#[test]
fn elliptic_suite_names_the_eisenstein_identity() {
    let v = json(&bcov(&["verify", "--suite", "elliptic-identities", "--order", "20"]));
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"w0(x(q))^4 = E4(q)"), "{names:?}");
}

#[test]
fn low_order_warns() {
    let out = bcov(&["verify", "--suite", "elliptic-identities", "--order", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!json(&out)["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn solve_quintic_genus_two() {
    let out = bcov(&["solve", "--model", "quintic", "--genus", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let g2 = &v["payload"]["genera"]["2"];
    assert_eq!(g2["weight"], -2);
    assert_eq!(g2["terms"]["Ŝ"], "700/9");
}

#[test]
fn solve_usage_errors() {
    assert_eq!(bcov(&["solve", "--model", "quintic", "--genus", "1"]).status.code(), Some(2));
    assert_eq!(
        bcov(&["solve", "--model", "quintic", "--genus", "2", "--variant", "sideways"]).status.code(),
        Some(2)
    );
    assert_eq!(bcov(&["solve", "--model", "elliptic", "--genus", "2"]).status.code(), Some(2));
}

#[test]
fn output_is_byte_deterministic() {
    let args = ["solve", "--model", "quintic", "--genus", "3", "--variant", "lifted", "--holomorphic", "--order", "3"];
    let a = bcov(&args);
    let b = bcov(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_and_csv_files() {
    let dir = std::env::temp_dir().join(format!("bcov-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (j, c) = (dir.join("r.json"), dir.join("s.csv"));
    let out = bcov(&[
        "pf",
        "--model",
        "elliptic",
        "--order",
        "5",
        "--out",
        j.to_str().unwrap(),
        "--csv",
        c.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(v["command"], "pf");
    let mut rdr = csv::Reader::from_path(&c).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[0], "exponent");
    assert!(header.contains(&"omega0".to_string()));
    let first = rdr.records().next().unwrap().unwrap();
    assert_eq!(&first[0], "0");
    std::fs::remove_dir_all(&dir).ok();
}
