use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn dsqo(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_dsqo"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const EXAMPLE_OPERATOR: &str = r#"{"m": 3, "slices": [
    [["0", "1/2", "1/2"], ["0", "1/2"], ["0"]],
    [["0", "0", "1/2"], ["1", "0"], ["1"]],
    [["1", "1/2", "0"], ["0", "1/2"], ["0"]]
]}"#;

const EXAMPLE_MATRIX: &str = r#"[["0.1","0.3","0.4"],["0.3","0.1","0.5"],["0.4","0.5","0.4"]]"#;

#[test]
fn majorize_center_below_anything() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", r#"["1/3","1/3","1/3"]"#);
    let y = write(&dir, "y.json", r#"["0.2","0.5","0.3"]"#);
    let r = dsqo(&["majorize", "--x", s(&x), "--y", s(&y)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["verdict"], "pass");

    let r = dsqo(&["majorize", "--x", s(&y), "--y", s(&x)]);
    assert_eq!(r.code, 1);
    let cert = &r.json()["certificate"];
    assert_eq!(cert["k"], 1);
    assert_eq!(cert["x_prefix"], "1/2");
}

#[test]
fn invalid_vector_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", r#"["1/3","1/3"]"#);
    let r = dsqo(&["majorize", "--x", s(&x), "--y", s(&x)]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.contains("deficit 1/3"), "{}", r.stderr);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(dsqo(&["frobnicate"]).code, 2);
    assert_eq!(dsqo(&["enum-u1"]).code, 2);
}

#[test]
fn check_dsqo_on_the_example_operator() {
    let dir = TempDir::new().unwrap();
    let v = write(&dir, "v.json", EXAMPLE_OPERATOR);
    let r = dsqo(&["check-dsqo", "--operator", s(&v)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let j = r.json();
    assert_eq!(j["verdict"], "pass");
    assert_eq!(j["result"]["extreme_in_b"], true);
    assert_eq!(j["result"]["extreme_slices"], serde_json::json!([2, 3]));

    let x = write(&dir, "x.json", r#"["1","0","0"]"#);
    let r = dsqo(&["apply", "--operator", s(&v), "--x", s(&x)]);
    assert_eq!(r.json()["result"], serde_json::json!(["0", "0", "1"]));

    let r = dsqo(&["check-necessary", "--operator", s(&v)]);
    assert_eq!(r.code, 0);
    let r = dsqo(&["witness-search", "--operator", s(&v), "--trials", "200"]);
    assert_eq!(r.code, 0);
}

#[test]
fn non_member_gets_a_certificate() {
    let dir = TempDir::new().unwrap();
    let v = write(
        &dir,
        "v.json",
        r#"{"m": 2, "slices": [[["1","1"],["0"]], [["0","0"],["1"]]]}"#,
    );
    let r = dsqo(&["check-dsqo", "--operator", s(&v)]);
    assert_eq!(r.code, 1);
    let cert = &r.json()["certificate"];
    assert_eq!(cert["violation"]["kind"], "slice_not_in_u1");
    assert_eq!(cert["violation"]["slice"], 1);
    assert!(cert["x"].is_array());

    let r = dsqo(&["witness-search", "--operator", s(&v)]);
    assert_eq!(r.code, 1);
    let cert = &r.json()["certificate"];
    assert_eq!(cert["x"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(cert["vx"], serde_json::json!(["3/4", "1/4"]));

    let r = dsqo(&["check-necessary", "--operator", s(&v)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["certificate"]["slice_totals"]["passed"], false);
}

#[test]
fn malformed_operator_names_the_invariant() {
    let dir = TempDir::new().unwrap();
    let v = write(
        &dir,
        "v.json",
        r#"{"m": 2, "slices": [[["1","1"],["0"]], [["0","0"],["0"]]]}"#,
    );
    let r = dsqo(&["check-dsqo", "--operator", s(&v)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("p_(2,2),k sum to 0"), "{}", r.stderr);
}

#[test]
fn symmetrization_commands() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", EXAMPLE_MATRIX);
    let r = dsqo(&["solve-sym", "--matrix", s(&a)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["result"].as_array().unwrap().len(), 3);

    let r = dsqo(&["solution-vertices", "--matrix", s(&a)]);
    assert_eq!(r.code, 0);
    let j = r.json();
    assert_eq!(j["result"]["count"], 2);
    assert_eq!(
        j["result"]["vertices"][0],
        serde_json::json!([
            ["1/10", "1/10", "4/5"],
            ["1/2", "1/10", "2/5"],
            ["0", "3/5", "2/5"]
        ])
    );

    let r = dsqo(&["check-u1", "--matrix", s(&a)]);
    assert_eq!(r.code, 0);
    let r = dsqo(&["check-uk", "--matrix", s(&a), "--k", "2"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["certificate"]["kind"], "total_sum");

    let bad = write(&dir, "bad.json", r#"[["2","0"],["0","0"]]"#);
    let r = dsqo(&["solve-sym", "--matrix", s(&bad)]);
    assert_eq!(r.code, 1);
    assert_eq!(
        r.json()["certificate"]["violation"]["subset"],
        serde_json::json!([1])
    );
}

#[test]
fn complete_and_permute() {
    let dir = TempDir::new().unwrap();
    let prefix = write(
        &dir,
        "p.json",
        r#"[[["0","1/2","1/2"],["1/2","0","1/2"],["1/2","1/2","0"]]]"#,
    );
    let r = dsqo(&["complete", "--prefix", s(&prefix)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json()["result"].clone();
    assert_eq!(v["slices"][1][0], serde_json::json!(["1/2", "1/4", "1/4"]));
    let vp = write(&dir, "v.json", &v.to_string());
    assert_eq!(dsqo(&["check-dsqo", "--operator", s(&vp)]).code, 0);

    let r = dsqo(&["permute", "--operator", s(&vp), "--pi", "2,3,1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["result"]["slices"][2], v["slices"][0]);
    assert_eq!(
        dsqo(&["permute", "--operator", s(&vp), "--pi", "1,1,2"]).code,
        2
    );
}

#[test]
fn enumerations() {
    let r = dsqo(&["enum-u1", "--m", "3", "--oracle"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["result"]["count"], 25);
    assert_eq!(dsqo(&["enum-u1", "--m", "9"]).code, 2);
    assert_eq!(dsqo(&["enum-b", "--m", "4"]).code, 2);

    let r = dsqo(&["verify-counts", "--m", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &r.json()["result"];
    assert_eq!(res["u1"], 25);
    assert_eq!(res["b"], 222);
    assert_eq!(res["triples"], serde_json::json!([31, 6]));
}

#[test]
fn csv_output_and_determinism() {
    let strip = |text: &str| {
        text.lines()
            .filter(|l| !l.contains("timing_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = dsqo(&["enum-b", "--m", "2"]);
    let b = dsqo(&["enum-b", "--m", "2"]);
    assert_eq!(strip(&a.stdout), strip(&b.stdout));

    let r = dsqo(&["enum-u1", "--m", "2", "--format", "csv"]);
    assert_eq!(r.code, 0);
    assert!(
        r.stdout.starts_with("path,value\n/command,enum-u1\n"),
        "{}",
        r.stdout
    );
    assert!(r.stdout.contains("/result/count,4\n"));
}
