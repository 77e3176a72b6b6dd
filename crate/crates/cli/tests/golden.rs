//! Runs every case in `cases.json` against the corpus and compares stdout
//! and stderr with the recorded outputs in `corpus/golden`. Set
//! `STRATBUNDLE_BLESS=1` to re-record.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde::Deserialize;

#[derive(Deserialize)]
struct Case {
    name: String,
    args: Vec<String>,
    exit: i32,
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).to_path_buf()
}

fn corpus() -> PathBuf {
    root().join("corpus")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stratbundle"))
        .args(args)
        .current_dir(corpus())
        .output()
        .expect("binary runs")
}

fn compare(path: &Path, actual: &[u8], bless: bool, mismatches: &mut Vec<String>) {
    if bless {
        if actual.is_empty() {
            let _ = fs::remove_file(path);
        } else {
            fs::write(path, actual).unwrap();
        }
        return;
    }
    let expected = fs::read(path).unwrap_or_default();
    if expected != actual {
        mismatches.push(format!("{} differs", path.display()));
    }
}

#[test]
fn golden_cases() {
    let cases: Vec<Case> = serde_json::from_str(&fs::read_to_string(root().join("cases.json")).unwrap()).unwrap();
    assert!(cases.len() >= 8);
    let bless = std::env::var_os("STRATBUNDLE_BLESS").is_some();
    let golden = corpus().join("golden");
    let mut mismatches = Vec::new();
    for case in &cases {
        let args: Vec<&str> = case.args.iter().map(String::as_str).collect();
        let out = run(&args);
        if out.status.code() != Some(case.exit) {
            mismatches.push(format!(
                "{}: exit {:?}, expected {}; stderr: {}",
                case.name,
                out.status.code(),
                case.exit,
                String::from_utf8_lossy(&out.stderr)
            ));
        }
        compare(&golden.join(format!("{}.out", case.name)), &out.stdout, bless, &mut mismatches);
        compare(&golden.join(format!("{}.err", case.name)), &out.stderr, bless, &mut mismatches);
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn documents_round_trip() {
    let mut n = 0;
    for item in fs::read_dir(corpus()).unwrap() {
        let path = item.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let out = run(&["normalize", path.to_str().unwrap()]);
            assert!(out.status.success());
            assert_eq!(out.stdout, fs::read(&path).unwrap(), "{}", path.display());
            n += 1;
        }
    }
    assert!(n >= 8);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("cover.json");
    let out = run(&["cover", "double_cover_c3.json", "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read(&target).unwrap(), run(&["cover", "double_cover_c3.json"]).stdout);
    // nothing but the result is left in the directory
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn generated_bundles_validate_and_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["1", "2", "3"] {
        let path = dir.path().join(format!("x{seed}.json"));
        assert!(run(&["generate", "--seed", seed, "--out", path.to_str().unwrap()]).status.success());
        let p = path.to_str().unwrap();
        assert!(run(&["validate", p]).status.success());
        assert!(run(&["reconstruct", p]).status.success());
        assert!(run(&["certify", p]).status.code().is_some());
    }
}

#[test]
fn verify_reports_are_reproducible() {
    let args = ["verify", "--suite", "pullback", "--seeds", "10", "--seed", "42", "--no-timing"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["passes"], 10);
    assert!(report["wall_time"].is_null());
    let timed = run(&["verify", "--suite", "pullback", "--seeds", "2"]);
    let timed: serde_json::Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(timed["wall_time"].is_f64());
}

#[test]
fn negative_control_is_rejected_as_input() {
    let out = run(&["verify", "--suite", "bundle", "--seeds", "20", "--negative-control", "--no-timing"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!report["invalid_inputs"].as_array().unwrap().is_empty());
    assert!(report["failures"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_suite_is_a_refusal() {
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn tampered_workspace_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["z2.json", "double_cover_c3.json"] {
        fs::copy(corpus().join(name), dir.path().join(name)).unwrap();
    }
    let d = dir.path().to_str().unwrap();
    assert!(run(&["manifest", d]).status.success());
    assert!(run(&["check", d]).status.success());
    fs::write(dir.path().join("z2.json"), "{\"cells\": []}\n").unwrap();
    let out = run(&["check", d]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["mismatches"][0]["document"], "z2.json");
}
