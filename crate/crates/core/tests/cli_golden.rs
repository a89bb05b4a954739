//! `report.json` layout per mode, checked against files in `tests/golden`.
//! Set `SEEDSPAN_BLESS=1` to rewrite them after an intended schema change.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Map, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seedspan"))
}

fn run_cli(args: &[&str], out: &Path) -> i32 {
    let status = bin().args(args).arg("--out").arg(out).output().unwrap();
    status.status.code().unwrap()
}

/// Replaces every leaf by its JSON type and every array by the shape of its
/// first element.
fn shape(v: &Value) -> Value {
    match v {
        Value::Null => json!("null"),
        Value::Bool(_) => json!("bool"),
        Value::Number(_) => json!("number"),
        Value::String(_) => json!("string"),
        Value::Array(a) => Value::Array(a.first().map(shape).into_iter().collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), shape(v))).collect::<Map<_, _>>()),
    }
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check_shape(name: &str, args: &[&str]) {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_cli(args, dir.path()), 0, "{name}");
    let report: Value = serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    let got = serde_json::to_string_pretty(&shape(&report)).unwrap() + "\n";
    let path = golden_dir().join(format!("{name}.json"));
    if std::env::var_os("SEEDSPAN_BLESS").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "report.json layout of {name} changed");
}

const SMALL: [&str; 6] = ["--seeds", "3", "--games", "4", "--root-seed", "42"];

fn with_small<'a>(args: &[&'a str]) -> Vec<&'a str> {
    args.iter().copied().chain(SMALL).collect()
}

#[test]
fn distribution_report_layout() {
    check_shape(
        "distribution",
        &with_small(&["--game", "connect4", "--mode", "distribution", "--budget", "2"]),
    );
}

#[test]
fn skill_sweep_report_layout() {
    check_shape(
        "skill-sweep",
        &with_small(&["--game", "kuhn", "--mode", "skill-sweep", "--budget", "0,2"]),
    );
}

#[test]
fn mirror_report_layout() {
    check_shape("mirror", &with_small(&["--game", "kuhn", "--mode", "mirror"]));
}

#[test]
fn disentangle_report_layout() {
    check_shape(
        "disentangle",
        &with_small(&["--game", "loveletter", "--mode", "disentangle", "--fix-stream", "deck"]),
    );
}

#[test]
fn nonmonotonic_report_layout() {
    check_shape(
        "nonmonotonic",
        &with_small(&["--game", "cantstop", "--mode", "nonmonotonic", "--budget", "0,1,2"]),
    );
}

#[test]
fn verify_variance_report_layout() {
    check_shape("verify-variance", &["--mode", "verify-variance", "--root-seed", "42"]);
}

#[test]
fn rerun_writes_identical_files() {
    let args = with_small(&["--game", "cantstop", "--mode", "distribution", "--budget", "4"]);
    let dir = tempfile::tempdir().unwrap();
    let files = ["seeds.csv", "histogram.csv", "report.json"];
    assert_eq!(run_cli(&args, dir.path()), 0);
    let first: Vec<Vec<u8>> = files
        .iter()
        .map(|f| std::fs::read(dir.path().join(f)).unwrap())
        .collect();
    assert_eq!(run_cli(&args, dir.path()), 0);
    for (f, bytes) in files.iter().zip(&first) {
        assert!(
            std::fs::read(dir.path().join(f)).unwrap() == *bytes,
            "{f} differs between runs"
        );
    }
    let csv = std::fs::read_to_string(dir.path().join("seeds.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("seed,win_rate,n_games"));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("histogram.csv"))
            .unwrap()
            .lines()
            .count(),
        51
    );
}

#[test]
fn process_exit_codes_and_messages() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "--game",
            "loveletter",
            "--mode",
            "disentangle",
            "--fix-stream",
            "dice",
            "--root-seed",
            "1",
        ])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("fixed_stream") && err.contains("burn") && err.contains("deck"),
        "{err}"
    );
    let out = bin()
        .args(["--game", "kuhn", "--mode", "distribution"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("root_seed"));
}

#[test]
fn summary_table_goes_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(with_small(&["--game", "kuhn", "--mode", "distribution"]))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for metric in ["entropy", "span", "trimmed_span", "outlier_fraction"] {
        assert!(text.contains(metric), "{text}");
    }
}
