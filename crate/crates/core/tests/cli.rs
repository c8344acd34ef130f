use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hardy-tobl"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hardy-tobl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn optimize_canonical_tobl() {
    let o = run(&["optimize", "--scenario", "tripartite", "--set", "tobl", "--canonical"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "q_max = 1/4"), "{}", stdout(&o));
}

#[test]
fn optimize_from_spec_file() {
    let spec = temp("spec.json");
    std::fs::write(
        &spec,
        r#"{"parties": 2, "unprimed_inputs": [1, 0], "success_outcomes": [0, 1], "zero_outcomes": [1, 1]}"#,
    )
    .unwrap();
    let o = run(&["optimize", "--scenario", "bipartite", "--set", "ns", "--spec", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("q_max = 1/2"));
}

#[test]
fn optimize_rejects_bad_requests() {
    let o = run(&["optimize", "--scenario", "bipartite", "--set", "tobl", "--canonical"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["optimize", "--scenario", "tripartite", "--set", "ns"]);
    assert_eq!(o.status.code(), Some(2));
    let spec = temp("bad-spec.json");
    std::fs::write(&spec, r#"{"parties": 3}"#).unwrap();
    let o = run(&["optimize", "--scenario", "tripartite", "--set", "ns", "--spec", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad-spec.json"));
}

#[test]
fn validate_reference_table() {
    let o = run(&["validate", data("tobl_optimum.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("valid\n"));
}

#[test]
fn validate_reports_violations() {
    let text = std::fs::read_to_string(data("tobl_optimum.json")).unwrap();
    let broken = text.replacen("\"1/4\"", "\"1/3\"", 1);
    let path = temp("broken.json");
    std::fs::write(&path, broken).unwrap();
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("normalized: no"));
}

#[test]
fn malformed_file_gives_located_error() {
    let path = temp("malformed.csv");
    std::fs::write(&path, "xyz,000,001\n000,1/2,x\n").unwrap();
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
    let o = run(&["validate", temp("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn membership_verdicts() {
    let file = data("tobl_optimum.json");
    let file = file.to_str().unwrap();
    let o = run(&["membership", file, "--set", "local"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not a member"));
    assert!(stdout(&o).contains("certificate"));
    assert_eq!(run(&["membership", file, "--set", "tobl"]).status.code(), Some(0));
    assert_eq!(run(&["membership", file, "--set", "ns"]).status.code(), Some(0));
}

#[test]
fn usage_errors() {
    for args in [&["frobnicate"][..], &["validate"], &["validate", "x.json", "--bogus"], &[]] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("Usage"), "{args:?}: {}", stderr(&o));
    }
    let o = run(&["membership", "x.json", "--set", "quantum"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid value"));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn decompose_verifies_embedded_tables() {
    let o = run(&[
        "decompose",
        data("tobl_optimum.json").to_str().unwrap(),
        "--verify",
        data("tobl_optimum_decomposition.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches(": exact").count(), 6);
}

#[test]
fn decompose_solves_for_tables() {
    let json = temp("decomposition.json");
    let o = run(&[
        "decompose",
        data("tobl_optimum.json").to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let d = hardy_tobl::ToblDecomposition::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(hardy_tobl::verify_decomposition(&hardy_tobl::reference::tobl_optimum(), &d).passed());
}

#[test]
fn wire_reports_progress_on_stderr() {
    let json = temp("wire.json");
    let o = run(&[
        "wire",
        data("tobl_optimum.json").to_str().unwrap(),
        "--pair",
        "ab",
        "--threads",
        "2",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("wirings: 65536/65536"));
    assert!(!stdout(&o).contains("wirings: 4096"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["nonlocal"], 0);
    assert_eq!(v["max_chsh"], "2");
}

#[test]
fn reproduce_json_is_byte_identical() {
    let a = temp("reproduce-a.json");
    let b = temp("reproduce-b.json");
    for p in [&a, &b] {
        let o = run(&["reproduce-paper", "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sweep_bipartite_ns() {
    let o = run(&["sweep", "--scenario", "bipartite", "--set", "ns"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("64 specs, distinct optima: 1/2"));
}
