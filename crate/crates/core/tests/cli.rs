use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn grpact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grpact"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn readme() -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md");
    std::fs::read_to_string(p).expect("README.md at the workspace root")
}

fn write_scenario(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn list_matches_readme_table() {
    let o = grpact(&["list"]);
    assert_eq!(code(&o), 0);
    let listed: BTreeSet<String> = stdout(&o)
        .lines()
        .map(|l| l.split('\t').next().unwrap().to_string())
        .collect();
    let text = readme();
    let section = text
        .split("## Builtin scenarios")
        .nth(1)
        .expect("builtin section")
        .split("\n## ")
        .next()
        .unwrap();
    let documented: BTreeSet<String> = section
        .lines()
        .filter_map(|l| l.strip_prefix("| `"))
        .map(|l| l.split('`').next().unwrap().to_string())
        .collect();
    assert_eq!(listed, documented);
    assert!(listed.contains("bs12-distortion"));
    assert!(listed.contains("vfree-collapse"));
    assert!(listed.contains("horoball-shape"));
}

#[test]
fn describe_unknown_is_config_error() {
    let o = grpact(&["describe", "no-such-scenario"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-scenario"));
}

#[test]
fn describe_builtin() {
    let o = grpact(&["describe", "vfree-collapse"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("line_collapse"));
}

#[test]
fn export_dot_fixture_is_byte_stable() {
    let expected = include_str!("data/c5.dot");
    for _ in 0..2 {
        let o = grpact(&["export-dot", "scenarios/fixtures/c5.graph"]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o), expected);
    }
}

#[test]
fn export_dot_of_builtin() {
    let o = grpact(&["export-dot", "horoball-shape"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("graph "));
}

#[test]
fn run_passes_with_exit_zero() {
    let o = grpact(&["run", "bs12-distortion"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["schema"], 1);
}

#[test]
fn reports_are_byte_identical() {
    let a = grpact(&["run", "thin-triangles", "--seed", "11"]);
    let b = grpact(&["run", "thin-triangles", "--seed", "11"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = grpact(&["run", "thin-triangles", "--format", "csv"]);
    let d = grpact(&["run", "thin-triangles", "--format", "csv"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn csv_format() {
    let o = grpact(&["run", "horoball-shape", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().starts_with('#'));
    assert!(out.lines().any(|l| l.starts_with("check,pass,")));
}

#[test]
fn budget_exhaustion_exits_three() {
    let o = grpact(&["run", "bs12-distortion", "--budget-vertices", "50"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("operations[0]"));
}

#[test]
fn failed_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(
        &dir,
        "wrong.json",
        r#"{
  "schema": 1,
  "name": "wrong",
  "group": { "family": "free", "rank": 1 },
  "operations": [
    { "op": "horoball", "graph": { "kind": "cycle", "n": 8 }, "expect": "fail" },
    { "op": "delta", "graph": { "kind": "cycle", "n": 8 } }
  ]
}"#,
    );
    let o = grpact(&["run", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["operations"].as_array().unwrap().len(), 2);

    let o = grpact(&["run", p.to_str().unwrap(), "--assert"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stopped_early"], true);
    assert_eq!(v["operations"].as_array().unwrap().len(), 1);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_scenario(
        &dir,
        "zero.json",
        r#"{"schema": 1, "name": "z", "group": {"family": "free", "rank": 2},
            "operations": [{"op": "distortion", "subgroup": "A", "radius": 0}]}"#,
    );
    let o = grpact(&["run", zero.to_str().unwrap()]);
    assert_eq!(code(&o), 2);

    let broken = write_scenario(&dir, "broken.json", "{ \"schema\": 1,\n  \"name\": ");
    let o = grpact(&["run", broken.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let o = grpact(&["run", "missing-file.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn scenario_file_reads_relative_graph() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tri.graph"), "x: y z\ny: z\n").unwrap();
    let p = write_scenario(
        &dir,
        "tri.json",
        r#"{"schema": 1, "name": "tri", "group": {"family": "free", "rank": 1},
            "operations": [{"op": "delta", "graph": {"kind": "graph", "file": "tri.graph"}, "expect": 0}]}"#,
    );
    let o = grpact(&["run", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}
