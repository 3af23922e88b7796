use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn anondyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anondyn")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_kernel_reports_k1() {
    let out = anondyn(&["verify-kernel", "--max-round", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["rounds"][1]["kernel"], serde_json::json!([1, 1, -1, 1, 1, -1, -1, -1, 1]));
    assert_eq!(r["rounds"][1]["sums"]["sum_pos"], 5);
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn verify_kernel_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("kernel.json");
    let out = anondyn(&["verify-kernel", "--max-round", "5", "--out", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(saved, report(&out));
    assert_eq!(saved["rounds"][5]["sums"]["total"], 1);
    assert!(saved["rounds"][5]["generic_kernel"].is_null());
}

#[test]
fn witness_round_zero_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = anondyn(&["witness", "--round", "0", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!((manifest["n"].clone(), manifest["n_prime"].clone()), (1.into(), 2.into()));
    assert_eq!(manifest["shared_leader_vector"], serde_json::json!([1, 1]));
    assert!(dir.path().join("s.json").exists() && dir.path().join("s_prime.json").exists());
}

#[test]
fn witness_pair_is_ambiguous_to_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(anondyn(&["witness", "--round", "1", "--out", path(dir.path())]).status.code(), Some(0));
    let mut views = Vec::new();
    for name in ["s.json", "s_prime.json"] {
        let transcript = dir.path().join(format!("{name}.transcript"));
        let out = anondyn(&[
            "simulate",
            "--schedule",
            path(&dir.path().join(name)),
            "--protocol",
            "eqsolver",
            "--horizon",
            "2",
            "--transcript",
            path(&transcript),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let r = report(&out);
        assert_eq!(r["outcome"]["status"], "ambiguous-at-horizon");
        assert!(transcript.exists());
        views.push(r["leader_view_sha256"].clone());
    }
    assert_eq!(views[0], views[1]);
}

#[test]
fn diameter_lift_pair_has_equal_diameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = anondyn(&["witness", "--round", "1", "--lift", "diameter", "--D", "5", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["node_counts"], serde_json::json!([10, 11]));
    let d: Vec<Value> = ["s.json", "s_prime.json"]
        .iter()
        .map(|f| report(&anondyn(&["diameter", "--schedule", path(&dir.path().join(f))]))["diameter"].clone())
        .collect();
    assert_eq!(d, vec![Value::from(5), Value::from(5)]);
}

#[test]
fn degree_and_star_on_lifted_schedule() {
    let dir = tempfile::tempdir().unwrap();
    anondyn(&["witness", "--round", "1", "--lift", "pd2", "--out", path(dir.path())]);
    let schedule = dir.path().join("s_prime.json");
    // lifted schedules carry two rounds; the degree detector needs three
    let out = anondyn(&["simulate", "--schedule", path(&schedule), "--protocol", "degree", "--horizon", "3", "--degree-oracle"]);
    assert_eq!(out.status.code(), Some(2));

    let star = dir.path().join("star.json");
    std::fs::write(&star, r#"{"type":"graph","nodes":4,"leader":0,"rounds":[[[0,1],[0,2],[0,3]]]}"#).unwrap();
    let r = report(&anondyn(&["simulate", "--schedule", path(&star), "--protocol", "star", "--horizon", "1"]));
    assert_eq!(r["outcome"]["count"], 4);
    assert_eq!(r["outcome"]["round"], 0);
}

#[test]
fn degree_counts_restricted_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pd2.json");
    let round = r#"[[0,1],[0,2],[1,3],[2,3],[1,4]]"#;
    std::fs::write(&file, format!(r#"{{"type":"graph","nodes":5,"leader":0,"rounds":[{round},{round},{round}]}}"#))
        .unwrap();
    let out = anondyn(&["simulate", "--schedule", path(&file), "--protocol", "degree", "--horizon", "3", "--degree-oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["outcome"]["count"], 5);
    assert_eq!(r["outcome"]["round"], 2);
    let hash = r["inputs_sha256"][path(&file)].as_str().unwrap();
    assert_eq!(hash.len(), 64);
}

#[test]
fn oracle_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    let out = anondyn(&["oracle", "--max-n", "4", "--max-rounds", "2", "--out", path(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,minimal_round,predicted_floor_log3(2n+1)-1,agrees");
    assert_eq!(lines[1], "1,1,0,true");
    assert_eq!(lines[4], "4,2,1,true");
}

#[test]
fn oracle_respects_cell_guard() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_anondyn"))
        .args(["oracle", "--max-n", "6", "--max-rounds", "3", "--out", path(&dir.path().join("t.csv"))])
        .env("ANONDYN_MAX_CELLS", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "invalid-input");
    assert!(!dir.path().join("t.csv").exists());
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(anondyn(&["simulate", "--schedule", "/nonexistent.json", "--protocol", "star", "--horizon", "1"]).status.code(), Some(2));
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, r#"{"type":"graph","nodes":3,"leader":0,"rounds":[[[0,1]]]}"#).unwrap();
    let out = anondyn(&["diameter", "--schedule", path(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(anondyn(&["verify-kernel"]).status.code(), Some(2));
    assert_eq!(anondyn(&["witness", "--round", "1", "--D", "4", "--out", path(dir.path())]).status.code(), Some(2));
}
