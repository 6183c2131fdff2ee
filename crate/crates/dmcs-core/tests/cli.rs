//! End-to-end tests of the `dmcs` binary: JSON outputs, exit codes, and
//! the documented error objects.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dmcs() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dmcs"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    dmcs()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn stderr_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stderr).expect("stderr is JSON")
}

#[test]
fn gen_ring_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["gen", "ring", "30", "6", "--out", "ring"]);
    let json = stdout_json(&out);
    assert_eq!(json["nodes"], 180);
    assert_eq!(json["edges"], 480);
    let edges = fs::read_to_string(dir.path().join("ring.el")).unwrap();
    assert_eq!(edges.lines().count(), 480);
    let truth = fs::read_to_string(dir.path().join("ring.cmty")).unwrap();
    assert_eq!(truth.lines().count(), 30);
}

#[test]
fn gen_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["gen", "ring", "2", "6", "--out", "bad"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "invalid_parameter");
}

#[test]
fn gen_sbm_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "gen", "sbm", "60", "4", "0.8", "0.02", "--seed", "7", "--out", "a",
    ];
    run(dir.path(), &args);
    let first_el = fs::read(dir.path().join("a.el")).unwrap();
    let first_cmty = fs::read(dir.path().join("a.cmty")).unwrap();
    run(dir.path(), &args);
    assert_eq!(first_el, fs::read(dir.path().join("a.el")).unwrap());
    assert_eq!(first_cmty, fs::read(dir.path().join("a.cmty")).unwrap());
}

#[test]
fn search_fpa_on_ring() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "ring", "30", "6", "--out", "ring"]);
    let out = run(
        dir.path(),
        &["search", "ring.el", "--query", "2", "--algo", "fpa"],
    );
    let json = stdout_json(&out);
    assert_eq!(json["size"], 6);
    assert!((json["dm"].as_f64().unwrap() - 2.411111).abs() < 1e-4);
    assert_eq!(json["algorithm"], "fpa");
    assert_eq!(json["pruning"], true);
    assert_eq!(
        json["community"],
        serde_json::json!([0, 1, 2, 3, 4, 5])
    );
}

#[test]
fn search_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "ring", "3", "3", "--out", "tiny"]);
    let out = run(
        dir.path(),
        &[
            "search", "tiny.el", "--query", "1", "--algo", "nca", "--out", "run.json",
        ],
    );
    let printed = stdout_json(&out);
    let written: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(printed, written);
}

#[test]
fn search_kcore_infeasible_k() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "ring", "30", "6", "--out", "ring"]);
    let out = run(
        dir.path(),
        &[
            "search", "ring.el", "--query", "0", "--algo", "kcore", "--k", "6",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"]["kind"], "no_kcore_community");
}

#[test]
fn search_kcore_requires_k() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "ring", "3", "3", "--out", "tiny"]);
    let out = run(
        dir.path(),
        &["search", "tiny.el", "--query", "0", "--algo", "kcore"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "invalid_parameter");
}

#[test]
fn search_unknown_query_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "ring", "3", "3", "--out", "tiny"]);
    let out = run(
        dir.path(),
        &["search", "tiny.el", "--query", "9999", "--algo", "fpa"],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "unknown_node");
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("9999"));
}

#[test]
fn search_exact_respects_size_cap() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &["gen", "sbm", "12", "3", "0.9", "0.2", "--seed", "5", "--out", "s"],
    );
    // Succeeds within the default limit of 16.
    let out = run(
        dir.path(),
        &["search", "s.el", "--query", "0", "--algo", "exact"],
    );
    let json = stdout_json(&out);
    assert!(json["size"].as_u64().unwrap() >= 1);

    // A tight env cap triggers the refusal exit code.
    let out = dmcs()
        .current_dir(dir.path())
        .env("DMCS_NODE_LIMIT", "4")
        .args(["search", "s.el", "--query", "0", "--algo", "exact"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_json(&out)["error"]["kind"], "component_too_large");

    // The --node-limit flag overrides the environment.
    let out = dmcs()
        .current_dir(dir.path())
        .env("DMCS_NODE_LIMIT", "4")
        .args([
            "search", "s.el", "--query", "0", "--algo", "exact", "--node-limit", "16",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn search_disconnected_queries() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("two.el"), "0 1\n2 3\n").unwrap();
    let out = run(
        dir.path(),
        &["search", "two.el", "--query", "0,3", "--algo", "fpa"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "queries_disconnected");
}

#[test]
fn eval_perfect_match() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "ring", "30", "6", "--out", "ring"]);
    run(
        dir.path(),
        &[
            "search", "ring.el", "--query", "2", "--algo", "fpa", "--out", "run.json",
        ],
    );
    let out = run(dir.path(), &["eval", "run.json", "ring.cmty"]);
    let json = stdout_json(&out);
    assert_eq!(json["nmi"], 1.0);
    assert_eq!(json["ari"], 1.0);
    assert_eq!(json["fscore"], 1.0);
    assert_eq!(json["matched_truth"], 0);
}

#[test]
fn eval_not_applicable_when_no_truth_contains_query() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "ring", "3", "3", "--out", "tiny"]);
    run(
        dir.path(),
        &[
            "search", "tiny.el", "--query", "0", "--algo", "fpa", "--out", "run.json",
        ],
    );
    fs::write(dir.path().join("other.cmty"), "6 7 8\n").unwrap();
    let out = run(dir.path(), &["eval", "run.json", "other.cmty"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "not_applicable");
}

#[test]
fn eval_disjoint_prediction_scores_zero_fscore() {
    // A record whose community misses every node of the eligible truth.
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "ring", "3", "3", "--out", "tiny"]);
    let record = serde_json::json!({
        "schema": 1,
        "graph": "tiny.el",
        "algorithm": "fpa",
        "query": [0],
        "community": [6, 7, 8],
        "size": 3,
        "dm": 0.0,
        "cm": 0.0,
        "best_iteration": 0,
        "removals": 0,
        "wall_time_ms": 0.0
    });
    fs::write(
        dir.path().join("run.json"),
        serde_json::to_string(&record).unwrap(),
    )
    .unwrap();
    let out = run(dir.path(), &["eval", "run.json", "tiny.cmty"]);
    let json = stdout_json(&out);
    assert_eq!(json["fscore"], 0.0);
    assert_eq!(json["matched_truth"], 0);
}

#[test]
fn eval_with_explicit_n() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "ring", "3", "3", "--out", "tiny"]);
    run(
        dir.path(),
        &[
            "search", "tiny.el", "--query", "4", "--algo", "fpa", "--out", "run.json",
        ],
    );
    let out = run(dir.path(), &["eval", "run.json", "tiny.cmty", "--n", "9"]);
    let json = stdout_json(&out);
    assert_eq!(json["matched_truth"], 1);
}

#[test]
fn stats_path_graph() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p4.el"), "0 1\n1 2\n2 3\n").unwrap();
    let out = run(dir.path(), &["stats", "p4.el"]);
    let json = stdout_json(&out);
    assert_eq!(json["nodes"], 4);
    assert_eq!(json["edges"], 3);
    assert_eq!(json["components"], 1);
    assert_eq!(json["diameter_estimate"], 3);
    assert_eq!(
        json["degree_histogram"],
        serde_json::json!([[1, 2], [2, 2]])
    );
}

#[test]
fn stats_ring_and_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "ring", "3", "3", "--out", "tiny"]);
    let out = run(dir.path(), &["stats", "tiny.el"]);
    let json = stdout_json(&out);
    assert_eq!(json["nodes"], 9);
    assert_eq!(json["edges"], 12);

    fs::write(dir.path().join("empty.el"), "").unwrap();
    let out = run(dir.path(), &["stats", "empty.el"]);
    let json = stdout_json(&out);
    assert_eq!(json["nodes"], 0);
    assert!(json["warning"].as_str().is_some());
}

#[test]
fn malformed_graph_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.el"), "0 1\nnot an edge\n").unwrap();
    let out = run(dir.path(), &["stats", "bad.el"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "parse");
    assert!(err["error"]["message"].as_str().unwrap().contains("line 2"));

    fs::write(dir.path().join("loop.el"), "3 3\n").unwrap();
    let out = run(dir.path(), &["stats", "loop.el"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "self_loop");

    fs::write(dir.path().join("neg.el"), "0 1 -1.0\n").unwrap();
    let out = run(dir.path(), &["stats", "neg.el", "--weighted"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "non_positive_weight");
}

#[test]
fn weighted_graph_loads_for_search() {
    // Algorithms consume unit weights; the weighted flag only affects
    // ingestion validation and the stored weights.
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("w.el"), "0 1 2.5\n1 2 0.5\n2 0 1.0\n").unwrap();
    let out = run(
        dir.path(),
        &["search", "w.el", "--query", "0", "--algo", "fpa", "--weighted"],
    );
    let json = stdout_json(&out);
    assert_eq!(json["size"], 3);
}
