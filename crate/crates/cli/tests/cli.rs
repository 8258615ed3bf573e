use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qot")).args(args).output().expect("spawn qot")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn field(text: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .trim()
        .parse()
        .unwrap()
}

const QUTRIT_MIXED: &str = r#"{"dim": 3, "matrix": [
  [[0.5, 0], [0.1, 0.05], [0, 0]],
  [[0.1, -0.05], [0.3, 0], [0, 0]],
  [[0, 0], [0, 0], [0.2, 0]]
]}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn counterexample_reports_both_exact_values() {
    let o = qot(&["counterexample"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("exact 0.05") && text.contains("exact 0.1"), "{text}");
    assert!(text.contains("confirmed"));
}

#[test]
fn metric_g_near_one_third() {
    let o = qot(&["metric-g", "--r", "0.3333333", "--v1", "1", "--v2", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let g: f64 = stdout(&o).trim().parse().unwrap();
    assert!((g - 0.375).abs() < 1e-6, "{g}");
}

#[test]
fn metric_g_rejects_pure_states() {
    let o = qot(&["metric-g", "--r", "1", "--v1", "1", "--v2", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn identical_states_cost_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", QUTRIT_MIXED);
    let o = qot(&["transport", "--state-a", &a, "--state-b", &a, "--projector"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(field(&stdout(&o), "value").abs() < 1e-8);
}

#[test]
fn classical_cost_and_coupling_output() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "a.json",
        r#"{"dim": 3, "matrix": [[[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]]}"#,
    );
    let b = write(
        dir.path(),
        "b.json",
        r#"{"dim": 3, "matrix": [[[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0]]]}"#,
    );
    let cost = write(dir.path(), "e.json", r#"{"n": 3, "e": [[0,1,2],[1,0,1],[2,1,0]]}"#);
    let out = dir.path().join("sol.json");
    let o =
        qot(&["transport", "--state-a", &a, "--state-b", &b, "--cost", &cost, "--coupling-out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // Orthogonal pure states: the only coupling is the product, cost E_01 / 2.
    assert!((field(&stdout(&o), "value") - 0.5).abs() < 1e-8);
    let sol: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(sol["coupling"].as_array().unwrap().len(), 9);
    assert_eq!(sol["status"], "optimal");
}

#[test]
fn squared_reports_square_root() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", QUTRIT_MIXED);
    let b = write(
        dir.path(),
        "b.json",
        r#"{"dim": 3, "matrix": [[[0.2,0],[0,0],[0,0]],[[0,0],[0.3,0],[0,0]],[[0,0],[0,0],[0.5,0]]]}"#,
    );
    let o = qot(&["transport", "--state-a", &a, "--state-b", &b, "--squared"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!((field(&text, "wasserstein") - field(&text, "value").sqrt()).abs() < 1e-15);
}

#[test]
fn malformed_json_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", "{\"dim\": 2,\n  \"matrix\": [[[1, 0], [0, 0]],\n  [[0, 0] [0, 0]]]}");
    let o = qot(&["transport", "--state-a", &a, "--state-b", &a]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn invalid_state_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"dim": 2, "matrix": [[[2,0],[0,0]],[[0,0],[0,0]]]}"#);
    let o = qot(&["transport", "--state-a", &a, "--state-b", &a]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(qot(&["qubit", "--s", "0.5", "--r", "0.5", "--theta", "1", "--bogus"]).status.code(), Some(1));
    assert_eq!(qot(&["lemma-f", "--samples", "10"]).status.code(), Some(1));
    assert_eq!(qot(&[]).status.code(), Some(1));
    assert_eq!(qot(&["--help"]).status.code(), Some(0));
    assert_eq!(qot(&["riemann", "--r", "0.3", "--grid", "1:2"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let bad_family = qot(&["campaign", "--n", "2", "--family", "nope", "--samples", "1", "--seed", "1", "--out", out]);
    assert_eq!(bad_family.status.code(), Some(1));
}

#[test]
fn qubit_agrees_with_solver() {
    let o = qot(&["qubit", "--s", "0.8", "--r", "0.3", "--theta", "1.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(field(&stdout(&o), "difference").abs() < 1e-6);
}

#[test]
fn riemann_csv_has_header_and_rows() {
    let o = qot(&["riemann", "--r", "0.25", "--grid", "-1:1:5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,v2,G,h");
    assert_eq!(lines.len(), 6);
}

#[test]
fn lemma_f_small_scan() {
    let o = qot(&["lemma-f", "--samples", "2000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["samples"], 2000);
    assert_eq!(rep["violations"], 0);
}

fn campaign_csv(workers: &str) -> (String, serde_json::Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = qot(&[
        "campaign",
        "--n",
        "3",
        "--family",
        "choi-rank-k",
        "--rank-k",
        "2",
        "--samples",
        "150",
        "--seed",
        "11",
        "--workers",
        workers,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    (fs::read_to_string(out.join("records.csv")).unwrap(), summary)
}

#[test]
fn campaign_output_independent_of_workers() {
    let (one, summary) = campaign_csv("1");
    let (four, _) = campaign_csv("4");
    assert_eq!(one, four);
    assert_eq!(one.lines().count(), 151);
    assert!(one.starts_with("sample_id,n,family,rank_k,t_before,t_after,delta,gap_before,gap_after"));
    assert_eq!(summary["violations"], 0);
    assert_eq!(summary["samples"], 150);
}

#[test]
fn mixed_unitary_defaults_to_three_terms() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mu");
    let o = qot(&[
        "campaign",
        "--n",
        "2",
        "--family",
        "mixed-unitary",
        "--samples",
        "5",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["terms"], 3);
}
