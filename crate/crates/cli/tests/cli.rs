//! End-to-end tests of the `bellgame` binary: output formats, file inputs,
//! exit codes, and determinism of repeated invocations.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bellgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellgame"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("bellgame-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("write temp file");
    path
}

#[test]
fn classical_table_csv_prints_scaled_pairs() {
    let out = bellgame(&["classical-table"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("\"6,9\""), "missing (g0,g0) cell: {text}");
    assert!(text.contains("\"-4,1\""), "missing (g6,g1) cell");
    assert!(text.lines().next().unwrap().contains("1/27"));
}

#[test]
fn classical_table_equilibria_lists_g1_g1() {
    let out = bellgame(&["classical-table", "--equilibria"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(
        text.contains("(g1,g1)"),
        "equilibria listing missing: {text}"
    );
}

#[test]
fn classical_table_json_has_eight_rows() {
    let out = bellgame(&["classical-table", "--format", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 8);
    assert_eq!(json["scale_denominator"], 27);
    assert_eq!(json["rows"][0]["cells"][0], serde_json::json!([6, 9]));
    assert!(json.get("equilibria").is_none());

    let out = bellgame(&["classical-table", "--format", "json", "--equilibria"]);
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let cells = json["equilibria"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 10);
    assert!(cells
        .iter()
        .any(|c| c["row"] == "g1" && c["col"] == "g1"));
    assert_eq!(
        json["equilibria"]["max_welfare_over_all_cells"]
            .as_f64()
            .unwrap(),
        15.0 / 27.0
    );
}

#[test]
fn quantum_defaults_reproduce_published_payoff() {
    let out = bellgame(&["quantum", "--state", "paper", "--angles", "paper"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let f_a = json["F_A"].as_f64().unwrap();
    assert!((f_a - 0.223651).abs() < 1e-4, "F_A = {f_a}");
    assert!(json["s"].as_f64().unwrap() > 0.0);
}

#[test]
fn quantum_singlet_box_rows_normalized() {
    let out = bellgame(&["quantum", "--state", "singlet", "--angles", "paper"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let rows = json["box"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for row in rows {
        let sum: f64 = row["probs"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p.as_f64().unwrap())
            .sum();
        assert!(
            (sum - 1.0).abs() < 1e-9,
            "row {} sums to {sum}",
            row["pair"]
        );
    }
}

#[test]
fn quantum_rejects_state_with_wrong_trace() {
    let entry = |re: f64| format!("{{\"re\":{re},\"im\":0.0}}");
    let zero = entry(0.0);
    let bad_state = format!(
        "[[{},{z},{z},{z}],[{z},{z},{z},{z}],[{z},{z},{z},{z}],[{z},{z},{z},{z}]]",
        entry(0.9),
        z = zero
    );
    let path = write_temp("bad-state.json", &bad_state);
    let out = bellgame(&["quantum", "--state", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(
        err.contains("trace"),
        "stderr should name the violation: {err}"
    );
    let _ = std::fs::remove_file(path);
}

#[test]
fn quantum_accepts_angle_file() {
    let angles = r#"{
        "alice": [{"theta": 0.361367, "phi": 0.0},
                  {"theta": -0.361367, "phi": 0.0},
                  {"theta": -1.5707963267948966, "phi": 0.0}],
        "bob":   [{"theta": -0.6154797086703874, "phi": 0.0},
                  {"theta": 0.6154797086703874, "phi": 0.0},
                  {"theta": 1.5707963267948966, "phi": 0.0}]
    }"#;
    let path = write_temp("angles.json", angles);
    let out = bellgame(&[
        "quantum",
        "--state",
        "paper",
        "--angles",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let f_a = json["F_A"].as_f64().unwrap();
    assert!((f_a - 0.223651).abs() < 1e-4);
    let _ = std::fs::remove_file(path);
}

#[test]
fn inequality_i3322_reports_three_agreeing_forms() {
    let out = bellgame(&["inequality", "--kind", "i3322"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let forms = json["forms"].as_array().unwrap();
    assert_eq!(forms.len(), 3);
    for form in forms {
        let s = form["s"].as_f64().unwrap();
        assert!((s - 0.012859).abs() < 1e-5, "s = {s}");
    }
    assert!(json["max_pairwise_discrepancy"].as_f64().unwrap() < 1e-9);
}

#[test]
fn inequality_i3322_accepts_box_file() {
    // The deterministic all-zero-answers box: S must be exactly 0.
    let rows: Vec<String> = (1..=3)
        .flat_map(|i| {
            (1..=3).map(move |j| format!("{{\"pair\":\"A{i}B{j}\",\"probs\":[1.0,0.0,0.0,0.0]}}"))
        })
        .collect();
    let path = write_temp("box.json", &format!("[{}]", rows.join(",")));
    let out = bellgame(&[
        "inequality",
        "--kind",
        "i3322",
        "--box",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(json["forms"][0]["s"].as_f64().unwrap(), 0.0);
    let _ = std::fs::remove_file(path);
}

#[test]
fn inequality_chsh_singlet_and_advice_state() {
    let out = bellgame(&["inequality", "--kind", "chsh", "--state", "singlet"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let max_chsh = json["max_chsh"].as_f64().unwrap();
    assert!((max_chsh - 2.0 * 2.0f64.sqrt()).abs() < 1e-9);
    assert_eq!(json["violates"], true);

    let out = bellgame(&["inequality", "--kind", "chsh", "--state", "paper"]);
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(json["max_chsh"].as_f64().unwrap() < 2.0);
    assert_eq!(json["violates"], false);
}

#[test]
fn optimize_same_seed_is_byte_identical() {
    let args = [
        "optimize",
        "--state",
        "paper",
        "--restriction",
        "plane",
        "--budget",
        "2500",
        "--seed",
        "42",
    ];
    let first = bellgame(&args);
    let second = bellgame(&args);
    assert!(first.status.success());
    assert_eq!(
        first.stdout, second.stdout,
        "optimizer output must be reproducible"
    );
}

#[test]
fn optimize_emits_result_fields() {
    let out = bellgame(&[
        "optimize",
        "--state",
        "singlet",
        "--restriction",
        "plane",
        "--budget",
        "2000",
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(json["evaluations"], 2000);
    assert_eq!(json["best_config"]["alice"].as_array().unwrap().len(), 3);
    assert!(json["best_s"].as_f64().is_some());
    assert!(json["best_welfare"].as_f64().is_some());
    assert!(json["converged"].as_bool().is_some());
}

#[test]
fn reproduce_passes_and_reports_each_check() {
    let out = bellgame(&["reproduce"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("M_1"));
    assert!(text.contains("0.808687"));
    assert!(text.contains("OVERALL: PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn reproduce_fails_under_injected_utility_fault() {
    let out = bellgame(&["reproduce", "--inject-utility-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_str(&out);
    assert!(text.contains("OVERALL: FAIL"));
}

#[test]
fn usage_errors_exit_2() {
    let out = bellgame(&["optimize", "--restriction", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bellgame(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}
