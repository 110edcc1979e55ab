use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetaur"))
        .args(args)
        .output()
        .expect("spawn thetaur")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn graph_dot_for_pentagon_has_five_edges() {
    let out = run(&[
        "graph",
        "--input",
        &path("pentagon.json"),
        "--format",
        "dot",
    ]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches(" -- ").count(), 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("edges 5"));
}

#[test]
fn graph_single_observable_is_isolated_vertex() {
    let v = run_json(&["graph", "--input", &path("z.json")]);
    assert_eq!(v["n"], 1);
    assert_eq!(v["edge_count"], 0);
}

#[test]
fn graph_json_with_commutation() {
    let v = run_json(&["graph", "--input", &path("pentagon.json"), "--commutation"]);
    assert_eq!(v["anticommutativity"]["edges"].as_array().unwrap().len(), 5);
    assert_eq!(v["commutation"]["edges"].as_array().unwrap().len(), 5);
}

#[test]
fn graph_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("g.json");
    let out = run(&[
        "graph",
        "--input",
        &path("xyz.json"),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["edge_count"], 3);
}

#[test]
fn malformed_json_exits_2() {
    let out = run(&["graph", "--input", &path("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["bounds", "--input", "/nonexistent/set.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_pauli_letter_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, r#"{"kind": "pauli", "observables": ["XQZ"]}"#).unwrap();
    let out = run(&["graph", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mixed_qubit_counts_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("mixed.json");
    std::fs::write(&f, r#"{"kind": "pauli", "observables": ["X", "XX"]}"#).unwrap();
    let out = run(&["graph", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bounds_xyz() {
    let v = run_json(&["bounds", "--input", &path("xyz.json")]);
    assert!((v["sandwich"]["theta"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((v["variance_ur"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert!((v["entropic_ur"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn bounds_pentagon_reports_non_integer_theta_as_field() {
    let v = run_json(&[
        "bounds",
        "--input",
        &path("pentagon.json"),
        "--state",
        &path("state_000.json"),
    ]);
    assert_eq!(v["sandwich"]["omega"], 2);
    assert_eq!(v["sandwich"]["chi"], 3);
    assert!((v["sandwich"]["theta"].as_f64().unwrap() - 5f64.sqrt()).abs() < 1e-6);
    assert_eq!(v["entropic_ur"]["error"], "non_integer_theta");
    assert!((v["state_check"]["sum_sq"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(v["state_check"]["violations"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn bounds_pauli27() {
    let v = run_json(&["bounds", "--input", &path("pauli27.json")]);
    assert_eq!(v["sandwich"]["omega"], 4);
    assert!((v["sandwich"]["theta"].as_f64().unwrap() - 5.0).abs() < 1e-6);
}

#[test]
fn bounds_tsallis_out_of_range_exits_2() {
    let out = run(&[
        "bounds",
        "--input",
        &path("xyz.json"),
        "--entropy",
        "tsallis",
        "--q",
        "2.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_state_dimension_mismatch_exits_3() {
    let out = run(&[
        "bounds",
        "--input",
        &path("xyz.json"),
        "--state",
        &path("state_00.json"),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn witness_threshold_for_ququart_state() {
    let v = run_json(&[
        "witness",
        "--input",
        &path("ququart_a.json"),
        "--input-b",
        &path("ququart_b.json"),
        "--state",
        &path("benatti_state.json"),
    ]);
    assert!((v["theta_ab"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert!((v["detection_threshold"].as_f64().unwrap() - 0.6).abs() < 1e-9);
}

#[test]
fn witness_z_on_00_has_zero_trace() {
    let v = run_json(&[
        "witness",
        "--input",
        &path("z.json"),
        "--input-b",
        &path("z.json"),
        "--state",
        &path("state_00.json"),
    ]);
    assert!(v["evaluations"][0]["trace"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn witness_length_mismatch_exits_3() {
    let out = run(&[
        "witness",
        "--input",
        &path("xyz.json"),
        "--input-b",
        &path("xy.json"),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_anticommuting_pair() {
    let v = run_json(&["verify", "--input", &path("xy.json"), "--seesaw", "--ppt"]);
    for key in [&v["theta"], &v["seesaw"]["value"], &v["ppt"]["upper_bound"]] {
        assert!((key.as_f64().unwrap() - 1.0).abs() < 1e-6);
    }
    assert_eq!(v["omega"], 1);
}

#[test]
fn verify_pentagon_seesaw() {
    let v = run_json(&["verify", "--input", &path("pentagon.json"), "--seesaw"]);
    assert!((v["seesaw"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    assert_eq!(v["flags"]["seesaw_below_theta"], true);
    assert_eq!(v["flags"]["seesaw_above_omega"], false);
}

#[test]
fn verify_ppt_over_cap_exits_4() {
    let out = run(&["verify", "--input", &path("four_qubit.json"), "--ppt"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hint"));
}

#[test]
fn scan_one_qubit_is_tight() {
    let v = run_json(&[
        "scan",
        "--qubits",
        "1",
        "--max-set-size",
        "3",
        "--samples",
        "100",
    ]);
    assert_eq!(v["exhaustive"], true);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    for r in rows {
        assert!((r["theta"].as_f64().unwrap() - r["omega"].as_f64().unwrap()).abs() < 1e-6);
    }
}

#[test]
fn scan_is_deterministic() {
    let args = [
        "scan",
        "--qubits",
        "2",
        "--max-set-size",
        "5",
        "--samples",
        "30",
        "--seed",
        "11",
        "--restarts",
        "4",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_rows_sorted_and_bracketed() {
    let v = run_json(&[
        "scan",
        "--qubits",
        "3",
        "--max-set-size",
        "6",
        "--samples",
        "40",
        "--restarts",
        "8",
    ]);
    assert_eq!(v["invariant_violations"], 0);
    let gaps: Vec<f64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["gap"].as_f64().unwrap())
        .collect();
    assert!(gaps.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn scan_over_cap_exits_4() {
    let out = run(&[
        "scan",
        "--qubits",
        "4",
        "--max-set-size",
        "2",
        "--samples",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

fn assert_schema(schema: &str, doc: &Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema:?}: {errors:?}");
}

#[test]
fn outputs_match_shipped_schemas() {
    assert_schema(
        "graph",
        &run_json(&["graph", "--input", &path("pentagon.json"), "--commutation"]),
    );
    assert_schema(
        "bounds",
        &run_json(&[
            "bounds",
            "--input",
            &path("pentagon.json"),
            "--state",
            &path("state_000.json"),
        ]),
    );
    assert_schema(
        "bounds",
        &run_json(&[
            "bounds",
            "--input",
            &path("xyz.json"),
            "--entropy",
            "tsallis",
        ]),
    );
    assert_schema(
        "witness",
        &run_json(&[
            "witness",
            "--input",
            &path("ququart_a.json"),
            "--input-b",
            &path("ququart_b.json"),
            "--state",
            &path("benatti_state.json"),
        ]),
    );
    assert_schema(
        "witness",
        &run_json(&[
            "witness",
            "--input",
            &path("z.json"),
            "--input-b",
            &path("z.json"),
        ]),
    );
    assert_schema(
        "verify",
        &run_json(&["verify", "--input", &path("xy.json"), "--seesaw", "--ppt"]),
    );
    assert_schema(
        "scan",
        &run_json(&[
            "scan",
            "--qubits",
            "2",
            "--max-set-size",
            "3",
            "--samples",
            "20",
        ]),
    );
}

#[test]
fn shipped_inputs_match_schemas() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        if name == "malformed.json" {
            continue;
        }
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_schema(
            if name.starts_with("state") || name.ends_with("state.json") {
                "matrix"
            } else {
                "observable_set"
            },
            &doc,
        );
    }
}
