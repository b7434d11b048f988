use std::path::PathBuf;
use std::process::{Command, Output};

fn contspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contspec"))
        .args(args)
        .env_remove("CONTSPEC_LOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_passes_for_both_families() {
    let t = contspec(&["verify"]);
    assert_eq!(t.status.code(), Some(0), "{}", stderr(&t));
    let report: serde_json::Value = serde_json::from_str(&stdout(&t)).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["family"], "translation");
    for check in [
        "continuity",
        "temporal_stability",
        "eigen_relation",
        "resolution_of_identity",
        "action_identity",
        "commutator_limit",
    ] {
        assert_eq!(report["verdict"][check]["pass"], true, "{check}");
    }

    let d = contspec(&["verify", "--family", "dilation", "--beta", "0.8", "--lambda", "0.5"]);
    assert_eq!(d.status.code(), Some(0), "{}", stderr(&d));
}

#[test]
fn verify_json_is_byte_identical_across_runs() {
    let a = contspec(&["verify", "--family", "dilation"]);
    let b = contspec(&["verify", "--family", "dilation"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn invalid_parameters_exit_with_config_error() {
    let o = contspec(&["verify", "--alpha", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("alpha") && msg.contains("> 0"), "{msg}");

    for args in [
        &["kernel", "--s", "0"][..],
        &["verify", "--family", "dilation", "--alpha", "1"],
        &["verify", "--epsilon", "-0.5"],
        &["commutator", "--family", "dilation", "--grid", "0,1"],
        &["scan", "--s", "log:1e-3:1e3:1000", "--alpha", "0.1:10:1000"],
        &["verify", "--tol", "0"],
        &["verify", "--convention", "sideways"],
        &["verify", "--config", "/nonexistent/contspec.json"],
    ] {
        let o = contspec(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn forcing_displayed_conventions_fails_verification() {
    let o = contspec(&["verify", "--family", "dilation", "--convention", "paper"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdict"]["resolution_of_identity"]["pass"], false);
}

#[test]
fn scan_covers_the_whole_grid_in_order() {
    let o = contspec(&["scan", "--alpha", "0.5,1,2", "--s", "0.5,1,2", "--jobs", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(doc["failed_points"], 0);
    let mut expected = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        for s in [0.5, 1.0, 2.0] {
            expected.push((a, s));
        }
    }
    for (row, (a, s)) in rows.iter().zip(expected) {
        assert_eq!(row["shape"].as_f64(), Some(a));
        assert_eq!(row["s"].as_f64(), Some(s));
        assert!(row["round_trip"].as_f64().unwrap() < 1e-10);
    }
    assert!(doc["monotonicity"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["monotone"] == true));

    let serial = contspec(&["scan", "--alpha", "0.5,1,2", "--s", "0.5,1,2", "--jobs", "1"]);
    assert_eq!(serial.stdout, o.stdout);
}

#[test]
fn csv_output_has_a_header_and_one_line_per_row() {
    let o = contspec(&["kernel", "--grid", "0:4:9", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "E,re,im");
    assert_eq!(lines.len(), 10);

    let s = contspec(&[
        "scan", "--family", "dilation", "--beta", "0.5,1", "--s", "1,2,3", "--format", "csv",
    ]);
    assert_eq!(s.status.code(), Some(0));
    assert_eq!(stdout(&s).lines().count(), 7);
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let path = scratch("dilation.json");
    std::fs::write(
        &path,
        r#"{"family": "dilation", "beta": 2.0, "lambda": 0.25, "grid": [1.0, 2.0], "format": "json"}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();

    let o = contspec(&["commutator", "--config", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["family"], "dilation");
    assert_eq!(doc["params"]["beta"], 2.0);
    assert_eq!(doc["params"]["lambda"], 0.25);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);

    let o = contspec(&["commutator", "--config", p, "--beta", "0.5", "--grid", "1,2,3"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["params"]["beta"], 0.5);
    assert_eq!(doc["params"]["lambda"], 0.25);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);

    let bad = scratch("unknown-key.json");
    std::fs::write(&bad, r#"{"alfa": 1.0}"#).unwrap();
    assert_eq!(
        contspec(&["verify", "--config", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn out_flag_writes_the_document_to_a_file() {
    let path = scratch("moments.json");
    let _ = std::fs::remove_file(&path);
    let o = contspec(&["moments", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["residual"].as_f64().unwrap() < 1e-8));
}

#[test]
fn log_level_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_contspec"))
        .args(["moments"])
        .env("CONTSPEC_LOG", "debug")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("convention"));
}
