use std::path::Path;
use std::process::{Command, Output};

use logmaj_cli::document::{from_json, to_json, ReportDocument, ScanDocument};

fn logmaj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logmaj")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> ReportDocument {
    from_json(std::str::from_utf8(&out.stdout).unwrap()).expect("report document")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn exit_status_follows_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", "[2, 2]");
    let b = write(dir.path(), "b.json", "[3, 1]");
    let holds = logmaj(&["majorize", &a, &b, "--mode", "strong"]);
    assert_eq!(holds.status.code(), Some(0));
    let violated = logmaj(&["majorize", &a, &b, "--mode", "weaklog"]);
    assert_eq!(violated.status.code(), Some(2));
    let doc = report(&violated);
    assert_eq!(doc.witness.as_deref(), Some("k=2"));
    assert!((doc.margin.0 - (3f64.ln() - 4f64.ln())).abs() < 1e-15);
}

#[test]
fn errors_exit_two_with_message() {
    let out = logmaj(&["check", "alt", "/nonexistent/family.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert!(out.stdout.is_empty());

    let out = logmaj(&["check", "alt", "--theta", "0.5,0.2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_matrix_is_rejected_with_its_index() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "m.json",
        r#"{"d": 2, "matrices": [
            [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
            [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]
        ]}"#,
    );
    let out = logmaj(&["check", "alt", &file]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("index 1") || err.contains("matrix 1"), "{err}");
}

#[test]
fn commuting_family_is_tight() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "diag.json",
        r#"{"d": 2, "matrices": [
            [[[2, 0], [0, 0]], [[0, 0], [0.5, 0]]],
            [[[3, 0], [0, 0]], [[0, 0], [1, 0]]]
        ]}"#,
    );
    for norm in ["op", "trace", "schatten:3"] {
        let out = logmaj(&["check", "alt", &file, "--theta", "0.3", "--norm", norm]);
        assert_eq!(out.status.code(), Some(0), "{norm}");
        let doc = report(&out);
        assert!(doc.margin.0.abs() <= 1e-9, "{norm}: {}", doc.margin.0);
    }
}

#[test]
fn singular_family_under_negative_trace_power_fails() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "sing.json",
        r#"{"d": 2, "matrices": [
            [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
            [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
        ]}"#,
    );
    let out = logmaj(&["check", "trace-power", &file, "--q", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let args = ["check", "gt", "--seed", "7", "--dim", "3", "--family", "3", "--trace"];
    let first = logmaj(&args);
    let second = logmaj(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    let doc: ReportDocument = from_json(&text).unwrap();
    assert!(doc.trace.as_ref().is_some_and(|t| !t.is_empty()));
    assert_eq!(to_json(&doc), text);
}

#[test]
fn out_flag_writes_the_same_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let to_stdout = logmaj(&["check", "logmaj", "--seed", "3"]);
    let to_file = logmaj(&["check", "logmaj", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(to_file.status.code(), to_stdout.status.code());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn scan_minimum_replays_as_single_check() {
    let out = logmaj(&["scan", "alt", "--seed", "11", "--samples", "12", "--theta", "0.25,0.75", "--norm", "trace"]);
    assert_eq!(out.status.code(), Some(0));
    let scan: ScanDocument = from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(scan.rows.len(), 2);
    for row in &scan.rows {
        assert_eq!(row.samples, 12);
        assert_eq!(row.counts.holds, 12);
        assert!(row.min_margin.0 <= row.median_margin.0);
        let theta = row.parameters.theta.unwrap().0.to_string();
        let offset = row.argmin_offset.to_string();
        let replay = logmaj(&[
            "check", "alt", "--seed", "11", "--offset", &offset, "--theta", &theta, "--norm", "trace",
        ]);
        assert_eq!(report(&replay).margin, row.min_margin);
    }
}

#[test]
fn lie_trotter_residual_shrinks() {
    let out = logmaj(&["check", "lie-trotter", "--seed", "5", "--theta", "0.5,0.05,0.005", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    let residuals: Vec<f64> = doc.trace.unwrap().iter().map(|t| t.values[0].0).collect();
    assert_eq!(residuals.len(), 3);
    assert!(residuals[2] < residuals[0]);
}

#[test]
fn equivalence_on_constructed_instances_is_consistent() {
    for relation in ["weak", "strong", "weaklog", "log", "log-linear"] {
        for direction in ["forward", "converse"] {
            let out = logmaj(&[
                "check", "equiv", "--relation", relation, "--direction", direction, "--seed", "2", "--dim", "3",
            ]);
            assert_eq!(out.status.code(), Some(0), "{relation} {direction}");
        }
    }
}
