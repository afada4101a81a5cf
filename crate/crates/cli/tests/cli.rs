use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn graphmotive(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphmotive"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    stdout(out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn psi_from_edge_list_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("triangle.txt");
    fs::write(&path, "# triangle\n3 3\n0 1\n1 2\n2 0\n").unwrap();
    let out = graphmotive(&["psi", path.to_str().unwrap(), "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["psi"], "t0 + t1 + t2");
    assert_eq!(lines[0]["methods_agree"], true);
    assert_eq!(lines[0]["forest_count"], 3);
    assert_eq!(lines[0]["schema"], 1);
}

#[test]
fn psi_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("banana.json");
    fs::write(&path, r#"{"vertex_count": 2, "edges": [[0, 1], [0, 1]]}"#).unwrap();
    let out = graphmotive(&["psi", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["psi"], "t0 + t1");
}

#[test]
fn count_emits_one_line_per_prime() {
    let out = graphmotive(&["count", "--family", "cycle:3", "--primes", "3,5", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 2);
    // psi = t0 + t1 + t2: q^2 zeros, projective count q + 1
    for (line, q) in lines.iter().zip([3u64, 5]) {
        assert_eq!(line["q"], q);
        assert_eq!(line["affine_zero_count"], q * q);
        assert_eq!(line["complement_count"], q * q * q - q * q);
        assert_eq!(line["projective_count"], q + 1);
        assert_eq!(line["schema"], 1);
    }
}

#[test]
fn class_of_triangle() {
    let out = graphmotive(&["class", "--family", "cycle:3"]);
    assert_eq!(out.status.code(), Some(0));
    let line = &json_lines(&out)[0];
    assert_eq!(line["status"], "candidate");
    assert_eq!(line["class"], "L^3 - L^2");
    assert_eq!(line["held_out_primes"].as_array().unwrap().len(), 2);
    assert_eq!(line["hodge"]["matches_prediction"], true);
}

#[test]
fn dc_check_single_edge() {
    let out = graphmotive(&["dc-check", "--family", "banana:2", "--primes", "5", "--edge", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pass"], true);
    let verdicts = report["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 1);
    assert_eq!(verdicts[0]["theorem"], "dc-regular");
    assert_eq!(verdicts[0]["observations"][0]["observed"], 20);
}

#[test]
fn family_round_trips_through_psi() {
    let out = graphmotive(&["family", "--family", "dumbbell:3", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d3.txt");
    // the table form is a commented edge list
    fs::write(&path, stdout(&out)).unwrap();
    let out = graphmotive(&["psi", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_lines(&out)[0]["psi"], "t0*t3 + t1*t3 + t2*t3");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["count", "--family", "cycle:3", "--primes", "4"],
        vec!["psi"],
        vec!["psi", "--family", "cycle:2"],
        vec!["psi", "--family", "petersen:3"],
        vec!["psi", "/nonexistent/graph.txt"],
        vec!["count", "--family", "cycle:3", "--method", "guess"],
    ] {
        let out = graphmotive(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn malformed_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "3 2\n0 1\n1 7\n").unwrap();
    let out = graphmotive(&["psi", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn verify_skips_over_budget_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = graphmotive(&[
        "verify", "--family", "wheel:4", "--family", "cycle:3", "--budget", "1000",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    let graphs = report["graphs"].as_array().unwrap();
    assert_eq!(graphs[0]["id"], "wheel:4");
    assert_eq!(graphs[0]["status"], "skipped");
    assert_eq!(graphs[1]["status"], "pass");
    assert_eq!(report["overall_pass"], true);
}

#[test]
fn verify_output_is_stable() {
    let args = ["verify", "--family", "banana:3", "--family", "dumbbell:3", "--no-classes"];
    let a = graphmotive(&args);
    let b = graphmotive(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
