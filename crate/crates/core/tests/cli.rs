use std::path::Path;
use std::process::{Command, Output};

use lineorbit::cli::{ArrangementReport, Report};
use tempfile::TempDir;

fn lineorbit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lineorbit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const TRIANGLE: &str = r#"{"abstract": {"mults": [1, 1, 1], "bundles": []}}"#;
const PAIR: &str = r#"{"lines": [{"coeffs": [1, 0, 0], "mult": 1}, {"coeffs": [0, 1, 0], "mult": 1}]}"#;
const FAN: &str = r#"{"lines": [
    {"coeffs": [1, 0, 0], "mult": 1},
    {"coeffs": [0, 1, 0], "mult": 1},
    {"coeffs": ["1", "-1", 0], "mult": 1},
    {"coeffs": [0, 0, "1/2"], "mult": 1}
]}"#;

#[test]
fn predegree_json_round_trips() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "t.json", TRIANGLE);
    let out = lineorbit(&["predegree", &f, "--json", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.predegree_table[6], "90");
    assert_eq!(report.polynomial[2], "9/2");
    assert_eq!(report.engine_agreement, Some(true));
    assert!(report.formal);
}

#[test]
fn predegree_text_table() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "fan.json", FAN);
    let out = lineorbit(&["predegree", &f]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("Fan (orbit dimension 7)"), "{text}");
    assert!(text.lines().any(|l| l.trim_start().starts_with('7') && l.trim_end().ends_with("1890")), "{text}");
}

#[test]
fn degree_line() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "pair.json", PAIR);
    let out = lineorbit(&["degree", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("predegree 6, components 2, degree 3"), "{}", stdout(&out));
    let f = write(dir.path(), "fan.json", FAN);
    let out = lineorbit(&["degree", &f]);
    assert!(stdout(&out).contains("predegree 1890, components 6, degree 315"), "{}", stdout(&out));
}

#[test]
fn stabilizer_lists_elements() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "fan.json", FAN);
    let out = lineorbit(&["stabilizer", &f, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.components, Some(6));
    assert_eq!(report.stabilizer_elements.map(|e| e.len()), Some(6));
}

#[test]
fn abstract_star_needs_coordinates() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "s.json", r#"{"abstract": {"mults": [1, 1, 1, 1], "bundles": [[0, 1, 2, 3]]}}"#);
    let out = lineorbit(&["degree", &f]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("hint"), "{}", stderr(&out));
    let out = lineorbit(&["classify", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Star"));
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = [
        r#"{"lines": [{"coeffs": [1, "x", 0], "mult": 1}]}"#,
        r#"{"lines": [{"coeffs": [1, 0, 0], "mult": 0}]}"#,
        r#"{"lines": [{"coeffs": [1, 0, 0], "mult": 1}, {"coeffs": [2, 0, 0], "mult": 1}]}"#,
        r#"{"abstract": {"mults": [1, 1, 1, 1], "bundles": [[0, 1, 2], [0, 1, 3]]}}"#,
        r#"{"shape": []}"#,
    ];
    for (k, body) in bad.iter().enumerate() {
        let f = write(dir.path(), &format!("bad{k}.json"), body);
        let out = lineorbit(&["predegree", &f]);
        assert_eq!(out.status.code(), Some(2), "case {k}: {}", stderr(&out));
        assert!(stderr(&out).starts_with("error:"), "case {k}");
    }
    let out = lineorbit(&["predegree", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let f = write(dir.path(), "bad0.json", bad[0]);
    assert!(stderr(&lineorbit(&["predegree", &f])).contains("lines[0].coeffs[1]"));
}

#[test]
fn batch_is_ordered_by_file_name() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "b_pair.json", PAIR);
    write(dir.path(), "a_triangle.json", TRIANGLE);
    write(dir.path(), "c_fan.json", FAN);
    write(dir.path(), "notes.txt", "ignored");
    let out = lineorbit(&["predegree", "--batch", dir.path().to_str().unwrap(), "--json", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let entries: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    let names: Vec<&str> = entries
        .iter()
        .map(|e| e["file"].as_str().unwrap().rsplit('/').next().unwrap())
        .collect();
    assert_eq!(names, ["a_triangle.json", "b_pair.json", "c_fan.json"]);
    assert_eq!(entries[1]["report"]["classification"], "TwoLines");
}

#[test]
fn batch_reports_worst_exit_code() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "good.json", TRIANGLE);
    write(dir.path(), "bad.json", "{");
    let out = lineorbit(&["predegree", "--batch", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("Triangle"));
}

#[test]
fn cap_override() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "t.json", TRIANGLE);
    let out = lineorbit(&["predegree", &f, "--json", "--cap", "4"]);
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.polynomial.len(), 5);
    let out = lineorbit(&["predegree", &f, "--cap", "10", "--verify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn arrangement_subcommand() {
    let out = lineorbit(&["arrangement", "--dim", "3", "--mults", "1,1,1,1,1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r: ArrangementReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(r.top_predegree, "168168000");
    assert_eq!(r.cap, 15);
    let out = lineorbit(&["arrangement", "--dim", "2", "--mults", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(lineorbit(&["predegree"]).status.code(), Some(2));
    assert_eq!(lineorbit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lineorbit(&["--help"]).status.code(), Some(0));
}
