use std::process::{Command, Output};

use serde_json::Value;

fn aflt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aflt"))
        .args(args)
        .env_remove("AFLT_CURVE_DB")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn check_reports_main_witness() {
    let v = json(&aflt(&["check", "--C", "7", "--q", "3", "--parity", "even"]));
    let row = &v["rows"][0];
    assert_eq!(row["status"], "OBSTRUCTED");
    assert_eq!(row["hypothesis_path"], "main");
    assert_eq!(row["witnesses"][0]["t"], 5);
    assert_eq!(row["witnesses"][0]["m"], 8);
}

#[test]
fn check_accepts_full_exponent() {
    let v = json(&aflt(&["check", "--c", "7", "--q", "17", "--k", "4"]));
    let row = &v["rows"][0];
    assert_eq!(row["parity"], "even");
    assert_eq!(row["status"], "SATISFIED_WITHIN_BOX");
    assert_eq!(row["hypothesis_path"], "b");
}

#[test]
fn check_csv_and_table() {
    let out = aflt(&["check", "--C", "7", "--q", "17", "--parity", "even", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("C,q,parity,status,hypothesis_path,witnesses,notes"));
    assert!(lines.next().unwrap().starts_with("7,17,even,SATISFIED_WITHIN_BOX,b,"));

    let out = aflt(&[
        "check", "--C", "7", "--q", "17", "--parity", "even", "--format", "table",
    ]);
    assert!(out.status.success());
}

#[test]
fn small_box_fails_hypotheses() {
    let v = json(&aflt(&[
        "check", "--C", "7", "--q", "17", "--parity", "even", "--m-max", "5",
    ]));
    assert_eq!(v["rows"][0]["status"], "HYPOTHESES_FAIL");
}

#[test]
fn input_errors_exit_one() {
    for args in [
        &["check", "--C", "12", "--q", "3", "--parity", "even"][..],
        &["check", "--C", "7", "--q", "9", "--parity", "even"],
        &["check", "--C", "7", "--q", "3", "--parity", "sideways"],
        &["check", "--C", "7", "--q", "3"],
        &["check", "--C", "7", "--q", "3", "--parity", "even", "--format", "xml"],
        &["solve", "--equation", "cubic", "--C", "7", "--q", "3"],
        &[
            "mordell",
            "--C",
            "7",
            "--q",
            "3",
            "--family",
            "E",
            "--height-bound",
            "0",
        ],
        &["frobnicate"],
    ] {
        let out = aflt(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(aflt(&["--help"]).status.code(), Some(0));
}

#[test]
fn database_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.txt");
    std::fs::write(&path, "# coverage <= 1000\n98 a1 1 5 0 7 0\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_aflt"))
        .args(["check", "--C", "7", "--q", "3", "--parity", "even"])
        .env("AFLT_CURVE_DB", &path)
        .output()
        .unwrap();
    let v = json(&out);
    let notes = v["rows"][0]["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n == "table lookup: [(3;0;6)]"), "{notes:?}");

    let missing = Command::new(env!("CARGO_BIN_EXE_aflt"))
        .args(["check", "--C", "7", "--q", "3", "--parity", "even"])
        .env("AFLT_CURVE_DB", dir.path().join("absent.txt"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));

    std::fs::write(&path, "98 a1 1 5 0\n").unwrap();
    let bad = aflt(&[
        "check",
        "--C",
        "7",
        "--q",
        "3",
        "--parity",
        "even",
        "--db",
        path.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn solve_lists_solutions() {
    let v = json(&aflt(&[
        "solve",
        "--equation",
        "main",
        "--C",
        "1",
        "--q",
        "7",
        "--m-max",
        "20",
        "--gamma-max",
        "3",
    ]));
    let triples: Vec<(u64, u64, u64)> = v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            (
                s["t"].as_u64().unwrap(),
                s["gamma"].as_u64().unwrap(),
                s["m"].as_u64().unwrap(),
            )
        })
        .collect();
    assert!(triples.contains(&(181, 1, 15)));

    let v = json(&aflt(&[
        "solve",
        "--equation",
        "qpow",
        "--C",
        "7",
        "--q",
        "71",
        "--m-max",
        "10",
        "--gamma-max",
        "3",
    ]));
    assert_eq!(v["solutions"][0]["m"], 6);
    assert_eq!(v["solutions"][0]["meets_threshold"], false);
}

#[test]
fn frey_adapted_instance() {
    let v = json(&aflt(&[
        "frey", "--C", "7", "--t", "3", "--m", "6", "--q", "3", "--gamma", "0",
    ]));
    assert_eq!(v["coefficients"], serde_json::json!(["1", "5", "0", "7", "0"]));
    assert_eq!(v["discriminant"], "-343");
    assert_eq!(v["conductor"], "98");
}

#[test]
fn mordell_finds_the_point() {
    let v = json(&aflt(&[
        "mordell",
        "--C",
        "7",
        "--q",
        "3",
        "--family",
        "E",
        "--b",
        "2",
        "--d",
        "4",
        "--height-bound",
        "200",
    ]));
    let curve = &v["curves"][0];
    let points: Vec<String> = curve["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.to_string())
        .collect();
    assert!(
        points.iter().any(|p| p.contains("112") && p.contains("980")),
        "{points:?}"
    );
    let sols = curve["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(
        (&sols[0]["t"], &sols[0]["gamma"], &sols[0]["m"]),
        (&5.into(), &4.into(), &8.into())
    );
}

#[test]
fn survey_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("survey.json");
    let out = aflt(&[
        "survey",
        "--c-max",
        "15",
        "--q-max",
        "13",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert_eq!(v["totals"]["pairs"].as_u64().unwrap() as usize, rows.len());
}
