use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sun-rigidity"))
        .args(args)
        .env_remove("SUN_RIGIDITY_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eid_passes() {
    let o = run(&["eid", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn eid_json_schema() {
    let o = run(&["eid", "--n", "3", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = vec!["n", "max_trace", "max_div", "max_lichnerowicz", "pass"];
    want.sort_unstable();
    let mut got = keys.clone();
    got.sort_unstable();
    assert_eq!(got, want);
    assert_eq!(v["pass"], true);
}

#[test]
fn json_output_is_stable() {
    let a = stdout(&run(&["obstruction", "--n", "4", "--output", "json"]));
    let b = stdout(&run(&["obstruction", "--n", "4", "--output", "json"]));
    assert_eq!(a, b);
    assert!(a.contains("\"closed_total\": 1536"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["eid", "--n", "1"]).status.code(), Some(1));
    assert_eq!(run(&["obstruction", "--n", "2"]).status.code(), Some(1));
    assert_eq!(run(&["eid"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["soliton", "--space", "cp2", "--samples", "10"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn tight_tolerance_from_env_fails_verification() {
    let o = Command::new(env!("CARGO_BIN_EXE_sun-rigidity"))
        .args(["eid", "--n", "3"])
        .env("SUN_RIGIDITY_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn obstruction_csv_range() {
    let o = run(&["obstruction", "--n", "3..8", "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = header.iter().position(|h| *h == "closed_total").unwrap();
    let totals: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(col).unwrap()).collect();
    assert_eq!(totals, ["216", "1536", "6000", "17280", "41160", "86016"]);
}

#[test]
fn obstruction_single() {
    let o = run(&["obstruction", "--n", "5", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["i_total"].as_f64().unwrap() - 6000.0).abs() < 1e-6);
    assert_eq!(v["pass"], true);
}

#[test]
fn homdim_and_zeroset() {
    let o = run(&["homdim", "--n", "4", "--group", "product", "--output", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 2);
    let z = stdout(&run(&["zeroset", "--n", "6"]));
    assert!(z.contains("Lambda"));
}

#[test]
fn soliton_cp2() {
    let o = run(&["soliton", "--space", "cp2", "--samples", "1000000", "--seed", "7", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["exact"].as_f64().unwrap() + 0.2).abs() < 1e-15);
    assert!(v["z_score"].as_f64().unwrap() <= 4.0);
    assert!(v["verdict"].as_str().unwrap().starts_with("isolated"));
}

#[test]
fn out_file() {
    let path = std::env::temp_dir().join(format!("sun-rigidity-{}.json", std::process::id()));
    let o = run(&["nu3", "--n", "3", "--output", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["m"], 8);
}

#[test]
fn all_sweep() {
    let o = run(&["--all", "--n-range", "3..5", "--samples", "100000", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 9);
}
