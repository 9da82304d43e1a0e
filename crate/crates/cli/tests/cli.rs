use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_softcore-dirac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Value printed after `key` in plain output.
fn field(out: &Output, key: &str) -> String {
    stdout(out)
        .lines()
        .find_map(|l| l.strip_prefix(key).map(|rest| rest.trim().to_string()))
        .unwrap_or_else(|| panic!("no '{key}' in output:\n{}", stdout(out)))
}

fn number(out: &Output, key: &str) -> f64 {
    field(out, key).parse().unwrap()
}

const ROW1: [&str; 14] = [
    "--v", "0.9", "--b", "2", "--q", "2", "--d", "2", "--j", "0.5", "--tau", "-1", "--nu", "0",
];

fn with(cmd: &str, level: &[&str]) -> Vec<String> {
    std::iter::once(cmd)
        .chain(level.iter().copied())
        .map(String::from)
        .collect()
}

fn run_owned(args: &[String]) -> Output {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    run(&refs)
}

#[test]
fn bound_row1() {
    let out = run_owned(&with("bound", &ROW1));
    assert_eq!(out.status.code(), Some(0));
    assert!((number(&out, "E^L") - 0.69320).abs() <= 2e-5);
    assert_eq!(field(&out, "boundary"), "no");
}

#[test]
fn bound_boundary_and_coulomb_limit() {
    let out = run(&[
        "bound", "--v", "0.1", "--b", "0.1", "--q", "10", "--d", "3", "--j", "1/2", "--tau", "-1",
        "--nu", "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&out, "E^L"), "0.99499");
    assert_eq!(field(&out, "boundary"), "yes");
    assert_eq!(field(&out, "t*"), "inf");

    let out = run(&[
        "bound", "--v", "0.1", "--b", "1e-12", "--q", "2", "--d", "3", "--j", "0.5", "--tau", "-1",
        "--nu", "0",
    ]);
    assert_eq!(field(&out, "E^L"), "0.99499");
}

#[test]
fn bound_json_rounds_to_ten_digits() {
    let mut args = with("bound", &ROW1);
    args.extend(["--format", "json"].map(String::from));
    let out = run_owned(&args);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let e = v["energy_lower"].as_f64().unwrap();
    assert!((e - 0.69320).abs() <= 2e-5);
    assert!(e.to_string().trim_start_matches("0.").len() <= 10);
}

#[test]
fn bound_accepts_cutoff_power() {
    let out = run(&[
        "bound", "--v", "0.5", "--b", "1", "--q", "inf", "--d", "3", "--j", "1/2", "--tau", "-1",
        "--nu", "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let e = number(&out, "E^L");
    assert!(e > 0.0 && e < 1.0);
}

#[test]
fn solve_row1() {
    let out = run_owned(&with("solve", &ROW1));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&out, "E"), "0.76378");
    assert_eq!(field(&out, "nu1"), "0");
    assert_eq!(field(&out, "nu2"), "0");
    assert_eq!(field(&out, "norm"), "1.00000");
}

#[test]
fn solve_positive_tau_has_extra_small_node() {
    let out = run(&[
        "solve", "--v", "0.7", "--b", "5", "--q", "4", "--d", "3", "--j", "1/2", "--tau", "1",
        "--nu", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&out, "nu1"), "3");
    assert_eq!(field(&out, "nu2"), "4");
    assert!((number(&out, "E") - 0.99100).abs() <= 5e-5);
}

#[test]
fn solve_ten_node_state_agrees_with_table_command() {
    let out = run(&[
        "solve", "--v", "0.7", "--b", "0.5", "--q", "5", "--d", "3", "--j", "0.5", "--tau", "-1",
        "--nu", "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&out, "nu1"), "10");
    let table = run(&["table", "--rows", "30", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&table.stdout).unwrap();
    let computed = v["rows"][0]["computed"]["exact"].as_f64().unwrap();
    assert!((number(&out, "E") - computed).abs() <= 5e-6);
}

#[test]
fn solve_dumps_wavefunction() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wf.csv");
    let mut args = with("solve", &ROW1);
    args.extend([
        "--dump-wavefunction".to_string(),
        path.display().to_string(),
    ]);
    let out = run_owned(&args);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("r,psi1,psi2"));
    assert_eq!(lines.count(), 2000);
}

#[test]
fn table_single_row_csv() {
    let out = run(&["table", "--rows", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("row,nu,v,b,q,d,j,tau,kappa,"));
    assert!(lines[1].starts_with("1,0,0.9000000000,2.000000000,2.000000000,2,1/2,-1,-1/2,"));
}

#[test]
fn table_degenerate_pair_bounds_match() {
    let out = run(&["table", "--rows", "20,22", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let a = v["rows"][0]["computed"]["lower"].as_f64().unwrap();
    let b = v["rows"][1]["computed"]["lower"].as_f64().unwrap();
    assert_eq!(a, b);
    assert!((a - 0.98916).abs() <= 2e-5);
}

#[test]
fn table_exit_status_reflects_flags() {
    let out = run(&["table", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 30);
    let all = v["all_passed"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if all { 0 } else { 1 }));
}

#[test]
fn table_parallel_output_is_identical() {
    let serial = run(&["table", "--format", "csv"]);
    let parallel = run(&["table", "--format", "csv", "--parallel", "4"]);
    assert_eq!(serial.stdout, parallel.stdout);
    assert_eq!(serial.status.code(), parallel.status.code());
}

#[test]
fn table_rejects_unknown_row() {
    let out = run(&["table", "--rows", "31"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tangent_figure_dataset() {
    let out = run(&[
        "tangent",
        "--v",
        "58",
        "--b",
        "2",
        "--q",
        "2",
        "--contacts",
        "1,2,4,8",
        "--rmin",
        "0.05",
        "--rmax",
        "20",
        "--points",
        "400",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("r,potential,tangent_t=1,tangent_t=2,tangent_t=4,tangent_t=8")
    );
    let mut count = 0;
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        for t in &cols[2..] {
            assert!(*t <= cols[1] + 1e-9);
        }
        count += 1;
    }
    assert_eq!(count, 400);
}

#[test]
fn tangent_single_point_and_empty_family() {
    let out = run(&[
        "tangent",
        "--v",
        "58",
        "--b",
        "2",
        "--q",
        "2",
        "--contacts",
        "4",
        "--rmin",
        "4",
        "--rmax",
        "4",
    ]);
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(text.lines().count(), 2);
    assert_eq!(row[1], row[2]);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = run(&[
        "tangent",
        "--v",
        "58",
        "--b",
        "2",
        "--q",
        "2",
        "--contacts=",
        "--points",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("r,potential\n"));
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn scan_reports_monotone_sequence() {
    let mut args = with("scan", &ROW1);
    args.extend(["--axis", "b", "--grid", "1,2,4", "--format", "csv"].map(String::from));
    let out = run_owned(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let e: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(e[0] < e[1] && e[1] < e[2]);
}

#[test]
fn check_suites() {
    for suite in ["scaling", "degeneracy", "derivatives"] {
        let out = run(&["check", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
        assert!(stdout(&out).starts_with(&format!("[PASS] {suite}")));
    }
    assert_eq!(
        run(&["check", "--suite", "nonsense"]).status.code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_two() {
    let mut bad_q = with("bound", &ROW1);
    bad_q[6] = "0.5".into();
    assert_eq!(run_owned(&bad_q).status.code(), Some(2));
    let mut bad_j = with("bound", &ROW1);
    bad_j[10] = "1".into();
    assert_eq!(run_owned(&bad_j).status.code(), Some(2));
    assert_eq!(run(&["bound", "--v", "0.9"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["table", "--rows", "1,2,3", "--format", "json"]);
    let b = run(&["table", "--rows", "1,2,3", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}
