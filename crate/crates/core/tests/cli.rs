use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_stefan-iss");
const ZINC: &str = include_str!("../scenarios/zinc_one_phase.json");

fn cli(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn scenario_file(dir: &Path, edit: impl FnOnce(&mut Value)) -> String {
    let mut v: Value = serde_json::from_str(ZINC).unwrap();
    edit(&mut v);
    let path = dir.join("scenario.json");
    fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn run_writes_trajectory_and_report() {
    let tmp = TempDir::new().unwrap();
    let out = cli(
        &["run", "--tfinal", "200", "--grid", "40", "--out", "r"],
        tmp.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(tmp.path().join("r/trajectory.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, "t,s,q_c,q_f,T0_minus_Tm,E,V,Psi");
    assert!(csv.lines().count() > 2);
    let report = read_json(&tmp.path().join("r/report.json"));
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["valid"], true);
    assert_eq!(report["termination"]["kind"], "completed");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    for dir in ["a", "b"] {
        let out = cli(
            &[
                "run", "--tfinal", "100", "--grid", "30", "--qf-bar", "5e3", "--out", dir,
            ],
            tmp.path(),
        );
        assert_eq!(code(&out), 0);
    }
    let a = fs::read(tmp.path().join("a/trajectory.csv")).unwrap();
    let b = fs::read(tmp.path().join("b/trajectory.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn setpoint_at_initial_interface_fails_the_gate() {
    let tmp = TempDir::new().unwrap();
    let out = cli(
        &[
            "run",
            "--tfinal",
            "100",
            "--grid",
            "20",
            "--setpoint",
            "0.1",
            "--out",
            "r",
        ],
        tmp.path(),
    );
    assert_eq!(code(&out), 1);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("assumption setpoint failed"), "{stdout}");
}

#[test]
fn malformed_scenario_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("bad.json");
    fs::write(&path, "{ \"liquid\": ").unwrap();
    let out = cli(&["run", path.to_str().unwrap()], tmp.path());
    assert_eq!(code(&out), 2);
    let unknown = scenario_file(tmp.path(), |v| v["grdi"] = Value::from(10));
    assert_eq!(code(&cli(&["check", &unknown], tmp.path())), 2);
    let negative = scenario_file(tmp.path(), |v| v["gain"] = Value::from(-1.0));
    assert_eq!(code(&cli(&["run", &negative], tmp.path())), 2);
    assert_eq!(code(&cli(&["frobnicate"], tmp.path())), 2);
}

#[test]
fn unstable_fixed_step_is_a_solver_failure() {
    let tmp = TempDir::new().unwrap();
    let path = scenario_file(tmp.path(), |v| {
        v["time_step"] = serde_json::json!({ "kind": "fixed", "dt": 10.0 });
        v["t_final"] = Value::from(100.0);
    });
    let out = cli(&["run", &path, "--out", "r"], tmp.path());
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("stability limit"));
}

#[test]
fn sweep_reports_ordering() {
    let tmp = TempDir::new().unwrap();
    let args = ["sweep", "--tfinal", "200", "--grid", "20", "--qf-bar"];
    let single = cli(&[&args[..], &["1e3", "--out", "one"]].concat(), tmp.path());
    assert_eq!(code(&single), 0);
    let summary = read_json(&tmp.path().join("one/sweep.json"));
    assert_eq!(summary["entries"].as_array().unwrap().len(), 1);
    assert_eq!(summary["offsets_strictly_increasing"], true);
    assert!(tmp.path().join("one/run_0_qf_1000/trajectory.csv").exists());

    let repeated = cli(
        &[&args[..], &["1e3,1e3", "--out", "two"]].concat(),
        tmp.path(),
    );
    assert_eq!(code(&repeated), 1);
    let summary = read_json(&tmp.path().join("two/sweep.json"));
    assert_eq!(summary["offsets_strictly_increasing"], false);

    let rising = cli(
        &[&args[..], &["1e3,1e4", "--out", "three"]].concat(),
        tmp.path(),
    );
    assert_eq!(code(&rising), 0);
}

#[test]
fn sweep_output_does_not_depend_on_thread_count() {
    let tmp = TempDir::new().unwrap();
    for (threads, dir) in [("1", "one"), ("4", "four")] {
        let out = Command::new(BIN)
            .args([
                "sweep",
                "--tfinal",
                "100",
                "--grid",
                "20",
                "--qf-bar",
                "1e3,5e3,1e4",
                "--out",
                dir,
            ])
            .env("STEFAN_ISS_THREADS", threads)
            .current_dir(tmp.path())
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
    }
    for i in ["run_0_qf_1000", "run_1_qf_5000", "run_2_qf_10000"] {
        let a = fs::read(tmp.path().join("one").join(i).join("trajectory.csv")).unwrap();
        let b = fs::read(tmp.path().join("four").join(i).join("trajectory.csv")).unwrap();
        assert_eq!(a, b, "{i}");
    }
    let bad = Command::new(BIN)
        .args(["sweep", "--qf-bar", "1e3"])
        .env("STEFAN_ISS_THREADS", "zero")
        .current_dir(tmp.path())
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn converge_needs_three_grids() {
    let tmp = TempDir::new().unwrap();
    let out = cli(&["converge", "--grids", "20,40"], tmp.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn converge_on_a_steady_state_is_exact() {
    let tmp = TempDir::new().unwrap();
    let path = scenario_file(tmp.path(), |v| {
        v["initial_profile"] = serde_json::json!({ "kind": "linear_ramp", "boundary_value": 0.0 });
        v["disturbance"] = serde_json::json!({ "kind": "zero" });
        v["setpoint"] = Value::from(0.1);
        v["t_final"] = Value::from(50.0);
    });
    let out = cli(
        &["converge", &path, "--grids", "10,20,40", "--out", "c"],
        tmp.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary = read_json(&tmp.path().join("c/converge.json"));
    assert_eq!(summary["exact"], true);
    assert!(summary["observed_order"].is_null());
    assert!(String::from_utf8_lossy(&out.stdout).contains("exact"));
}

#[test]
fn converge_reports_an_order() {
    let tmp = TempDir::new().unwrap();
    let out = cli(
        &[
            "converge", "--tfinal", "500", "--grids", "16,32,64", "--out", "c",
        ],
        tmp.path(),
    );
    assert_eq!(code(&out), 0);
    let summary = read_json(&tmp.path().join("c/converge.json"));
    let p = summary["observed_order"].as_f64().unwrap();
    assert!(p > 1.0, "observed order {p}");
}

#[test]
fn oracle_writes_errors() {
    let tmp = TempDir::new().unwrap();
    let out = cli(&["oracle", "--grids", "20,40", "--out", "o"], tmp.path());
    assert_eq!(code(&out), 0);
    let results = read_json(&tmp.path().join("o/oracle.json"));
    let errs: Vec<f64> = results
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["max_rel_error"].as_f64().unwrap())
        .collect();
    assert!(errs[1] < errs[0] && errs[0] < 1e-2, "{errs:?}");
}

#[test]
fn check_prints_the_gate() {
    let tmp = TempDir::new().unwrap();
    let out = cli(&["check"], tmp.path());
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let ids: Vec<&str> = report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["heat_loss", "gain", "initial_data", "setpoint"]);
    let two = cli(&["check", "--two-phase"], tmp.path());
    assert_eq!(code(&two), 0);
    let low = cli(&["check", "--setpoint", "0.1"], tmp.path());
    assert_eq!(code(&low), 1);
}
