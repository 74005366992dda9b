use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use stefan_iss_ffi::*;

const ZINC: &str = include_str!("../../core/scenarios/zinc_one_phase.json");

fn short_zinc() -> CString {
    let mut v: serde_json::Value = serde_json::from_str(ZINC).unwrap();
    v["grid"] = 16.into();
    v["t_final"] = 200.0.into();
    CString::new(v.to_string()).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(stefan_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn parse(json: &CString) -> (StefanStatus, *mut StefanScenario) {
    let mut sc = ptr::null_mut();
    let status = unsafe { stefan_scenario_from_json(json.as_ptr(), &mut sc) };
    (status, sc)
}

#[test]
fn run_and_inspect() {
    let (status, sc) = parse(&short_zinc());
    assert_eq!(status, StefanStatus::Ok);
    unsafe {
        let mut passed = false;
        assert_eq!(stefan_check_assumptions(sc, &mut passed), StefanStatus::Ok);
        assert!(passed);

        let mut tr = ptr::null_mut();
        assert_eq!(stefan_run(sc, &mut tr), StefanStatus::Ok);
        let mut n = 0;
        assert_eq!(stefan_trajectory_len(tr, &mut n), StefanStatus::Ok);
        assert!(n > 2);
        let mut first = StefanSnapshot::default();
        assert_eq!(
            stefan_trajectory_snapshot(tr, 0, &mut first),
            StefanStatus::Ok
        );
        assert_eq!(first.t, 0.0);
        assert_eq!(first.s, 0.1);
        assert_eq!(first.boundary_temperature, 10.0);
        assert_eq!(first.liquid_nodes, 17);
        assert!(first.q_c > 9e5);

        let mut last = StefanSnapshot::default();
        assert_eq!(
            stefan_trajectory_snapshot(tr, n - 1, &mut last),
            StefanStatus::Ok
        );
        assert_eq!(last.t, 200.0);
        assert!(last.s > first.s);
        assert_eq!(
            stefan_trajectory_snapshot(tr, n, &mut last),
            StefanStatus::OutOfRange
        );
        assert!(last_error().contains("out of range"));

        let mut ok = false;
        assert_eq!(stefan_trajectory_success(tr, &mut ok), StefanStatus::Ok);
        assert!(ok);

        let mut json = ptr::null_mut();
        assert_eq!(stefan_report_json(tr, &mut json), StefanStatus::Ok);
        let report: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(report["schema_version"], 1);
        assert_eq!(report["valid"], true);
        stefan_string_free(json);

        stefan_trajectory_free(tr);
        stefan_scenario_free(sc);
    }
}

#[test]
fn error_codes() {
    let (status, sc) = parse(&CString::new("{ not json").unwrap());
    assert_eq!(status, StefanStatus::ParseError);
    assert!(sc.is_null());
    assert!(last_error().contains("line 1"));

    let mut v: serde_json::Value = serde_json::from_str(ZINC).unwrap();
    v["grid"] = 4.into();
    let (status, _) = parse(&CString::new(v.to_string()).unwrap());
    assert_eq!(status, StefanStatus::InvalidScenario);
    assert!(last_error().contains("grid"));

    let bad_utf8 = CString::new(vec![0xff_u8, 0xfe]).unwrap();
    assert_eq!(parse(&bad_utf8).0, StefanStatus::InvalidUtf8);

    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(
            stefan_scenario_from_json(ptr::null(), &mut out),
            StefanStatus::NullPointer
        );
        assert_eq!(
            stefan_run(ptr::null(), &mut out.cast()),
            StefanStatus::NullPointer
        );
        stefan_scenario_free(ptr::null_mut());
        stefan_trajectory_free(ptr::null_mut());
        stefan_string_free(ptr::null_mut());
    }
}

#[test]
fn neumann_lambda_through_abi() {
    let mut l = 0.0;
    unsafe {
        assert_eq!(stefan_neumann_lambda(0.5, &mut l), StefanStatus::Ok);
        let lhs = l * (l * l).exp() * erf_series(l);
        assert!((lhs - 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-10);
        assert_eq!(
            stefan_neumann_lambda(-1.0, &mut l),
            StefanStatus::OutOfRange
        );
    }
}

/// erf via its Maclaurin series; adequate for |x| < 1.
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    for n in 1..60 {
        term *= -x * x / n as f64;
        sum += term / (2 * n + 1) as f64;
    }
    2.0 / std::f64::consts::PI.sqrt() * sum
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Directory holding the static library built alongside this test binary.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(crate_dir().join("include/stefan_iss.h")).unwrap();
    for name in [
        "stefan_scenario_from_json",
        "stefan_scenario_free",
        "stefan_run",
        "stefan_trajectory_len",
        "stefan_trajectory_snapshot",
        "stefan_trajectory_success",
        "stefan_report_json",
        "stefan_string_free",
        "stefan_trajectory_free",
        "stefan_check_assumptions",
        "stefan_last_error_message",
        "stefan_neumann_lambda",
        "typedef struct StefanScenario StefanScenario;",
        "STEFAN_STATUS_OK = 0",
        "STEFAN_STATUS_PANIC = 7",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let lib = artifact_dir().join("libstefan_iss_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let tmp = std::env::temp_dir().join(format!("stefan_iss_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&tmp)
        .status()
        .expect("a C compiler named cc is required for this test");
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&tmp).output().unwrap();
    let _ = std::fs::remove_file(&tmp);
    assert!(
        out.status.success(),
        "smoke program exited with {:?}",
        out.status
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut fields = stdout.split_whitespace();
    let n: usize = fields.next().unwrap().parse().unwrap();
    let s: f64 = fields.next().unwrap().parse().unwrap();
    assert!(n > 2);
    assert!(s > 0.1 && s < 0.35);
}
