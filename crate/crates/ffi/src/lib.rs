//! C ABI for the `stefan-iss` simulator.
//!
//! Scenarios and trajectories are opaque handles created and destroyed by
//! this library. Every fallible call returns a [`StefanStatus`]; on failure
//! [`stefan_last_error_message`] describes the most recent error on the
//! calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stefan_iss::report::{self, RunOutcome};
use stefan_iss::{check_assumptions, Error, Scenario};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StefanStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidScenario = 4,
    SolverFailure = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// Parsed, validated scenario.
pub struct StefanScenario {
    inner: Scenario,
}

/// Completed run together with its analysis report.
pub struct StefanTrajectory {
    outcome: RunOutcome,
}

/// Scalar diagnostics of one snapshot.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StefanSnapshot {
    pub t: f64,
    pub s: f64,
    pub q_c: f64,
    pub q_f: f64,
    /// T(0,t) - T_m, K.
    pub boundary_temperature: f64,
    pub energy: f64,
    pub lyapunov: f64,
    pub psi: f64,
    /// Number of liquid grid nodes.
    pub liquid_nodes: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

fn fail(status: StefanStatus, msg: impl Into<String>) -> StefanStatus {
    set_error(msg);
    status
}

fn status_of(err: &Error) -> StefanStatus {
    match err {
        Error::Parse(_) => StefanStatus::ParseError,
        Error::Config(_) | Error::Io(_) => StefanStatus::InvalidScenario,
        Error::Step(_) | Error::Analysis(_) => StefanStatus::SolverFailure,
    }
}

fn guard(f: impl FnOnce() -> StefanStatus) -> StefanStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(StefanStatus::Panic, "internal panic"),
    }
}

/// Message for the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn stefan_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and validates a scenario from a NUL-terminated JSON string.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_scenario_from_json(
    json: *const c_char,
    out: *mut *mut StefanScenario,
) -> StefanStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(StefanStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(StefanStatus::InvalidUtf8, "scenario text is not UTF-8");
        };
        match Scenario::from_json(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(StefanScenario { inner }));
                StefanStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `scenario` must come from [`stefan_scenario_from_json`] and not be used
/// afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn stefan_scenario_free(scenario: *mut StefanScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Evaluates the assumption gate; `all_passed` receives the verdict.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stefan_check_assumptions(
    scenario: *const StefanScenario,
    all_passed: *mut bool,
) -> StefanStatus {
    guard(|| {
        if scenario.is_null() || all_passed.is_null() {
            return fail(StefanStatus::NullPointer, "null argument");
        }
        *all_passed = check_assumptions(&(*scenario).inner).all_passed();
        StefanStatus::Ok
    })
}

/// Simulates and analyzes the scenario.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_run(
    scenario: *const StefanScenario,
    out: *mut *mut StefanTrajectory,
) -> StefanStatus {
    guard(|| {
        if scenario.is_null() || out.is_null() {
            return fail(StefanStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        match report::execute(&(*scenario).inner) {
            Ok(outcome) => {
                *out = Box::into_raw(Box::new(StefanTrajectory { outcome }));
                StefanStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `traj` must be a live handle and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_trajectory_len(
    traj: *const StefanTrajectory,
    len: *mut usize,
) -> StefanStatus {
    guard(|| {
        if traj.is_null() || len.is_null() {
            return fail(StefanStatus::NullPointer, "null argument");
        }
        *len = (*traj).outcome.trajectory.len();
        StefanStatus::Ok
    })
}

/// # Safety
/// `traj` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_trajectory_snapshot(
    traj: *const StefanTrajectory,
    index: usize,
    out: *mut StefanSnapshot,
) -> StefanStatus {
    guard(|| {
        if traj.is_null() || out.is_null() {
            return fail(StefanStatus::NullPointer, "null argument");
        }
        let snaps = &(*traj).outcome.trajectory.snapshots;
        let Some(snap) = snaps.get(index) else {
            return fail(
                StefanStatus::OutOfRange,
                format!("snapshot {index} out of range (len {})", snaps.len()),
            );
        };
        let d = &snap.diagnostics;
        *out = StefanSnapshot {
            t: snap.t,
            s: snap.s,
            q_c: d.q_c,
            q_f: d.q_f,
            boundary_temperature: d.boundary_temperature,
            energy: d.energy,
            lyapunov: d.lyapunov,
            psi: d.psi,
            liquid_nodes: snap.liquid.len(),
        };
        StefanStatus::Ok
    })
}

/// Whether the run is valid, passed its assumptions and reached `t_final`.
///
/// # Safety
/// `traj` must be a live handle and `success` writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_trajectory_success(
    traj: *const StefanTrajectory,
    success: *mut bool,
) -> StefanStatus {
    guard(|| {
        if traj.is_null() || success.is_null() {
            return fail(StefanStatus::NullPointer, "null argument");
        }
        *success = (*traj).outcome.report.success();
        StefanStatus::Ok
    })
}

/// Run report as JSON; release it with [`stefan_string_free`].
///
/// # Safety
/// `traj` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_report_json(
    traj: *const StefanTrajectory,
    out: *mut *mut c_char,
) -> StefanStatus {
    guard(|| {
        if traj.is_null() || out.is_null() {
            return fail(StefanStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let text = match serde_json::to_string(&(*traj).outcome.report) {
            Ok(t) => t,
            Err(e) => return fail(StefanStatus::SolverFailure, e.to_string()),
        };
        match CString::new(text) {
            Ok(c) => {
                *out = c.into_raw();
                StefanStatus::Ok
            }
            Err(e) => fail(StefanStatus::SolverFailure, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn stefan_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `traj` must come from [`stefan_run`] and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn stefan_trajectory_free(traj: *mut StefanTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Similarity constant λ of the Neumann solution for Stefan number `stefan`.
///
/// # Safety
/// `lambda` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_neumann_lambda(stefan: f64, lambda: *mut f64) -> StefanStatus {
    guard(|| {
        if lambda.is_null() {
            return fail(StefanStatus::NullPointer, "null argument");
        }
        match stefan_iss::oracle::neumann_lambda(stefan) {
            Ok(l) => {
                *lambda = l;
                StefanStatus::Ok
            }
            Err(e) => fail(StefanStatus::OutOfRange, e.to_string()),
        }
    })
}
