//! Trajectory CSV and report JSON artifacts.
//!
//! CSV columns: `t, s, q_c, q_f, T0_minus_Tm, E, V, Psi`, plus
//! `TL_minus_Tm` (temperature at x = L) for two-phase runs. Numbers carry
//! 17 significant digits so binary64 values round-trip.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::report::RunOutcome;
use crate::trajectory::{Trajectory, Variant};

pub const CSV_COLUMNS: [&str; 8] = ["t", "s", "q_c", "q_f", "T0_minus_Tm", "E", "V", "Psi"];
pub const CSV_TWO_PHASE_COLUMN: &str = "TL_minus_Tm";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const REPORT_FILE: &str = "report.json";

pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, mut out: W) -> io::Result<()> {
    let two_phase = traj.variant == Variant::TwoPhase;
    let mut header = CSV_COLUMNS.join(",");
    if two_phase {
        header.push(',');
        header.push_str(CSV_TWO_PHASE_COLUMN);
    }
    writeln!(out, "{header}")?;
    for snap in &traj.snapshots {
        let d = &snap.diagnostics;
        let mut row = [
            snap.t,
            snap.s,
            d.q_c,
            d.q_f,
            d.boundary_temperature,
            d.energy,
            d.lyapunov,
            d.psi,
        ]
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(",");
        if two_phase {
            row.push_str(&format!(",{:.16e}", d.far_temperature.unwrap_or(f64::NAN)));
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut buf = Vec::new();
    write_trajectory_csv(traj, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut text = to_json(value);
    text.push('\n');
    fs::write(path, text)
}

/// Writes `trajectory.csv` and `report.json` into `dir`, creating it.
pub fn write_run_artifacts(dir: &Path, outcome: &RunOutcome) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let file = fs::File::create(dir.join(TRAJECTORY_FILE))?;
    let mut w = io::BufWriter::new(file);
    write_trajectory_csv(&outcome.trajectory, &mut w)?;
    w.flush()?;
    write_json(&dir.join(REPORT_FILE), &outcome.report)
}
