//! Model-validity scan over full state snapshots.

use serde::{Deserialize, Serialize};

use crate::control::ControlMode;
use crate::trajectory::{Trajectory, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    LiquidBelowMelting,
    SolidAboveMelting,
    InterfaceNonPositive,
    InterfaceAtOrAboveSetpoint,
    InterfaceAtOrBeyondLength,
    NonPositiveControlFlux,
    BoundaryNotAboveMelting,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub t: f64,
    pub kind: ViolationKind,
    /// Size of the excursion past the admissible bound.
    pub magnitude: f64,
}

/// Every violated condition at every snapshot, in time order.
pub fn validity_monitor(traj: &Trajectory) -> Vec<Violation> {
    let tol = traj.sign_tolerance;
    let mut out = Vec::new();
    for snap in &traj.snapshots {
        let mut flag = |kind, magnitude| {
            out.push(Violation {
                t: snap.t,
                kind,
                magnitude,
            })
        };
        let low = snap.liquid.iter().copied().fold(f64::INFINITY, f64::min);
        if low < -tol {
            flag(ViolationKind::LiquidBelowMelting, -low);
        }
        if let Some(solid) = &snap.solid {
            let high = solid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if high > tol {
                flag(ViolationKind::SolidAboveMelting, high);
            }
        }
        if snap.s <= 0.0 {
            flag(ViolationKind::InterfaceNonPositive, -snap.s);
        }
        match traj.variant {
            Variant::OnePhase => {
                if traj.mode == ControlMode::ClosedLoop1P && snap.s >= traj.setpoint {
                    flag(
                        ViolationKind::InterfaceAtOrAboveSetpoint,
                        snap.s - traj.setpoint,
                    );
                }
            }
            Variant::TwoPhase => {
                let l = traj.length.unwrap_or(f64::INFINITY);
                if snap.s >= l {
                    flag(ViolationKind::InterfaceAtOrBeyondLength, snap.s - l);
                }
            }
        }
        let d = &snap.diagnostics;
        if d.q_c.is_nan() || d.q_c <= 0.0 {
            flag(ViolationKind::NonPositiveControlFlux, -d.q_c);
        }
        if d.boundary_temperature.is_nan() || d.boundary_temperature <= 0.0 {
            flag(
                ViolationKind::BoundaryNotAboveMelting,
                -d.boundary_temperature,
            );
        }
    }
    out
}
