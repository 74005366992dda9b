//! Time series of snapshots with per-snapshot diagnostics.

use serde::{Deserialize, Serialize};

use crate::control::ControlMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    OnePhase,
    TwoPhase,
}

/// Quick per-snapshot model-validity checks; see
/// [`validity_monitor`](crate::analysis::validity::validity_monitor) for the
/// full scan with magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityFlags {
    /// Liquid at or above T_m (within tolerance).
    pub liquid_sign: bool,
    /// Solid at or below T_m (within tolerance); always true for one-phase.
    pub solid_sign: bool,
    /// 0 < s < s_r (one-phase closed loop) or 0 < s < L (two-phase).
    pub interface_inside: bool,
    pub flux_positive: bool,
    /// T(0,t) > T_m.
    pub boundary_above_melting: bool,
}

impl ValidityFlags {
    pub fn all(&self) -> bool {
        self.liquid_sign
            && self.solid_sign
            && self.interface_inside
            && self.flux_positive
            && self.boundary_above_melting
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Boundary heat input at x = 0, W/m².
    pub q_c: f64,
    /// Heat loss, W/m².
    pub q_f: f64,
    /// Internal energy, J/m².
    pub energy: f64,
    /// Lyapunov functional of the backstepping target system.
    pub lyapunov: f64,
    /// L2 reference-error norm Ψ.
    pub psi: f64,
    /// T(0,t) - T_m, K.
    pub boundary_temperature: f64,
    /// T(L,t) - T_m for two-phase runs, K.
    pub far_temperature: Option<f64>,
    /// Interface velocity, m/s.
    pub s_dot: f64,
    /// `∫_0^t (q_c - q_f) dt` accumulated at solver resolution, J/m².
    pub net_heat: Option<f64>,
    pub flags: ValidityFlags,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub s: f64,
    pub liquid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solid: Option<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    PhaseDisappeared { t: f64, s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub variant: Variant,
    pub mode: ControlMode,
    pub gain: f64,
    pub setpoint: f64,
    /// Total length L (two-phase only).
    pub length: Option<f64>,
    pub sign_tolerance: f64,
    pub snapshots: Vec<Snapshot>,
    pub termination: Termination,
    /// Number of solver steps taken.
    pub steps: u64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn first(&self) -> Option<&Snapshot> {
        self.snapshots.first()
    }

    pub fn last(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn interface(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.s).collect()
    }

    pub fn completed(&self) -> bool {
        self.termination == Termination::Completed
    }
}
