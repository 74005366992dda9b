//! Boundary heat-flux controllers.
//!
//! The closed-loop laws feed back the internal energy deficit relative to
//! the setpoint, `q_c = -c (E - γ s_r)`. Along solutions the flux obeys
//! `q̇_c = -c (q_c - q_f)`, so it coincides with the open-loop signal
//! `q₀ e^{-ct} + c ∫_0^t e^{-c(t-τ)} q_f(τ) dτ`; [`flux_equivalence_residual`]
//! measures how well a discrete run preserves that identity.

use serde::{Deserialize, Serialize};

use crate::disturbance::DisturbanceSpec;
use crate::error::AnalysisError;
use crate::params::PhaseProperties;
use crate::state::{OnePhaseState, TwoPhaseState};
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ControlMode {
    ClosedLoop1P,
    ClosedLoop2P,
    OpenLoop { q0: f64 },
    DirichletValidation { delta_t: f64 },
}

impl ControlMode {
    pub fn is_closed_loop(&self) -> bool {
        matches!(self, ControlMode::ClosedLoop1P | ControlMode::ClosedLoop2P)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerConfig {
    /// Gain c, 1/s.
    pub gain: f64,
    /// Setpoint s_r, m.
    pub setpoint: f64,
    pub mode: ControlMode,
}

/// What the controller imposes at x = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryInput {
    /// Heat flux `q_c = -k T_x(0,t)`, W/m².
    Flux(f64),
    /// Temperature `T(0,t) - T_m`, K.
    Temperature(f64),
}

/// `-c ( ρC_p ∫_0^s u dx + ρΔH* (s - s_r) )`.
pub fn closed_loop_flux_1p(
    state: &OnePhaseState,
    params: &PhaseProperties,
    cfg: &ControllerConfig,
) -> f64 {
    let gamma = params.density * params.latent_heat;
    -cfg.gain
        * (params.volumetric_heat_capacity() * state.integral() + gamma * (state.s - cfg.setpoint))
}

/// Two-phase law: the solid thermal content enters with its own `k_s/α_s`.
pub fn closed_loop_flux_2p(
    state: &TwoPhaseState,
    liquid: &PhaseProperties,
    solid: &PhaseProperties,
    cfg: &ControllerConfig,
) -> f64 {
    let gamma = liquid.density * liquid.latent_heat;
    -cfg.gain
        * (liquid.volumetric_heat_capacity() * state.liquid_integral()
            + solid.volumetric_heat_capacity() * state.solid_integral()
            + gamma * (state.s - cfg.setpoint))
}

pub fn open_loop_flux(t: f64, q0: f64, c: f64, disturbance: &DisturbanceSpec) -> f64 {
    if t <= 0.0 {
        return q0;
    }
    q0 * (-c * t).exp() + disturbance.filtered(t, c)
}

/// Maximum over snapshots of `|q_c(t_i) - q_open(t_i)| / max(q₀, |q_c(t_i)|)`
/// for a closed-loop run, with `q₀` the flux recorded at t = 0.
pub fn flux_equivalence_residual(
    traj: &Trajectory,
    cfg: &ControllerConfig,
    disturbance: &DisturbanceSpec,
) -> Result<f64, AnalysisError> {
    if !traj.mode.is_closed_loop() {
        return Err(AnalysisError::Structure(
            "flux equivalence needs a closed-loop trajectory".into(),
        ));
    }
    let first = traj.first().ok_or(AnalysisError::EmptyTrajectory)?;
    let q0 = first.diagnostics.q_c;
    let mut worst = 0.0_f64;
    for snap in &traj.snapshots {
        let q = snap.diagnostics.q_c;
        if !q.is_finite() {
            return Err(AnalysisError::Structure(format!(
                "missing flux diagnostic at t = {}",
                snap.t
            )));
        }
        let reference = open_loop_flux(snap.t - first.t, q0, cfg.gain, disturbance);
        let scale = q0.abs().max(q.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max((q - reference).abs() / scale);
    }
    Ok(worst)
}
