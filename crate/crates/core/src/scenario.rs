//! Full run configuration and its JSON representation.

use serde::{Deserialize, Serialize};

use crate::control::{self, ControlMode, ControllerConfig};
use crate::disturbance::DisturbanceSpec;
use crate::error::{ConfigError, Error};
use crate::params::PhaseProperties;
use crate::profile::{InitialProfile, Side};
use crate::state::{OnePhaseState, TwoPhaseState};

pub const DEFAULT_SAFETY: f64 = 0.4;
pub const DEFAULT_SNAPSHOTS: usize = 500;
pub const MIN_GRID: usize = 8;

/// Explicit time-step policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeStepping {
    /// `Δt = safety · min(stability limits)`, re-evaluated every step.
    Adaptive { safety: f64 },
    /// Constant step; a step above the stability limit is an error.
    Fixed { dt: f64 },
}

impl Default for TimeStepping {
    fn default() -> Self {
        TimeStepping::Adaptive {
            safety: DEFAULT_SAFETY,
        }
    }
}

/// Controller selection as written in scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ControllerKind {
    #[default]
    ClosedLoop,
    /// Open-loop flux `q0 e^{-ct} + c∫e^{-c(t-τ)}q_f`; `q0` defaults to the
    /// closed-loop value at the initial state.
    OpenLoop {
        #[serde(default)]
        q0: Option<f64>,
    },
    /// Fixed boundary temperature `T(0,t) - T_m = delta_t` (one-phase only).
    DirichletValidation { delta_t: f64 },
}

/// Solid-phase section of a two-phase scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolidPhase {
    pub properties: PhaseProperties,
    /// Total length L of the material, m.
    pub length: f64,
    pub initial_profile: InitialProfile,
    /// Solid grid intervals; defaults to the liquid grid size.
    #[serde(default)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub liquid: PhaseProperties,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solid: Option<SolidPhase>,
    /// Initial interface position s₀, m.
    pub s0: f64,
    pub initial_profile: InitialProfile,
    /// Interface setpoint s_r, m.
    pub setpoint: f64,
    /// Control gain c, 1/s.
    pub gain: f64,
    #[serde(default)]
    pub disturbance: DisturbanceSpec,
    /// Liquid grid intervals N.
    pub grid: usize,
    #[serde(default)]
    pub time_step: TimeStepping,
    pub t_final: f64,
    /// Snapshot spacing; defaults to `t_final / 500`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_interval: Option<f64>,
    #[serde(default)]
    pub controller: ControllerKind,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let scenario: Scenario = serde_json::from_str(text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn is_two_phase(&self) -> bool {
        self.solid.is_some()
    }

    /// Structural validation. Physical assumptions (setpoint bound, gain
    /// bound, sign of the initial data) are left to
    /// [`check_assumptions`](crate::assumptions::check_assumptions).
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.liquid.validate()?;
        positive("s0", self.s0)?;
        positive("setpoint", self.setpoint)?;
        positive("gain", self.gain)?;
        positive("t_final", self.t_final)?;
        if self.grid < MIN_GRID {
            return Err(ConfigError::invalid("grid", ">= 8", self.grid as f64));
        }
        if let Some(dt) = self.output_interval {
            positive("output_interval", dt)?;
        }
        match self.time_step {
            TimeStepping::Adaptive { safety } => {
                if !(safety > 0.0 && safety <= 1.0) {
                    return Err(ConfigError::invalid("safety", "in (0, 1]", safety));
                }
            }
            TimeStepping::Fixed { dt } => positive("dt", dt)?,
        }
        self.disturbance.validate()?;
        self.initial_profile.validate(0.0, self.s0)?;
        match self.controller {
            ControllerKind::ClosedLoop => {}
            ControllerKind::OpenLoop { q0 } => {
                if let Some(q0) = q0 {
                    if !(q0.is_finite() && q0 >= 0.0) {
                        return Err(ConfigError::invalid("q0", "finite and >= 0", q0));
                    }
                }
            }
            ControllerKind::DirichletValidation { delta_t } => {
                if !delta_t.is_finite() {
                    return Err(ConfigError::invalid("delta_t", "finite", delta_t));
                }
                if self.is_two_phase() {
                    return Err(ConfigError::invalid(
                        "controller",
                        "closed_loop or open_loop for two-phase runs",
                        delta_t,
                    ));
                }
            }
        }
        if let Some(solid) = &self.solid {
            solid.properties.validate()?;
            positive("length", solid.length)?;
            if self.s0 >= solid.length {
                return Err(ConfigError::invalid("s0", "< length", self.s0));
            }
            if solid.grid.is_some_and(|n| n < MIN_GRID) {
                return Err(ConfigError::invalid(
                    "solid.grid",
                    ">= 8",
                    solid.grid.unwrap() as f64,
                ));
            }
            solid.initial_profile.validate(self.s0, solid.length)?;
        }
        Ok(())
    }

    pub fn solid_grid(&self) -> Option<usize> {
        self.solid.as_ref().map(|s| s.grid.unwrap_or(self.grid))
    }

    pub fn output_interval(&self) -> f64 {
        self.output_interval
            .unwrap_or(self.t_final / DEFAULT_SNAPSHOTS as f64)
    }

    /// `T₀(x) - T_m` for x in the liquid `[0, s₀]` or, for two-phase
    /// scenarios, the solid `[s₀, L]`. Exactly zero at the interface.
    pub fn initial_temperature(&self, x: f64) -> Result<f64, ConfigError> {
        let hi = self.solid.as_ref().map_or(self.s0, |s| s.length);
        if !(0.0..=hi).contains(&x) {
            return Err(ConfigError::OutOfDomain { x, lo: 0.0, hi });
        }
        if x <= self.s0 {
            Ok(self.initial_profile.eval(x, self.s0, 0.0, Side::Liquid))
        } else {
            let solid = self.solid.as_ref().expect("x > s0 implies a solid section");
            Ok(solid
                .initial_profile
                .eval(x, self.s0, solid.length, Side::Solid))
        }
    }

    pub fn initial_liquid_profile(&self) -> Vec<f64> {
        self.initial_profile
            .sample(self.grid, 0.0, self.s0, self.s0, 0.0, Side::Liquid)
    }

    pub fn initial_solid_profile(&self) -> Option<Vec<f64>> {
        let solid = self.solid.as_ref()?;
        let n = self.solid_grid()?;
        Some(solid.initial_profile.sample(
            n,
            self.s0,
            solid.length,
            self.s0,
            solid.length,
            Side::Solid,
        ))
    }

    pub fn initial_state(&self) -> OnePhaseState {
        let clamped = self.initial_profile.clamped_samples(Side::Liquid);
        if clamped > 0 {
            log::warn!("{clamped} liquid profile samples below T_m clamped to T_m");
        }
        let mut u = self.initial_liquid_profile();
        if let ControllerKind::DirichletValidation { delta_t } = self.controller {
            u[0] = delta_t;
        }
        OnePhaseState::new(0.0, self.s0, u).expect("validated scenario yields a valid state")
    }

    pub fn initial_two_phase_state(&self) -> Result<TwoPhaseState, ConfigError> {
        let solid = self.solid.as_ref().ok_or(ConfigError::MissingSolid)?;
        let clamped = solid.initial_profile.clamped_samples(Side::Solid);
        if clamped > 0 {
            log::warn!("{clamped} solid profile samples above T_m clamped to T_m");
        }
        Ok(TwoPhaseState::new(
            0.0,
            self.s0,
            self.initial_liquid_profile(),
            self.initial_solid_profile().expect("solid present"),
            solid.length,
        )
        .expect("validated scenario yields a valid state"))
    }

    /// Resolves the controller section into a [`ControllerConfig`],
    /// computing the open-loop `q0` from the initial data when it is absent.
    pub fn controller_config(&self) -> ControllerConfig {
        let mode = match self.controller {
            ControllerKind::ClosedLoop if self.is_two_phase() => ControlMode::ClosedLoop2P,
            ControllerKind::ClosedLoop => ControlMode::ClosedLoop1P,
            ControllerKind::OpenLoop { q0 } => ControlMode::OpenLoop {
                q0: q0.unwrap_or_else(|| self.initial_closed_loop_flux()),
            },
            ControllerKind::DirichletValidation { delta_t } => {
                ControlMode::DirichletValidation { delta_t }
            }
        };
        ControllerConfig {
            gain: self.gain,
            setpoint: self.setpoint,
            mode,
        }
    }

    /// Closed-loop flux evaluated on the initial data (the open-loop `q0`).
    pub fn initial_closed_loop_flux(&self) -> f64 {
        let cfg = ControllerConfig {
            gain: self.gain,
            setpoint: self.setpoint,
            mode: ControlMode::ClosedLoop1P,
        };
        match &self.solid {
            None => control::closed_loop_flux_1p(&self.initial_state(), &self.liquid, &cfg),
            Some(solid) => control::closed_loop_flux_2p(
                &self.initial_two_phase_state().expect("solid present"),
                &self.liquid,
                &solid.properties,
                &cfg,
            ),
        }
    }

    /// Round-off floor separating genuine sign violations from noise:
    /// `1e-10 · max(max|u₀|, 1 K)`.
    pub fn sign_tolerance(&self) -> f64 {
        let mut peak = self
            .initial_liquid_profile()
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        if let Some(us) = self.initial_solid_profile() {
            peak = us.iter().fold(peak, |m, v| m.max(v.abs()));
        }
        if let ControllerKind::DirichletValidation { delta_t } = self.controller {
            peak = peak.max(delta_t.abs());
        }
        1e-10 * peak.max(1.0)
    }
}

fn positive(field: &'static str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::invalid(field, "finite and > 0", v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZINC: &str = include_str!("../scenarios/zinc_one_phase.json");

    #[test]
    fn parses_shipped_example() {
        let s = Scenario::from_json(ZINC).unwrap();
        assert_eq!(s.s0, 0.1);
        assert_eq!(s.setpoint, 0.35);
        assert!(!s.is_two_phase());
        assert!((s.output_interval() - s.t_final / 500.0).abs() < 1e-12);
    }

    #[test]
    fn initial_temperature_examples() {
        let s = Scenario::from_json(ZINC).unwrap();
        assert_eq!(s.initial_temperature(0.0).unwrap(), 10.0);
        assert_eq!(s.initial_temperature(0.1).unwrap(), 0.0);
        assert!((s.initial_temperature(0.05).unwrap() - 5.0).abs() < 1e-12);
        assert!(matches!(
            s.initial_temperature(0.2),
            Err(ConfigError::OutOfDomain { .. })
        ));
        assert!(s.initial_temperature(-1e-9).is_err());
    }

    #[test]
    fn structural_checks() {
        let base = Scenario::from_json(ZINC).unwrap();
        let mut s = base.clone();
        s.grid = 7;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.gain = 0.0;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.s0 = -0.1;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.t_final = 0.0;
        assert!(s.validate().is_err());
        // the setpoint bound is an assumption, not a structural requirement
        let mut s = base;
        s.setpoint = s.s0;
        assert!(s.validate().is_ok());
    }

    #[test]
    fn rejects_unknown_keys_and_bad_json() {
        assert!(Scenario::from_json("{").is_err());
        let with_typo = ZINC.replacen("\"gain\"", "\"gian\"", 1);
        assert!(Scenario::from_json(&with_typo).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = Scenario::from_json(ZINC).unwrap();
        let back = Scenario::from_json(&s.to_json()).unwrap();
        assert_eq!(s, back);
    }
}
