//! Discrete states on boundary-immobilized grids.

use serde::{Deserialize, Serialize};

use crate::error::StepError;
use crate::numerics::{trapezoid, trapezoid_sq};

/// One-phase state: `u[i] = T(x_i) - T_m` at `x_i = s·i/N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnePhaseState {
    pub t: f64,
    pub s: f64,
    pub u: Vec<f64>,
}

impl OnePhaseState {
    /// Builds a state, pinning the interface node to zero.
    pub fn new(t: f64, s: f64, mut u: Vec<f64>) -> Result<Self, StepError> {
        if u.len() < 4 {
            return Err(StepError::InvalidState(format!(
                "need at least 4 grid nodes, got {}",
                u.len()
            )));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(StepError::InvalidState(format!(
                "interface position {s} must be > 0"
            )));
        }
        *u.last_mut().unwrap() = 0.0;
        Ok(OnePhaseState { t, s, u })
    }

    /// Number of grid intervals N.
    pub fn intervals(&self) -> usize {
        self.u.len() - 1
    }

    /// Physical node spacing `s/N`.
    pub fn dx(&self) -> f64 {
        self.s / self.intervals() as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.s * i as f64 / self.intervals() as f64
    }

    /// `∫_0^s u dx` by the trapezoid rule.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.u, self.dx())
    }

    /// `∫_0^s u² dx` by the trapezoid rule.
    pub fn integral_sq(&self) -> f64 {
        trapezoid_sq(&self.u, self.dx())
    }
}

/// Two-phase state. The liquid lives on `ξ = x/s`, the solid on
/// `η = (x - s)/(L - s)`; `solid[0]` is the interface node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPhaseState {
    pub t: f64,
    pub s: f64,
    pub liquid: Vec<f64>,
    pub solid: Vec<f64>,
    pub length: f64,
}

impl TwoPhaseState {
    pub fn new(
        t: f64,
        s: f64,
        mut liquid: Vec<f64>,
        mut solid: Vec<f64>,
        length: f64,
    ) -> Result<Self, StepError> {
        if liquid.len() < 4 || solid.len() < 4 {
            return Err(StepError::InvalidState(
                "need at least 4 nodes per phase".into(),
            ));
        }
        if !(s > 0.0 && s < length && length.is_finite()) {
            return Err(StepError::InvalidState(format!(
                "interface {s} must lie in (0, {length})"
            )));
        }
        *liquid.last_mut().unwrap() = 0.0;
        solid[0] = 0.0;
        Ok(TwoPhaseState {
            t,
            s,
            liquid,
            solid,
            length,
        })
    }

    pub fn liquid_dx(&self) -> f64 {
        self.s / (self.liquid.len() - 1) as f64
    }

    pub fn solid_dx(&self) -> f64 {
        (self.length - self.s) / (self.solid.len() - 1) as f64
    }

    /// The liquid slice viewed as a one-phase state.
    pub fn liquid_state(&self) -> OnePhaseState {
        OnePhaseState {
            t: self.t,
            s: self.s,
            u: self.liquid.clone(),
        }
    }

    pub fn liquid_integral(&self) -> f64 {
        trapezoid(&self.liquid, self.liquid_dx())
    }

    pub fn solid_integral(&self) -> f64 {
        trapezoid(&self.solid, self.solid_dx())
    }

    pub fn liquid_integral_sq(&self) -> f64 {
        trapezoid_sq(&self.liquid, self.liquid_dx())
    }

    pub fn solid_integral_sq(&self) -> f64 {
        trapezoid_sq(&self.solid, self.solid_dx())
    }
}
