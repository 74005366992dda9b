//! Explicit finite-difference integration on boundary-immobilized grids.
//!
//! Both phases reduce to `v_t = D v_ηη + (a₀ + a₁η) v_η` on a unit grid.
//! Central differences are used unless the cell Péclet number reaches 2,
//! in which case the advective term switches to first-order upwinding for
//! that step.

pub mod one_phase;
pub mod two_phase;

use serde::{Deserialize, Serialize};

use crate::error::StepError;
use crate::scenario::TimeStepping;

pub use one_phase::{interface_gradient, run, stability_limit, step, step_with_boundary};
pub use two_phase::{run2, solid_stability_limit, step2};

/// Relative slack on the stability limit for user-supplied fixed steps.
const LIMIT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    /// Interface velocity used for the step, m/s.
    pub s_dot: f64,
    /// Liquid-side interface flux `-k T_x(s,t)`, W/m².
    pub interface_flux: f64,
    /// `T(0,t) - T_m` after the step, K.
    pub boundary_temperature: f64,
    /// Δt over the explicit stability limit.
    pub cfl: f64,
    /// Solid-side interface flux `k_s T_{s,x}(s,t)` (two-phase only), W/m².
    pub solid_interface_flux: Option<f64>,
    /// Whether the upwind fallback was active.
    pub upwind: bool,
}

/// Boundary treatment at one end of the unit grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Edge {
    Value(f64),
    /// Prescribed `v_η`, imposed through a ghost node.
    Slope(f64),
}

/// One explicit Euler step of `v_t = d v_ηη + (a0 + a1 η) v_η`, written
/// into `out`. Returns whether upwinding was used.
#[allow(clippy::too_many_arguments)]
pub(crate) fn diffuse_advect(
    v: &[f64],
    out: &mut [f64],
    d: f64,
    a0: f64,
    a1: f64,
    dt: f64,
    left: Edge,
    right: Edge,
) -> bool {
    let n = v.len() - 1;
    let h = 1.0 / n as f64;
    let amax = a0.abs().max((a0 + a1).abs());
    let upwind = amax * h >= 2.0 * d;
    let diff = dt * d / (h * h);

    let update = |i: usize, vm: f64, vi: f64, vp: f64| -> f64 {
        let a = a0 + a1 * (i as f64 * h);
        let adv = if !upwind {
            a * (vp - vm) / (2.0 * h)
        } else if a > 0.0 {
            a * (vp - vi) / h
        } else {
            a * (vi - vm) / h
        };
        vi + diff * (vp - 2.0 * vi + vm) + dt * adv
    };

    for i in 1..n {
        out[i] = update(i, v[i - 1], v[i], v[i + 1]);
    }
    out[0] = match left {
        Edge::Value(x) => x,
        Edge::Slope(g) => update(0, v[1] - 2.0 * h * g, v[0], v[1]),
    };
    out[n] = match right {
        Edge::Value(x) => x,
        Edge::Slope(g) => update(n, v[n - 1], v[n], v[n - 1] + 2.0 * h * g),
    };
    upwind
}

/// Step size for the next update and whether it lands on `target`.
pub(crate) fn next_step(
    policy: TimeStepping,
    limit: f64,
    t: f64,
    target: f64,
) -> Result<(f64, bool), StepError> {
    let dt = match policy {
        TimeStepping::Adaptive { safety } => safety * limit,
        TimeStepping::Fixed { dt } => {
            if dt > limit * (1.0 + LIMIT_SLACK) {
                return Err(StepError::StabilityLimit { t, dt, limit });
            }
            dt
        }
    };
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(StepError::InvalidTimeStep(dt));
    }
    if t + dt >= target {
        Ok((target - t, true))
    } else {
        Ok((dt, false))
    }
}

pub(crate) fn check_dt(dt: f64, limit: f64, t: f64) -> Result<(), StepError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(StepError::InvalidTimeStep(dt));
    }
    if dt > limit * (1.0 + LIMIT_SLACK) {
        return Err(StepError::StabilityLimit { t, dt, limit });
    }
    Ok(())
}

/// Output times `k·Δt_out` clipped to the horizon.
pub(crate) fn output_time(k: usize, interval: f64, t_final: f64) -> f64 {
    (k as f64 * interval).min(t_final)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_exact_on_linear_steady_state() {
        let n = 20;
        let v: Vec<f64> = (0..=n).map(|i| 3.0 * (1.0 - i as f64 / n as f64)).collect();
        let mut out = vec![0.0; n + 1];
        diffuse_advect(
            &v,
            &mut out,
            1.0,
            0.0,
            0.0,
            1e-4,
            Edge::Slope(-3.0),
            Edge::Value(0.0),
        );
        for (a, b) in v.iter().zip(&out) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn upwind_switch() {
        let v = vec![1.0, 0.5, 0.25, 0.0];
        let mut out = vec![0.0; 4];
        assert!(!diffuse_advect(
            &v,
            &mut out,
            1.0,
            0.0,
            1.0,
            1e-3,
            Edge::Value(1.0),
            Edge::Value(0.0)
        ));
        assert!(diffuse_advect(
            &v,
            &mut out,
            1e-3,
            0.0,
            1.0,
            1e-3,
            Edge::Value(1.0),
            Edge::Value(0.0)
        ));
    }

    #[test]
    fn landing_on_output_time() {
        let p = TimeStepping::Adaptive { safety: 0.5 };
        assert_eq!(next_step(p, 1.0, 0.0, 10.0).unwrap(), (0.5, false));
        assert_eq!(next_step(p, 1.0, 9.75, 10.0).unwrap(), (0.25, true));
        let f = TimeStepping::Fixed { dt: 2.0 };
        assert!(matches!(
            next_step(f, 1.0, 0.0, 10.0),
            Err(StepError::StabilityLimit { .. })
        ));
    }
}
