//! One-phase solver on `ξ = x/s`:
//! `u_t = (α/s²) u_ξξ + (ξṡ/s) u_ξ`, `u_ξ(0) = -s q_c/k`, `u(1) = 0`,
//! `γṡ = -k u_x(s) - q_f`.

use crate::analysis::{compute_epsilon, internal_energy_1p, lyapunov_v, psi_norm_1p, KernelParams};
use crate::control::{
    closed_loop_flux_1p, open_loop_flux, BoundaryInput, ControlMode, ControllerConfig,
};
use crate::disturbance::DisturbanceSpec;
use crate::error::StepError;
use crate::numerics::{slope_at_end, slope_at_start};
use crate::params::PhaseProperties;
use crate::scenario::Scenario;
use crate::state::OnePhaseState;
use crate::trajectory::{Diagnostics, Snapshot, Termination, Trajectory, ValidityFlags, Variant};

use super::{check_dt, diffuse_advect, next_step, output_time, Edge, StepDiagnostics};

/// Interface below `s₀ · DISAPPEAR` ends a run early.
pub(crate) const DISAPPEAR: f64 = 1e-3;

/// Largest stable explicit step `s² / (2αN²)`.
pub fn stability_limit(s: f64, alpha: f64, intervals: usize) -> f64 {
    let n = intervals as f64;
    s * s / (2.0 * alpha * n * n)
}

/// `-k u_x(s)` from the three-point one-sided stencil, W/m².
pub fn interface_gradient(state: &OnePhaseState, params: &PhaseProperties) -> f64 {
    let h = 1.0 / state.intervals() as f64;
    -params.conductivity * slope_at_end(&state.u, h) / state.s
}

/// `ṡ = (-k u_x(s) - q_f) / γ`.
pub fn interface_velocity(state: &OnePhaseState, params: &PhaseProperties, q_f: f64) -> f64 {
    (interface_gradient(state, params) - q_f) / (params.density * params.latent_heat)
}

/// `-k u_x(0)`, the heat flux entering at the wall.
pub fn wall_flux(state: &OnePhaseState, params: &PhaseProperties) -> f64 {
    let h = 1.0 / state.intervals() as f64;
    -params.conductivity * slope_at_start(&state.u, h) / state.s
}

/// Advances one explicit step under boundary flux `q_c`.
pub fn step(
    state: &OnePhaseState,
    q_c: f64,
    q_f: f64,
    dt: f64,
    params: &PhaseProperties,
) -> Result<(OnePhaseState, StepDiagnostics), StepError> {
    step_with_boundary(state, BoundaryInput::Flux(q_c), q_f, dt, params)
}

pub fn step_with_boundary(
    state: &OnePhaseState,
    input: BoundaryInput,
    q_f: f64,
    dt: f64,
    params: &PhaseProperties,
) -> Result<(OnePhaseState, StepDiagnostics), StepError> {
    let mut next = state.clone();
    let mut scratch = vec![0.0; state.u.len()];
    let diag = advance(&mut next, &mut scratch, input, q_f, dt, params)?;
    Ok((next, diag))
}

/// In-place step; `scratch` must match the grid size.
pub(crate) fn advance(
    st: &mut OnePhaseState,
    scratch: &mut Vec<f64>,
    input: BoundaryInput,
    q_f: f64,
    dt: f64,
    params: &PhaseProperties,
) -> Result<StepDiagnostics, StepError> {
    let alpha = params.conductivity / params.volumetric_heat_capacity();
    let limit = stability_limit(st.s, alpha, st.intervals());
    check_dt(dt, limit, st.t)?;
    let flux = interface_gradient(st, params);
    let s_dot = (flux - q_f) / (params.density * params.latent_heat);
    let s = st.s;
    let left = match input {
        BoundaryInput::Flux(q) => Edge::Slope(-s * q / params.conductivity),
        BoundaryInput::Temperature(v) => Edge::Value(v),
    };
    let upwind = diffuse_advect(
        &st.u,
        scratch,
        alpha / (s * s),
        0.0,
        s_dot / s,
        dt,
        left,
        Edge::Value(0.0),
    );
    std::mem::swap(&mut st.u, scratch);
    let t = st.t + dt;
    let s_new = s + dt * s_dot;
    if !(s_new.is_finite() && st.u.iter().sum::<f64>().is_finite()) {
        return Err(StepError::NumericalBlowup { t });
    }
    if s_new <= 0.0 {
        return Err(StepError::PhaseDisappeared { t, s: s_new });
    }
    st.s = s_new;
    st.t = t;
    Ok(StepDiagnostics {
        s_dot,
        interface_flux: flux,
        boundary_temperature: st.u[0],
        cfl: dt / limit,
        solid_interface_flux: None,
        upwind,
    })
}

/// Per-snapshot evaluation context.
struct Probe<'a> {
    params: &'a PhaseProperties,
    cfg: &'a ControllerConfig,
    disturbance: &'a DisturbanceSpec,
    kp: KernelParams,
    tol: f64,
}

impl Probe<'_> {
    /// Boundary input applied from `st` and the wall flux it corresponds to.
    fn input(&self, st: &OnePhaseState) -> (BoundaryInput, f64) {
        match self.cfg.mode {
            ControlMode::ClosedLoop1P | ControlMode::ClosedLoop2P => {
                let q = closed_loop_flux_1p(st, self.params, self.cfg);
                (BoundaryInput::Flux(q), q)
            }
            ControlMode::OpenLoop { q0 } => {
                let q = open_loop_flux(st.t, q0, self.cfg.gain, self.disturbance);
                (BoundaryInput::Flux(q), q)
            }
            ControlMode::DirichletValidation { delta_t } => (
                BoundaryInput::Temperature(delta_t),
                wall_flux(st, self.params),
            ),
        }
    }

    fn snapshot(&self, st: &OnePhaseState, q_c: f64, net_heat: f64) -> Snapshot {
        let q_f = self.disturbance.eval(st.t);
        let setpoint = self.cfg.setpoint;
        let low = st.u.iter().copied().fold(f64::INFINITY, f64::min);
        let inside = if self.cfg.mode == ControlMode::ClosedLoop1P {
            st.s > 0.0 && st.s < setpoint
        } else {
            st.s > 0.0
        };
        Snapshot {
            t: st.t,
            s: st.s,
            liquid: st.u.clone(),
            solid: None,
            diagnostics: Diagnostics {
                q_c,
                q_f,
                energy: internal_energy_1p(st, self.params),
                lyapunov: lyapunov_v(st, st.s - setpoint, &self.kp),
                psi: psi_norm_1p(st, setpoint),
                boundary_temperature: st.u[0],
                far_temperature: None,
                s_dot: interface_velocity(st, self.params, q_f),
                net_heat: Some(net_heat),
                flags: ValidityFlags {
                    liquid_sign: low >= -self.tol,
                    solid_sign: true,
                    interface_inside: inside,
                    flux_positive: q_c > 0.0,
                    boundary_above_melting: st.u[0] > 0.0,
                },
            },
        }
    }
}

/// Integrates a one-phase scenario to `t_final`, recording snapshots every
/// output interval. The run stops early, with the reason recorded, once the
/// interface falls below `s₀ · 10⁻³`.
pub fn run(
    scenario: &Scenario,
    cfg: &ControllerConfig,
    disturbance: &DisturbanceSpec,
) -> Result<Trajectory, StepError> {
    if cfg.mode == ControlMode::ClosedLoop2P {
        return Err(StepError::InvalidState(
            "two-phase controller on a one-phase scenario".into(),
        ));
    }
    let params = &scenario.liquid;
    let coeffs = params.coefficients();
    let kp = KernelParams::new(
        compute_epsilon(&coeffs, cfg.gain, cfg.setpoint),
        cfg.gain,
        coeffs.alpha,
        coeffs.beta,
    )
    .map_err(|e| StepError::InvalidState(e.to_string()))?;
    let probe = Probe {
        params,
        cfg,
        disturbance,
        kp,
        tol: scenario.sign_tolerance(),
    };

    let mut st = scenario.initial_state();
    if let ControlMode::DirichletValidation { delta_t } = cfg.mode {
        st.u[0] = delta_t;
    }
    let mut scratch = vec![0.0; st.u.len()];
    let interval = scenario.output_interval();
    let t_final = scenario.t_final;
    let floor = scenario.s0 * DISAPPEAR;

    let (mut input, mut q_c) = probe.input(&st);
    let mut q_f = disturbance.eval(st.t);
    let mut net_heat = 0.0;
    let mut snapshots = vec![probe.snapshot(&st, q_c, net_heat)];
    let mut termination = Termination::Completed;
    let mut steps = 0_u64;
    let mut k = 1;
    while st.t < t_final {
        let target = output_time(k, interval, t_final);
        let limit = stability_limit(st.s, coeffs.alpha, st.intervals());
        let (dt, lands) = next_step(scenario.time_step, limit, st.t, target)?;
        advance(&mut st, &mut scratch, input, q_f, dt, params)?;
        steps += 1;
        if lands {
            st.t = target;
            k += 1;
        }
        let (next_input, next_q_c) = probe.input(&st);
        let next_q_f = disturbance.eval(st.t);
        net_heat += 0.5 * dt * ((q_c - q_f) + (next_q_c - next_q_f));
        (input, q_c, q_f) = (next_input, next_q_c, next_q_f);
        if st.s < floor {
            snapshots.push(probe.snapshot(&st, q_c, net_heat));
            termination = Termination::PhaseDisappeared { t: st.t, s: st.s };
            log::warn!("interface fell below {floor} m at t = {} s", st.t);
            break;
        }
        if lands {
            snapshots.push(probe.snapshot(&st, q_c, net_heat));
        }
    }

    Ok(Trajectory {
        variant: Variant::OnePhase,
        mode: cfg.mode,
        gain: cfg.gain,
        setpoint: cfg.setpoint,
        length: None,
        sign_tolerance: probe.tol,
        snapshots,
        termination,
        steps,
    })
}
