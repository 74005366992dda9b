//! Two-phase solver. The liquid lives on `ξ = x/s`, the solid on
//! `η = (x - s)/(L - s)`:
//! `U_t = α_s/(L-s)² U_ηη + (1-η)ṡ/(L-s) U_η`, `U(0) = 0`,
//! `U_η(1) = -(L - s) q_f / k_s`, and `γṡ = -k_l u_x(s) + k_s U_x(s)`.

use crate::analysis::{
    compute_epsilon, internal_energy_2p, lyapunov_v_2p, psi_norm_2p, KernelParams,
};
use crate::control::{closed_loop_flux_2p, open_loop_flux, ControlMode, ControllerConfig};
use crate::disturbance::DisturbanceSpec;
use crate::error::{ConfigError, StepError};
use crate::numerics::{slope_at_end, slope_at_start};
use crate::params::PhaseProperties;
use crate::scenario::Scenario;
use crate::state::TwoPhaseState;
use crate::trajectory::{Diagnostics, Snapshot, Termination, Trajectory, ValidityFlags, Variant};

use super::one_phase::DISAPPEAR;
use super::{
    check_dt, diffuse_advect, next_step, output_time, stability_limit, Edge, StepDiagnostics,
};

/// Largest stable explicit step on the solid grid, `(L-s)² / (2α_s N_s²)`.
pub fn solid_stability_limit(width: f64, alpha: f64, intervals: usize) -> f64 {
    stability_limit(width, alpha, intervals)
}

fn shared_limit(st: &TwoPhaseState, liquid: &PhaseProperties, solid: &PhaseProperties) -> f64 {
    let al = liquid.coefficients().alpha;
    let as_ = solid.coefficients().alpha;
    stability_limit(st.s, al, st.liquid.len() - 1).min(solid_stability_limit(
        st.length - st.s,
        as_,
        st.solid.len() - 1,
    ))
}

/// `(-k_l u_x(s⁻), k_s U_x(s⁺))`, both from three-point one-sided stencils.
pub fn interface_fluxes(
    st: &TwoPhaseState,
    liquid: &PhaseProperties,
    solid: &PhaseProperties,
) -> (f64, f64) {
    let hl = 1.0 / (st.liquid.len() - 1) as f64;
    let hs = 1.0 / (st.solid.len() - 1) as f64;
    (
        -liquid.conductivity * slope_at_end(&st.liquid, hl) / st.s,
        solid.conductivity * slope_at_start(&st.solid, hs) / (st.length - st.s),
    )
}

pub fn interface_velocity(
    st: &TwoPhaseState,
    liquid: &PhaseProperties,
    solid: &PhaseProperties,
) -> f64 {
    let (fl, fs) = interface_fluxes(st, liquid, solid);
    (fl + fs) / (liquid.density * liquid.latent_heat)
}

/// Advances both phases and the interface by one explicit step.
pub fn step2(
    state: &TwoPhaseState,
    q_c: f64,
    q_f: f64,
    dt: f64,
    liquid: &PhaseProperties,
    solid: &PhaseProperties,
) -> Result<(TwoPhaseState, StepDiagnostics), StepError> {
    let mut next = state.clone();
    let mut sl = vec![0.0; state.liquid.len()];
    let mut ss = vec![0.0; state.solid.len()];
    let diag = advance2(&mut next, &mut sl, &mut ss, q_c, q_f, dt, liquid, solid)?;
    Ok((next, diag))
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn advance2(
    st: &mut TwoPhaseState,
    scratch_l: &mut Vec<f64>,
    scratch_s: &mut Vec<f64>,
    q_c: f64,
    q_f: f64,
    dt: f64,
    liquid: &PhaseProperties,
    solid: &PhaseProperties,
) -> Result<StepDiagnostics, StepError> {
    let limit = shared_limit(st, liquid, solid);
    check_dt(dt, limit, st.t)?;
    let (flux_l, flux_s) = interface_fluxes(st, liquid, solid);
    let s_dot = (flux_l + flux_s) / (liquid.density * liquid.latent_heat);
    let s = st.s;
    let w = st.length - s;
    let al = liquid.conductivity / liquid.volumetric_heat_capacity();
    let as_ = solid.conductivity / solid.volumetric_heat_capacity();

    let up_l = diffuse_advect(
        &st.liquid,
        scratch_l,
        al / (s * s),
        0.0,
        s_dot / s,
        dt,
        Edge::Slope(-s * q_c / liquid.conductivity),
        Edge::Value(0.0),
    );
    let up_s = diffuse_advect(
        &st.solid,
        scratch_s,
        as_ / (w * w),
        s_dot / w,
        -s_dot / w,
        dt,
        Edge::Value(0.0),
        Edge::Slope(-w * q_f / solid.conductivity),
    );
    std::mem::swap(&mut st.liquid, scratch_l);
    std::mem::swap(&mut st.solid, scratch_s);

    let t = st.t + dt;
    let s_new = s + dt * s_dot;
    let finite =
        st.liquid.iter().sum::<f64>().is_finite() && st.solid.iter().sum::<f64>().is_finite();
    if !(finite && s_new.is_finite()) {
        return Err(StepError::NumericalBlowup { t });
    }
    if s_new <= 0.0 || s_new >= st.length {
        return Err(StepError::PhaseDisappeared { t, s: s_new });
    }
    st.s = s_new;
    st.t = t;
    Ok(StepDiagnostics {
        s_dot,
        interface_flux: flux_l,
        boundary_temperature: st.liquid[0],
        cfl: dt / limit,
        solid_interface_flux: Some(flux_s),
        upwind: up_l || up_s,
    })
}

struct Probe<'a> {
    liquid: &'a PhaseProperties,
    solid: &'a PhaseProperties,
    cfg: &'a ControllerConfig,
    disturbance: &'a DisturbanceSpec,
    kp: KernelParams,
    tol: f64,
}

impl Probe<'_> {
    fn flux(&self, st: &TwoPhaseState) -> f64 {
        match self.cfg.mode {
            ControlMode::OpenLoop { q0 } => {
                open_loop_flux(st.t, q0, self.cfg.gain, self.disturbance)
            }
            _ => closed_loop_flux_2p(st, self.liquid, self.solid, self.cfg),
        }
    }

    fn snapshot(&self, st: &TwoPhaseState, q_c: f64, net_heat: f64) -> Snapshot {
        let setpoint = self.cfg.setpoint;
        let low = st.liquid.iter().copied().fold(f64::INFINITY, f64::min);
        let high = st.solid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let gamma = self.liquid.density * self.liquid.latent_heat;
        let solid_ratio = self.solid.volumetric_heat_capacity() / gamma;
        Snapshot {
            t: st.t,
            s: st.s,
            liquid: st.liquid.clone(),
            solid: Some(st.solid.clone()),
            diagnostics: Diagnostics {
                q_c,
                q_f: self.disturbance.eval(st.t),
                energy: internal_energy_2p(st, self.liquid, self.solid),
                lyapunov: lyapunov_v_2p(st, setpoint, solid_ratio, &self.kp),
                psi: psi_norm_2p(st, setpoint),
                boundary_temperature: st.liquid[0],
                far_temperature: Some(*st.solid.last().unwrap()),
                s_dot: interface_velocity(st, self.liquid, self.solid),
                net_heat: Some(net_heat),
                flags: ValidityFlags {
                    liquid_sign: low >= -self.tol,
                    solid_sign: high <= self.tol,
                    interface_inside: st.s > 0.0 && st.s < st.length,
                    flux_positive: q_c > 0.0,
                    boundary_above_melting: st.liquid[0] > 0.0,
                },
            },
        }
    }
}

/// Two-phase counterpart of [`run`](super::run). Stops early once the
/// interface leaves `(s₀·10⁻³, L(1 - 10⁻³))`.
pub fn run2(
    scenario: &Scenario,
    cfg: &ControllerConfig,
    disturbance: &DisturbanceSpec,
) -> Result<Trajectory, StepError> {
    let solid_section = scenario
        .solid
        .as_ref()
        .ok_or_else(|| StepError::InvalidState(ConfigError::MissingSolid.to_string()))?;
    if matches!(cfg.mode, ControlMode::DirichletValidation { .. }) {
        return Err(StepError::InvalidState(
            "Dirichlet validation is one-phase only".into(),
        ));
    }
    let liquid = &scenario.liquid;
    let solid = &solid_section.properties;
    let length = solid_section.length;
    let coeffs = liquid.coefficients();
    let kp = KernelParams::new(
        compute_epsilon(&coeffs, cfg.gain, length),
        cfg.gain,
        coeffs.alpha,
        coeffs.beta,
    )
    .map_err(|e| StepError::InvalidState(e.to_string()))?;
    let probe = Probe {
        liquid,
        solid,
        cfg,
        disturbance,
        kp,
        tol: scenario.sign_tolerance(),
    };

    let mut st = scenario
        .initial_two_phase_state()
        .map_err(|e| StepError::InvalidState(e.to_string()))?;
    let mut sl = vec![0.0; st.liquid.len()];
    let mut ss = vec![0.0; st.solid.len()];
    let interval = scenario.output_interval();
    let t_final = scenario.t_final;
    let (lo, hi) = (scenario.s0 * DISAPPEAR, length * (1.0 - DISAPPEAR));

    let mut q_c = probe.flux(&st);
    let mut q_f = disturbance.eval(st.t);
    let mut net_heat = 0.0;
    let mut snapshots = vec![probe.snapshot(&st, q_c, net_heat)];
    let mut termination = Termination::Completed;
    let mut steps = 0_u64;
    let mut k = 1;
    while st.t < t_final {
        let target = output_time(k, interval, t_final);
        let limit = shared_limit(&st, liquid, solid);
        let (dt, lands) = next_step(scenario.time_step, limit, st.t, target)?;
        advance2(&mut st, &mut sl, &mut ss, q_c, q_f, dt, liquid, solid)?;
        steps += 1;
        if lands {
            st.t = target;
            k += 1;
        }
        let next_q_c = probe.flux(&st);
        let next_q_f = disturbance.eval(st.t);
        net_heat += 0.5 * dt * ((q_c - q_f) + (next_q_c - next_q_f));
        (q_c, q_f) = (next_q_c, next_q_f);
        if st.s < lo || st.s > hi {
            snapshots.push(probe.snapshot(&st, q_c, net_heat));
            termination = Termination::PhaseDisappeared { t: st.t, s: st.s };
            log::warn!("interface left ({lo}, {hi}) m at t = {} s", st.t);
            break;
        }
        if lands {
            snapshots.push(probe.snapshot(&st, q_c, net_heat));
        }
    }

    Ok(Trajectory {
        variant: Variant::TwoPhase,
        mode: cfg.mode,
        gain: cfg.gain,
        setpoint: cfg.setpoint,
        length: Some(length),
        sign_tolerance: probe.tol,
        snapshots,
        termination,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zinc() -> PhaseProperties {
        PhaseProperties::new(6570.0, 111_961.0, 389.5687, 116.0).unwrap()
    }

    fn zinc_solid() -> PhaseProperties {
        PhaseProperties::new(7140.0, 111_961.0, 388.0, 119.5).unwrap()
    }

    #[test]
    fn equilibrium_is_fixed() {
        let st = TwoPhaseState::new(0.0, 0.2, vec![0.0; 21], vec![0.0; 31], 0.5).unwrap();
        let (next, d) = step2(&st, 0.0, 0.0, 1e-2, &zinc(), &zinc_solid()).unwrap();
        assert_eq!(next.liquid, st.liquid);
        assert_eq!(next.solid, st.solid);
        assert_eq!(next.s, st.s);
        assert_eq!(d.s_dot, 0.0);
    }

    #[test]
    fn heat_loss_cools_far_cell_first() {
        let st = TwoPhaseState::new(0.0, 0.2, vec![0.0; 21], vec![0.0; 31], 0.5).unwrap();
        let (next, d) = step2(&st, 0.0, 1e3, 1e-2, &zinc(), &zinc_solid()).unwrap();
        assert!(next.solid[30] < 0.0);
        assert!(next.solid[..30].iter().all(|&v| v == 0.0));
        assert_eq!(next.s, st.s);
        assert_eq!(d.s_dot, 0.0);
    }

    #[test]
    fn antisymmetric_data_is_stationary() {
        let p = zinc();
        let n = 40;
        let l = 0.4;
        let liquid: Vec<f64> = (0..=n).map(|i| 3.0 * (1.0 - i as f64 / n as f64)).collect();
        let solid: Vec<f64> = (0..=n).map(|i| -3.0 * i as f64 / n as f64).collect();
        let mut st = TwoPhaseState::new(0.0, l / 2.0, liquid, solid, l).unwrap();
        assert!(interface_velocity(&st, &p, &p).abs() < 1e-15);
        let dt = 0.4 * shared_limit(&st, &p, &p);
        let steps = 2000;
        for _ in 0..steps {
            let q_c = p.conductivity * 3.0 / st.s;
            let q_f = p.conductivity * 3.0 / (l - st.s);
            st = step2(&st, q_c, q_f, dt, &p, &p).unwrap().0;
        }
        // |ṡ| ≤ 1e-8 L / t_final over the run
        assert!((st.s - l / 2.0).abs() <= 1e-8 * l);
    }
}
