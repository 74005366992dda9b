//! Neumann similarity solution of the one-phase problem with a fixed wall
//! temperature, used as an independent check of the solver:
//! `s(t) = 2λ√(αt)` with `λ e^{λ²} erf(λ) = St/√π`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::disturbance::DisturbanceSpec;
use crate::error::{ConfigError, Error};
use crate::params::PhaseProperties;
use crate::profile::InitialProfile;
use crate::scenario::{ControllerKind, Scenario, TimeStepping, DEFAULT_SAFETY};
use crate::solver;

const LAMBDA_TOL: f64 = 1e-12;
/// Initial interface of the oracle run, m.
const ORACLE_S0: f64 = 0.05;
/// Horizon in units of the similarity start time.
const HORIZON: f64 = 3.0;
/// Table samples per grid interval for the initial profile.
const TABLE_REFINE: usize = 4;

/// Root of `λ e^{λ²} erf(λ) = St/√π`, by bisection to 10⁻¹².
pub fn neumann_lambda(stefan: f64) -> Result<f64, ConfigError> {
    if !(stefan > 0.0 && stefan.is_finite()) {
        return Err(ConfigError::invalid(
            "stefan_number",
            "finite and > 0",
            stefan,
        ));
    }
    let rhs = stefan / PI.sqrt();
    let f = |l: f64| l * (l * l).exp() * libm::erf(l) - rhs;
    let mut hi = 1.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > LAMBDA_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn similarity_interface(lambda: f64, alpha: f64, t: f64) -> f64 {
    2.0 * lambda * (alpha * t).sqrt()
}

/// `T(x,t) - T_m = ΔT (1 - erf(x / 2√(αt)) / erf(λ))` inside the liquid.
pub fn similarity_temperature(lambda: f64, alpha: f64, delta_t: f64, x: f64, t: f64) -> f64 {
    if x >= similarity_interface(lambda, alpha, t) {
        return 0.0;
    }
    delta_t * (1.0 - libm::erf(x / (2.0 * (alpha * t).sqrt())) / libm::erf(lambda))
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub stefan_number: f64,
    pub lambda: f64,
    pub delta_t: f64,
    pub grid: usize,
    /// Similarity time at which the run starts, s.
    pub t0: f64,
    /// Simulated span after `t0`, s.
    pub horizon: f64,
    /// `max |s - s_exact| / s_exact` over the second half of the horizon.
    pub max_rel_error: f64,
    pub final_interface: f64,
    pub steps: u64,
}

/// Dirichlet-validation scenario started on the exact similarity profile
/// at the time its interface reaches `s₀`. Returns the scenario, `λ` and
/// the start time.
pub fn oracle_scenario(
    liquid: &PhaseProperties,
    stefan: f64,
    grid: usize,
) -> Result<(Scenario, f64, f64), ConfigError> {
    liquid.validate()?;
    let lambda = neumann_lambda(stefan)?;
    let alpha = liquid.coefficients().alpha;
    let delta_t = stefan * liquid.latent_heat / liquid.heat_capacity;
    let s0 = ORACLE_S0;
    let t0 = (s0 / (2.0 * lambda)).powi(2) / alpha;
    let m = grid * TABLE_REFINE;
    let x: Vec<f64> = (0..=m).map(|i| s0 * i as f64 / m as f64).collect();
    let values = x
        .iter()
        .map(|&x| similarity_temperature(lambda, alpha, delta_t, x, t0))
        .collect();
    let scenario = Scenario {
        liquid: *liquid,
        solid: None,
        s0,
        initial_profile: InitialProfile::Tabulated { x, values },
        setpoint: 2.0 * s0,
        gain: 1.0,
        disturbance: DisturbanceSpec::Zero,
        grid,
        time_step: TimeStepping::Adaptive {
            safety: DEFAULT_SAFETY,
        },
        t_final: HORIZON * t0,
        output_interval: None,
        controller: ControllerKind::DirichletValidation { delta_t },
    };
    scenario.validate()?;
    Ok((scenario, lambda, t0))
}

pub fn run_oracle(
    liquid: &PhaseProperties,
    stefan: f64,
    grid: usize,
) -> Result<OracleResult, Error> {
    let (scenario, lambda, t0) = oracle_scenario(liquid, stefan, grid)?;
    let alpha = liquid.coefficients().alpha;
    let traj = solver::run(
        &scenario,
        &scenario.controller_config(),
        &scenario.disturbance,
    )?;
    let half = 0.5 * scenario.t_final;
    let max_rel_error = traj
        .snapshots
        .iter()
        .filter(|s| s.t >= half)
        .map(|s| {
            let exact = similarity_interface(lambda, alpha, s.t + t0);
            (s.s - exact).abs() / exact
        })
        .fold(0.0_f64, f64::max);
    Ok(OracleResult {
        stefan_number: stefan,
        lambda,
        delta_t: stefan * liquid.latent_heat / liquid.heat_capacity,
        grid,
        t0,
        horizon: scenario.t_final,
        max_rel_error,
        final_interface: traj.last().map_or(f64::NAN, |s| s.s),
        steps: traj.steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_solves_transcendental_condition() {
        for st in [1e-4, 0.034, 0.5, 2.0, 20.0] {
            let l = neumann_lambda(st).unwrap();
            let lhs = l * (l * l).exp() * libm::erf(l);
            assert!(
                (lhs - st / PI.sqrt()).abs() < 1e-10 * (1.0 + st),
                "St = {st}"
            );
        }
    }

    #[test]
    fn small_stefan_limit() {
        // λ ≈ √(St/2) as St → 0
        let st = 1e-8;
        let l = neumann_lambda(st).unwrap();
        assert!((l / (st / 2.0).sqrt() - 1.0).abs() < 1e-3);
        assert!(neumann_lambda(1e-6).unwrap() < neumann_lambda(1e-4).unwrap());
    }

    #[test]
    fn rejects_non_positive() {
        assert!(neumann_lambda(0.0).is_err());
        assert!(neumann_lambda(f64::NAN).is_err());
    }

    #[test]
    fn profile_endpoints() {
        let (l, a) = (0.13, 4.5e-5);
        let t = 100.0;
        assert_eq!(similarity_temperature(l, a, 10.0, 0.0, t), 10.0);
        let s = similarity_interface(l, a, t);
        assert!(similarity_temperature(l, a, 10.0, s * (1.0 - 1e-12), t).abs() < 1e-9);
    }
}
