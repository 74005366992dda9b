use crate::error::AnalysisError;
use crate::params::PhaseProperties;
use crate::state::{OnePhaseState, TwoPhaseState};
use crate::trajectory::Trajectory;

/// `E = (k/α) ∫_0^s u dx + (k/β) s`, i.e. sensible plus latent heat per
/// unit area, J/m².
pub fn internal_energy_1p(state: &OnePhaseState, params: &PhaseProperties) -> f64 {
    params.volumetric_heat_capacity() * state.integral()
        + params.density * params.latent_heat * state.s
}

pub fn internal_energy_2p(
    state: &TwoPhaseState,
    liquid: &PhaseProperties,
    solid: &PhaseProperties,
) -> f64 {
    liquid.volumetric_heat_capacity() * state.liquid_integral()
        + solid.volumetric_heat_capacity() * state.solid_integral()
        + liquid.density * liquid.latent_heat * state.s
}

/// `|E(t_f) - E(0) - ∫(q_c - q_f) dt| / max(|E(0)|, |E(t_f)|)`.
///
/// The heat input integral comes from the solver-resolution accumulator
/// when every snapshot carries it, and from the trapezoid rule over the
/// snapshots otherwise.
pub fn energy_balance_residual(traj: &Trajectory) -> Result<f64, AnalysisError> {
    let first = traj.first().ok_or(AnalysisError::EmptyTrajectory)?;
    let last = traj.last().expect("non-empty");
    let accumulated = traj
        .snapshots
        .iter()
        .all(|s| s.diagnostics.net_heat.is_some());
    let heat = if accumulated {
        last.diagnostics.net_heat.unwrap() - first.diagnostics.net_heat.unwrap()
    } else {
        traj.snapshots
            .windows(2)
            .map(|w| {
                let (a, b) = (&w[0].diagnostics, &w[1].diagnostics);
                0.5 * (w[1].t - w[0].t) * ((a.q_c - a.q_f) + (b.q_c - b.q_f))
            })
            .sum()
    };
    let (e0, ef) = (first.diagnostics.energy, last.diagnostics.energy);
    let scale = e0.abs().max(ef.abs());
    if scale == 0.0 {
        return Ok((ef - e0 - heat).abs());
    }
    Ok((ef - e0 - heat).abs() / scale)
}
