//! Run orchestration and the JSON reports written next to trajectories.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    compute_epsilon, compute_lambda, energy_balance_residual, fit_iss_envelope, validity_monitor,
    IssEnvelope, RateVariant, Violation,
};
use crate::assumptions::{check_assumptions, AssumptionReport};
use crate::control::flux_equivalence_residual;
use crate::error::{ConfigError, Error, StepError};
use crate::scenario::Scenario;
use crate::solver;
use crate::trajectory::{Termination, Trajectory};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct TerminalSummary {
    pub t: f64,
    pub s: f64,
    pub psi: f64,
    /// `s_r - s(t_f)`, m.
    pub offset: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub scenario: Scenario,
    pub assumptions: AssumptionReport,
    pub termination: Termination,
    pub steps: u64,
    pub terminal: TerminalSummary,
    pub energy_residual: f64,
    /// Closed-loop runs only.
    pub flux_residual: Option<f64>,
    pub lambda: f64,
    pub epsilon: f64,
    pub envelope: Option<IssEnvelope>,
    pub violations: Vec<Violation>,
    pub valid: bool,
}

impl RunReport {
    /// Valid trajectory, passed assumptions and a run that reached `t_final`.
    pub fn success(&self) -> bool {
        self.valid && self.assumptions.all_passed() && self.termination == Termination::Completed
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub report: RunReport,
}

/// Explicit ISS rate for the scenario's variant.
pub fn scenario_lambda(scenario: &Scenario) -> f64 {
    let alpha = scenario.liquid.coefficients().alpha;
    let variant = match &scenario.solid {
        None => RateVariant::OnePhase {
            alpha,
            setpoint: scenario.setpoint,
        },
        Some(solid) => RateVariant::TwoPhase {
            alpha_liquid: alpha,
            alpha_solid: solid.properties.coefficients().alpha,
            length: solid.length,
        },
    };
    compute_lambda(variant, scenario.gain)
}

/// Integrates the scenario with its own controller and disturbance.
pub fn simulate(scenario: &Scenario) -> Result<Trajectory, StepError> {
    let cfg = scenario.controller_config();
    if scenario.is_two_phase() {
        solver::run2(scenario, &cfg, &scenario.disturbance)
    } else {
        solver::run(scenario, &cfg, &scenario.disturbance)
    }
}

pub fn analyze(scenario: &Scenario, trajectory: &Trajectory) -> Result<RunReport, Error> {
    let cfg = scenario.controller_config();
    let last = trajectory
        .last()
        .ok_or(crate::AnalysisError::EmptyTrajectory)?;
    let lambda = scenario_lambda(scenario);
    let reach = scenario
        .solid
        .as_ref()
        .map_or(scenario.setpoint, |s| s.length);
    let epsilon = compute_epsilon(&scenario.liquid.coefficients(), scenario.gain, reach);
    let flux_residual = if cfg.mode.is_closed_loop() {
        Some(flux_equivalence_residual(
            trajectory,
            &cfg,
            &scenario.disturbance,
        )?)
    } else {
        None
    };
    let envelope = match fit_iss_envelope(trajectory, lambda) {
        Ok(env) => Some(env),
        Err(e) => {
            log::warn!("no ISS envelope: {e}");
            None
        }
    };
    let violations = validity_monitor(trajectory);
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        scenario: scenario.clone(),
        assumptions: check_assumptions(scenario),
        termination: trajectory.termination.clone(),
        steps: trajectory.steps,
        terminal: TerminalSummary {
            t: last.t,
            s: last.s,
            psi: last.diagnostics.psi,
            offset: scenario.setpoint - last.s,
        },
        energy_residual: energy_balance_residual(trajectory)?,
        flux_residual,
        lambda,
        epsilon,
        envelope,
        valid: violations.is_empty(),
        violations,
    })
}

/// Simulates and analyzes one scenario.
pub fn execute(scenario: &Scenario) -> Result<RunOutcome, Error> {
    scenario.validate()?;
    let trajectory = simulate(scenario)?;
    let report = analyze(scenario, &trajectory)?;
    Ok(RunOutcome { trajectory, report })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub qf_bar: f64,
    pub s_final: f64,
    pub offset: f64,
    pub psi_final: f64,
    pub valid: bool,
    pub success: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub entries: Vec<SweepEntry>,
    /// Offsets strictly increase with `q̄_f` (entries sorted by magnitude).
    pub offsets_strictly_increasing: bool,
}

/// Runs the scenario once per heat-loss magnitude, in parallel. Outcomes
/// come back in input order.
pub fn sweep(
    scenario: &Scenario,
    magnitudes: &[f64],
    decay: Option<f64>,
) -> Result<(Vec<RunOutcome>, SweepReport), Error> {
    if magnitudes.is_empty() {
        return Err(ConfigError::invalid("qf_bar", "a non-empty list", f64::NAN).into());
    }
    let members = magnitudes
        .iter()
        .map(|&q| {
            let mut s = scenario.clone();
            s.disturbance = scenario.disturbance.with_magnitude(q, decay)?;
            Ok(s)
        })
        .collect::<Result<Vec<_>, ConfigError>>()?;
    let outcomes = members
        .par_iter()
        .map(execute)
        .collect::<Result<Vec<_>, Error>>()?;
    let entries: Vec<SweepEntry> = magnitudes
        .iter()
        .zip(&outcomes)
        .map(|(&qf_bar, o)| SweepEntry {
            qf_bar,
            s_final: o.report.terminal.s,
            offset: o.report.terminal.offset,
            psi_final: o.report.terminal.psi,
            valid: o.report.valid,
            success: o.report.success(),
        })
        .collect();
    let mut sorted: Vec<&SweepEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| a.qf_bar.total_cmp(&b.qf_bar));
    let increasing = sorted
        .windows(2)
        .all(|w| w[1].qf_bar > w[0].qf_bar && w[1].offset > w[0].offset);
    Ok((
        outcomes,
        SweepReport {
            schema_version: SCHEMA_VERSION,
            entries,
            offsets_strictly_increasing: increasing,
        },
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergeReport {
    pub schema_version: u32,
    pub grids: Vec<usize>,
    pub s_final: Vec<f64>,
    /// Observed order `ln(|Δ₁₂|/|Δ₂₃|) / ln(N₂/N₁)` from the three finest grids.
    pub observed_order: Option<f64>,
    /// All grids produced the same terminal interface.
    pub exact: bool,
}

/// Self-convergence study of `s(t_f)`; the solid grid is scaled with the
/// liquid grid.
pub fn converge(scenario: &Scenario, grids: &[usize]) -> Result<ConvergeReport, Error> {
    let mut grids = grids.to_vec();
    grids.sort_unstable();
    grids.dedup();
    if grids.len() < 3 {
        return Err(
            ConfigError::invalid("grids", "at least 3 distinct sizes", grids.len() as f64).into(),
        );
    }
    let base = scenario.grid as f64;
    let members: Vec<Scenario> = grids
        .iter()
        .map(|&n| {
            let mut s = scenario.clone();
            s.grid = n;
            if let Some(solid) = s.solid.as_mut() {
                let ns = solid.grid.unwrap_or(scenario.grid) as f64;
                solid.grid =
                    Some(((ns * n as f64 / base).round() as usize).max(crate::scenario::MIN_GRID));
            }
            s.validate().map(|_| s)
        })
        .collect::<Result<_, _>>()?;
    let s_final = members
        .par_iter()
        .map(|s| {
            let traj = simulate(s)?;
            Ok(traj.last().map_or(f64::NAN, |snap| snap.s))
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    let m = s_final.len();
    let d12 = (s_final[m - 2] - s_final[m - 3]).abs();
    let d23 = (s_final[m - 1] - s_final[m - 2]).abs();
    let exact = s_final.windows(2).all(|w| w[0] == w[1]);
    let observed_order = if d12 > 0.0 && d23 > 0.0 {
        Some((d12 / d23).ln() / (grids[m - 2] as f64 / grids[m - 3] as f64).ln())
    } else {
        None
    };
    Ok(ConvergeReport {
        schema_version: SCHEMA_VERSION,
        grids,
        s_final,
        observed_order,
        exact,
    })
}
