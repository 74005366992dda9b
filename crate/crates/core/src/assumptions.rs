//! Gate for the standing assumptions on initial data, heat loss, setpoint
//! and gain. Failures are reported, never thrown.

use serde::Serialize;

use crate::numerics::trapezoid;
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AssumptionStatus {
    Pass,
    Fail,
}

/// One checked inequality `lhs > rhs` (or the condition stated in `detail`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionEntry {
    pub id: &'static str,
    pub status: AssumptionStatus,
    pub lhs: f64,
    pub rhs: f64,
    pub detail: String,
}

impl AssumptionEntry {
    fn new(id: &'static str, ok: bool, lhs: f64, rhs: f64, detail: String) -> Self {
        AssumptionEntry {
            id,
            status: if ok {
                AssumptionStatus::Pass
            } else {
                AssumptionStatus::Fail
            },
            lhs,
            rhs,
            detail,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == AssumptionStatus::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub entries: Vec<AssumptionEntry>,
}

impl AssumptionReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(AssumptionEntry::passed)
    }

    pub fn get(&self, id: &str) -> Option<&AssumptionEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

pub fn check_assumptions(scenario: &Scenario) -> AssumptionReport {
    let liquid = scenario.liquid.coefficients();
    let u0 = scenario.initial_liquid_profile();
    let liquid_integral = trapezoid(&u0, scenario.s0 / scenario.grid as f64);
    let liquid_min = u0.iter().copied().fold(f64::INFINITY, f64::min);
    let mut entries = Vec::new();

    let qf_sup = scenario.disturbance.sup();
    let total = scenario.disturbance.total_integral();
    entries.push(AssumptionEntry::new(
        "heat_loss",
        total.is_some(),
        total.unwrap_or(f64::MAX),
        f64::MAX,
        "q_f >= 0 with finite total integral (lhs: integral in J/m^2, f64::MAX when it diverges)"
            .into(),
    ));

    // c > (β/(k s_r)) sup q_f = sup q_f / (γ s_r)
    let gain_threshold = qf_sup / (liquid.gamma * scenario.setpoint);
    entries.push(AssumptionEntry::new(
        "gain",
        scenario.gain > gain_threshold,
        scenario.gain,
        gain_threshold,
        format!("c > sup q_f / (rho dH s_r) with sup q_f = {qf_sup} W/m^2"),
    ));

    match &scenario.solid {
        None => {
            entries.push(AssumptionEntry::new(
                "initial_data",
                scenario.s0 > 0.0 && liquid_min >= 0.0,
                liquid_min,
                0.0,
                "s0 > 0 and T0 - Tm >= 0 on [0, s0] (lhs: min sample, K)".into(),
            ));
            let threshold = scenario.s0 + liquid.beta / liquid.alpha * liquid_integral;
            entries.push(AssumptionEntry::new(
                "setpoint",
                scenario.setpoint > threshold,
                scenario.setpoint,
                threshold,
                format!(
                    "s_r > s0 + (beta/alpha) int (T0 - Tm) dx, integral = {liquid_integral} K m"
                ),
            ));
        }
        Some(solid) => {
            let solid_coeffs = solid.properties.coefficients();
            let us = scenario.initial_solid_profile().expect("solid present");
            let n_s = us.len() - 1;
            let solid_integral = trapezoid(&us, (solid.length - scenario.s0) / n_s as f64);
            let solid_max = us.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let inside = scenario.s0 > 0.0 && scenario.s0 < solid.length;
            entries.push(AssumptionEntry::new(
                "initial_data",
                inside && liquid_min >= 0.0 && solid_max <= 0.0,
                liquid_min,
                0.0,
                format!(
                    "0 < s0 < L, T_l0 - Tm >= 0 (lhs: liquid min, K), Ts0 - Tm <= 0 (solid max {solid_max} K)"
                ),
            ));
            let energy = scenario.liquid.volumetric_heat_capacity() * liquid_integral
                + solid.properties.volumetric_heat_capacity() * solid_integral
                + liquid.gamma * scenario.s0;
            entries.push(AssumptionEntry::new(
                "initial_energy",
                energy > 0.0,
                energy,
                0.0,
                "(k_l/alpha_l) int u_l + (k_s/alpha_s) int u_s + gamma s0 > 0 (J/m^2)".into(),
            ));
            // β_i = k_i / γ with the liquid γ, so β_s/α_s = ρ_s C_s / γ
            let beta_s = solid.properties.conductivity / liquid.gamma;
            let lower = scenario.s0
                + liquid.beta / liquid.alpha * liquid_integral
                + beta_s / solid_coeffs.alpha * solid_integral;
            entries.push(AssumptionEntry::new(
                "setpoint",
                lower < scenario.setpoint && scenario.setpoint < solid.length,
                scenario.setpoint,
                lower,
                format!("lower bound < s_r < L = {}", solid.length),
            ));
        }
    }
    AssumptionReport { entries }
}
