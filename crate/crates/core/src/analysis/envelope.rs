//! Exponential ISS envelope fit
//! `y(t_i) ≤ M₁ y(t₀) e^{-λ(t_i - t₀)} + M₂ d(t_i)`.
//!
//! The minimal `(M₁, M₂)` under `M₁ + κM₂` with `M₁ ≥ 1`, `M₂ ≥ 0` is a two
//! variable linear program; it is solved exactly by enumerating the
//! vertices of the feasible region.

use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::trajectory::Trajectory;

/// Relative inflation applied to the optimal vertex so that binding
/// constraints hold with non-negative slack after rounding.
const INFLATE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IssEnvelope {
    pub lambda: f64,
    pub m1: f64,
    pub m2: f64,
    /// Smallest normalized slack `(bound_i - y_i) / max(y_i, ·)` over all
    /// samples; non-negative for a valid fit.
    pub fit_residual: f64,
}

impl IssEnvelope {
    pub fn bound(&self, y0: f64, dt: f64, dist: f64) -> f64 {
        self.m1 * y0 * (-self.lambda * dt).exp() + self.m2 * dist
    }
}

/// Fits the envelope to `values` sampled at `times`, with `dist[i]` the
/// disturbance measure active at `times[i]` (normally the running sup).
pub fn fit_envelope(
    times: &[f64],
    values: &[f64],
    dist: &[f64],
    lambda: f64,
) -> Result<IssEnvelope, AnalysisError> {
    if times.is_empty() {
        return Err(AnalysisError::EmptyTrajectory);
    }
    if times.len() != values.len() || times.len() != dist.len() {
        return Err(AnalysisError::Structure("series lengths differ".into()));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(AnalysisError::Structure(format!("invalid rate {lambda}")));
    }
    if values
        .iter()
        .chain(dist)
        .any(|v| !v.is_finite() || *v < 0.0)
    {
        return Err(AnalysisError::Structure(
            "envelope data must be finite and non-negative".into(),
        ));
    }
    let y0 = values[0];
    let t0 = times[0];
    let a: Vec<f64> = times
        .iter()
        .map(|t| y0 * (-lambda * (t - t0)).exp())
        .collect();
    let b = dist;
    let y = values;
    let d_max = dist.iter().fold(0.0_f64, |m, v| m.max(*v));

    // smallest M₁ allowed by the constraints without disturbance coverage
    let mut m1_min = 1.0_f64;
    for i in 0..y.len() {
        if b[i] == 0.0 && y[i] > 0.0 {
            if a[i] == 0.0 {
                return Err(AnalysisError::Structure(format!(
                    "no envelope covers y = {} at t = {}",
                    y[i], times[i]
                )));
            }
            m1_min = m1_min.max(y[i] / a[i]);
        }
    }

    let m2_req = |m1: f64| -> f64 {
        (0..y.len())
            .filter(|&i| b[i] > 0.0)
            .map(|i| (y[i] - a[i] * m1) / b[i])
            .fold(0.0_f64, f64::max)
    };

    let (m1, m2) = if d_max == 0.0 {
        (m1_min, 0.0)
    } else {
        let kappa = if y0 > 0.0 { d_max / y0 } else { 1.0 };
        let mut candidates = vec![m1_min];
        let active: Vec<usize> = (0..y.len()).filter(|&i| b[i] > 0.0).collect();
        for &i in &active {
            if a[i] > 0.0 {
                candidates.push(y[i] / a[i]);
            }
        }
        for (k, &i) in active.iter().enumerate() {
            for &j in &active[k + 1..] {
                let den = a[i] / b[i] - a[j] / b[j];
                if den != 0.0 {
                    candidates.push((y[i] / b[i] - y[j] / b[j]) / den);
                }
            }
        }
        let mut best = (f64::INFINITY, m1_min, m2_req(m1_min));
        for m1 in candidates {
            if !(m1.is_finite() && m1 >= m1_min) {
                continue;
            }
            let m2 = m2_req(m1);
            let cost = m1 + kappa * m2;
            if cost < best.0 {
                best = (cost, m1, m2);
            }
        }
        (best.1, best.2)
    };
    let m1 = m1 * (1.0 + INFLATE);
    let m2 = m2 * (1.0 + INFLATE);

    let mut residual = f64::INFINITY;
    for i in 0..y.len() {
        let slack = a[i] * m1 + b[i] * m2 - y[i];
        residual = residual.min(slack / y[i].max(f64::MIN_POSITIVE));
    }
    Ok(IssEnvelope {
        lambda,
        m1,
        m2,
        fit_residual: residual,
    })
}

/// Ψ envelope of a trajectory against the running sup of `q_f`.
pub fn fit_iss_envelope(traj: &Trajectory, lambda: f64) -> Result<IssEnvelope, AnalysisError> {
    let times = traj.times();
    let psi: Vec<f64> = traj.snapshots.iter().map(|s| s.diagnostics.psi).collect();
    let mut sup = 0.0_f64;
    let dist: Vec<f64> = traj
        .snapshots
        .iter()
        .map(|s| {
            sup = sup.max(s.diagnostics.q_f);
            sup
        })
        .collect();
    fit_envelope(&times, &psi, &dist, lambda)
}
