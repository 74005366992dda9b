//! Initial temperature profiles, stored as `T_0(x) - T_m`.

use serde::{Deserialize, Serialize};

use crate::disturbance::interpolate;
use crate::error::ConfigError;

/// Which side of the interface a profile describes. The liquid must sit at
/// or above the melting point, the solid at or below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Liquid,
    Solid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialProfile {
    /// Linear in x: `boundary_value` at the fixed wall (x = 0 for the liquid,
    /// x = L for the solid), zero at the interface.
    LinearRamp {
        #[serde(alias = "t_bar")]
        boundary_value: f64,
    },
    /// Samples at physical positions, linearly interpolated.
    Tabulated { x: Vec<f64>, values: Vec<f64> },
}

impl InitialProfile {
    /// Checks the profile against the domain `[lo, hi]` it will be sampled on.
    pub fn validate(&self, lo: f64, hi: f64) -> Result<(), ConfigError> {
        match self {
            InitialProfile::LinearRamp { boundary_value } => {
                if boundary_value.is_finite() {
                    Ok(())
                } else {
                    Err(ConfigError::invalid(
                        "boundary_value",
                        "finite",
                        *boundary_value,
                    ))
                }
            }
            InitialProfile::Tabulated { x, values } => {
                let bad = |reason: String| ConfigError::Table {
                    what: "initial profile",
                    reason,
                };
                if x.len() < 2 || x.len() != values.len() {
                    return Err(bad("need at least two samples and equal lengths".into()));
                }
                if x.iter().chain(values).any(|v| !v.is_finite()) {
                    return Err(bad("entries must be finite".into()));
                }
                if x.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(bad("positions must increase strictly".into()));
                }
                let slack = 1e-9 * (hi - lo).abs().max(f64::MIN_POSITIVE);
                if x[0] > lo + slack || x[x.len() - 1] < hi - slack {
                    return Err(bad(format!(
                        "samples span [{}, {}] but must cover [{lo}, {hi}]",
                        x[0],
                        x[x.len() - 1]
                    )));
                }
                Ok(())
            }
        }
    }

    /// Evaluates the profile at physical position `x`.
    ///
    /// `interface` and `wall` are the interface position and the fixed
    /// boundary of this phase. The interface value is exactly zero; tabulated
    /// samples of the wrong sign are clamped to zero.
    pub fn eval(&self, x: f64, interface: f64, wall: f64, side: Side) -> f64 {
        if x == interface {
            return 0.0;
        }
        match self {
            InitialProfile::LinearRamp { boundary_value } => {
                boundary_value * (x - interface) / (wall - interface)
            }
            InitialProfile::Tabulated { x: xs, values } => {
                let v = interpolate(xs, values, x);
                match side {
                    Side::Liquid => v.max(0.0),
                    Side::Solid => v.min(0.0),
                }
            }
        }
    }

    /// Number of tabulated samples that have the wrong sign for `side` and
    /// will be clamped.
    pub fn clamped_samples(&self, side: Side) -> usize {
        match self {
            InitialProfile::LinearRamp { .. } => 0,
            InitialProfile::Tabulated { values, .. } => values
                .iter()
                .filter(|&&v| match side {
                    Side::Liquid => v < 0.0,
                    Side::Solid => v > 0.0,
                })
                .count(),
        }
    }

    /// Samples the profile on `n + 1` uniform nodes between `from` and `to`
    /// (physical positions); the node that coincides with the interface is
    /// pinned to zero.
    pub fn sample(
        &self,
        n: usize,
        from: f64,
        to: f64,
        interface: f64,
        wall: f64,
        side: Side,
    ) -> Vec<f64> {
        let mut u: Vec<f64> = (0..=n)
            .map(|i| {
                let x = from + (to - from) * i as f64 / n as f64;
                self.eval(x, interface, wall, side)
            })
            .collect();
        match side {
            Side::Liquid => u[n] = 0.0,
            Side::Solid => u[0] = 0.0,
        }
        u
    }
}
