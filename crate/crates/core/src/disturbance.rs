//! Declarative description of the heat-loss signal `q_f(t)`.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Heat loss at the interface (one-phase) or at the far solid boundary
/// (two-phase), W/m².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DisturbanceSpec {
    #[default]
    Zero,
    Constant {
        qf_bar: f64,
    },
    /// `q̄_f e^{-K t}`.
    Exponential {
        qf_bar: f64,
        #[serde(rename = "K")]
        decay: f64,
    },
    /// Piecewise-linear samples; held constant outside the sampled range.
    Table {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl DisturbanceSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        match self {
            DisturbanceSpec::Zero => Ok(()),
            DisturbanceSpec::Constant { qf_bar } => non_negative("qf_bar", *qf_bar),
            DisturbanceSpec::Exponential { qf_bar, decay } => {
                non_negative("qf_bar", *qf_bar)?;
                non_negative("K", *decay)
            }
            DisturbanceSpec::Table { times, values } => {
                let bad = |reason: &str| ConfigError::Table {
                    what: "disturbance",
                    reason: reason.to_string(),
                };
                if times.is_empty() || times.len() != values.len() {
                    return Err(bad("times and values must be non-empty and equally long"));
                }
                if times.iter().chain(values).any(|v| !v.is_finite()) {
                    return Err(bad("entries must be finite"));
                }
                if times[0] < 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(bad("times must start at t >= 0 and increase strictly"));
                }
                if values.iter().any(|&v| v < 0.0) {
                    return Err(bad("heat loss samples must be non-negative"));
                }
                Ok(())
            }
        }
    }

    /// Same disturbance shape with a new magnitude `q̄_f` (and optionally a
    /// new decay rate). Tables cannot be rescaled this way.
    pub fn with_magnitude(&self, qf_bar: f64, decay: Option<f64>) -> Result<Self, ConfigError> {
        let keep = match self {
            DisturbanceSpec::Exponential { decay, .. } => *decay,
            DisturbanceSpec::Table { .. } => {
                return Err(ConfigError::Table {
                    what: "disturbance",
                    reason: "a tabulated heat loss has no single magnitude".into(),
                })
            }
            _ => 0.0,
        };
        let decay = decay.unwrap_or(keep);
        if !(decay.is_finite() && decay >= 0.0) {
            return Err(ConfigError::invalid("K", "finite and >= 0", decay));
        }
        let spec = if decay > 0.0 {
            DisturbanceSpec::Exponential { qf_bar, decay }
        } else {
            DisturbanceSpec::Constant { qf_bar }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            DisturbanceSpec::Zero => 0.0,
            DisturbanceSpec::Constant { qf_bar } => *qf_bar,
            DisturbanceSpec::Exponential { qf_bar, decay } => qf_bar * (-decay * t).exp(),
            DisturbanceSpec::Table { times, values } => interpolate(times, values, t),
        }
    }

    /// `sup_t q_f(t)`: analytic for the closed forms, the largest sample for tables.
    pub fn sup(&self) -> f64 {
        match self {
            DisturbanceSpec::Zero => 0.0,
            DisturbanceSpec::Constant { qf_bar } | DisturbanceSpec::Exponential { qf_bar, .. } => {
                *qf_bar
            }
            DisturbanceSpec::Table { values, .. } => values.iter().copied().fold(0.0, f64::max),
        }
    }

    /// Whether `∫_0^∞ q_f dt` is finite.
    pub fn has_bounded_integral(&self) -> bool {
        self.total_integral().is_some()
    }

    /// `∫_0^∞ q_f dt`, or `None` when it diverges.
    pub fn total_integral(&self) -> Option<f64> {
        match self {
            DisturbanceSpec::Zero => Some(0.0),
            DisturbanceSpec::Constant { qf_bar } => (*qf_bar == 0.0).then_some(0.0),
            DisturbanceSpec::Exponential { qf_bar, decay } => {
                if *qf_bar == 0.0 {
                    Some(0.0)
                } else if *decay > 0.0 {
                    Some(qf_bar / decay)
                } else {
                    None
                }
            }
            DisturbanceSpec::Table { times, values } => {
                if *values.last()? > 0.0 {
                    return None;
                }
                // held first value on [0, t_0] then piecewise linear
                let head = values[0] * times[0];
                let body: f64 = times
                    .windows(2)
                    .zip(values.windows(2))
                    .map(|(t, v)| 0.5 * (v[0] + v[1]) * (t[1] - t[0]))
                    .sum();
                Some(head + body)
            }
        }
    }

    /// Filtered disturbance `c ∫_0^t e^{-c(t-τ)} q_f(τ) dτ`.
    ///
    /// Closed forms for the analytic kinds; the table kind is integrated by
    /// adaptive trapezoid (with Richardson correction) between knots.
    pub fn filtered(&self, t: f64, c: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            DisturbanceSpec::Zero => 0.0,
            DisturbanceSpec::Constant { qf_bar } => -qf_bar * (-c * t).exp_m1(),
            DisturbanceSpec::Exponential { qf_bar, decay } => {
                let delta = c - decay;
                // (e^{-Kt} - e^{-ct}) / (c - K), arranged to avoid overflow and cancellation
                let kernel = if delta == 0.0 {
                    t * (-c * t).exp()
                } else if delta > 0.0 {
                    (-decay * t).exp() * -(-delta * t).exp_m1() / delta
                } else {
                    (-c * t).exp() * (delta * t).exp_m1() / delta
                };
                c * qf_bar * kernel
            }
            DisturbanceSpec::Table { times, .. } => {
                let mut breaks = vec![0.0];
                breaks.extend(times.iter().copied().filter(|&k| k > 0.0 && k < t));
                breaks.push(t);
                let f = |tau: f64| c * (-c * (t - tau)).exp() * self.eval(tau);
                breaks
                    .windows(2)
                    .map(|w| adaptive_trapezoid(&f, w[0], w[1], 1e-14, 48))
                    .sum()
            }
        }
    }
}

fn non_negative(field: &'static str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(ConfigError::invalid(field, "finite and >= 0", v))
    }
}

pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let j = xs.partition_point(|&v| v <= x);
    let (x0, x1, y0, y1) = (xs[j - 1], xs[j], ys[j - 1], ys[j]);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

fn adaptive_trapezoid(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, depth: u32) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fb: f64,
        coarse: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        let left = 0.25 * (b - a) * (fa + fm);
        let right = 0.25 * (b - a) * (fm + fb);
        let fine = left + right;
        let err = (fine - coarse) / 3.0;
        if depth == 0 || err.abs() <= tol {
            fine + err
        } else {
            recurse(f, a, m, fa, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb) = (f(a), f(b));
    let coarse = 0.5 * (b - a) * (fa + fb);
    let scale = coarse.abs().max(f64::MIN_POSITIVE);
    recurse(f, a, b, fa, fb, coarse, rel_tol * scale, depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let d: DisturbanceSpec =
            serde_json::from_str(r#"{"kind": "exponential", "qf_bar": 1.0e4, "K": 5.0e-6}"#)
                .unwrap();
        assert_eq!(
            d,
            DisturbanceSpec::Exponential {
                qf_bar: 1.0e4,
                decay: 5.0e-6
            }
        );
        let z: DisturbanceSpec = serde_json::from_str(r#"{"kind": "zero"}"#).unwrap();
        assert_eq!(z, DisturbanceSpec::Zero);
    }

    #[test]
    fn integral_flags() {
        assert!(DisturbanceSpec::Zero.has_bounded_integral());
        assert!(!DisturbanceSpec::Constant { qf_bar: 5.0 }.has_bounded_integral());
        assert!(DisturbanceSpec::Constant { qf_bar: 0.0 }.has_bounded_integral());
        let e = DisturbanceSpec::Exponential {
            qf_bar: 1e3,
            decay: 5e-6,
        };
        assert_eq!(e.total_integral(), Some(1e3 / 5e-6));
        let t = DisturbanceSpec::Table {
            times: vec![0.0, 10.0],
            values: vec![4.0, 0.0],
        };
        assert_eq!(t.total_integral(), Some(20.0));
    }

    #[test]
    fn sup_values() {
        let t = DisturbanceSpec::Table {
            times: vec![0.0, 1.0, 2.0],
            values: vec![1.0, 7.0, 3.0],
        };
        assert_eq!(t.sup(), 7.0);
        assert_eq!(t.eval(0.5), 4.0);
        assert_eq!(t.eval(5.0), 3.0);
        assert_eq!(
            DisturbanceSpec::Exponential {
                qf_bar: 1e4,
                decay: 1.0
            }
            .sup(),
            1e4
        );
    }

    #[test]
    fn rejects_negative_samples() {
        let t = DisturbanceSpec::Table {
            times: vec![0.0, 1.0],
            values: vec![1.0, -1.0],
        };
        assert!(t.validate().is_err());
        assert!(DisturbanceSpec::Constant { qf_bar: -1.0 }
            .validate()
            .is_err());
    }

    #[test]
    fn filtered_constant_matches_quadrature() {
        let c = 5e-3;
        let q = 1234.5;
        let closed = DisturbanceSpec::Constant { qf_bar: q };
        let table = DisturbanceSpec::Table {
            times: vec![0.0, 1.0e6],
            values: vec![q, q],
        };
        for t in [0.1, 10.0, 250.0, 4000.0] {
            let a = closed.filtered(t, c);
            let b = table.filtered(t, c);
            let expected = q * (1.0 - (-c * t).exp());
            assert!(((a - expected) / expected).abs() < 1e-13);
            assert!(((a - b) / a).abs() < 1e-10, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn filtered_exponential_matches_quadrature() {
        for (c, k) in [(5e-3, 5e-6), (1e-3, 2e-3), (2e-3, 2e-3)] {
            let spec = DisturbanceSpec::Exponential {
                qf_bar: 1e3,
                decay: k,
            };
            for t in [1.0, 300.0, 5000.0] {
                // midpoint-refined Simpson with many panels as an independent check
                let n = 20_000;
                let h = t / n as f64;
                let f = |tau: f64| c * (-c * (t - tau)).exp() * 1e3 * (-k * tau).exp();
                let mut s = f(0.0) + f(t);
                for i in 1..n {
                    s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
                }
                let simpson = s * h / 3.0;
                let got = spec.filtered(t, c);
                assert!(
                    ((got - simpson) / simpson).abs() < 1e-10,
                    "c={c} K={k} t={t}"
                );
            }
        }
    }
}
