//! Backstepping change of variables between the reference-error state
//! `(u, X)` and the target state `(w, X)`.
//!
//! Direct map: `w(x) = u(x) - (β/α) ∫_x^s φ(x-y) u(y) dy - φ(x-s) X` with
//! `φ(z) = (c/β) z - ε`. Inverse map: the same form with kernel
//! `ψ(z) = e^{rz} (p₁ sin ωz + ε cos ωz)`. Both kernels satisfy
//! `φ(0) = -ε` and `ψ(0) = ε`, so `w(s) = εX` and the inverse restores
//! `u(s) = 0`. Integrals use the trapezoid rule on the state's own grid.

use crate::error::AnalysisError;
use crate::state::OnePhaseState;

/// Transform parameter ε together with the plant constants it pairs with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    epsilon: f64,
    gain: f64,
    alpha: f64,
    beta: f64,
}

impl KernelParams {
    /// Requires `0 < ε < 2√(αc)/β`, which keeps ω real.
    pub fn new(epsilon: f64, gain: f64, alpha: f64, beta: f64) -> Result<Self, AnalysisError> {
        let bound = Self::epsilon_bound(gain, alpha, beta);
        if !(epsilon > 0.0 && epsilon < bound) {
            return Err(AnalysisError::EpsilonOutOfRange { epsilon, bound });
        }
        Ok(KernelParams {
            epsilon,
            gain,
            alpha,
            beta,
        })
    }

    pub fn epsilon_bound(gain: f64, alpha: f64, beta: f64) -> f64 {
        2.0 * (alpha * gain).sqrt() / beta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn r(&self) -> f64 {
        self.beta * self.epsilon / (2.0 * self.alpha)
    }

    pub fn omega(&self) -> f64 {
        let eb = self.epsilon * self.beta;
        ((4.0 * self.alpha * self.gain - eb * eb) / (4.0 * self.alpha * self.alpha)).sqrt()
    }

    pub fn p1(&self) -> f64 {
        let eb = self.epsilon * self.beta;
        -(2.0 * self.alpha * self.gain - eb * eb) / (2.0 * self.alpha * self.beta * self.omega())
    }

    /// Direct kernel φ(z).
    pub fn phi(&self, z: f64) -> f64 {
        self.gain / self.beta * z - self.epsilon
    }

    /// Inverse kernel ψ(z).
    pub fn psi(&self, z: f64) -> f64 {
        let w = self.omega();
        (self.r() * z).exp() * (self.p1() * (w * z).sin() + self.epsilon * (w * z).cos())
    }

    fn check(&self) -> Result<(), AnalysisError> {
        let bound = Self::epsilon_bound(self.gain, self.alpha, self.beta);
        if self.epsilon > 0.0 && self.epsilon < bound && self.omega().is_finite() {
            Ok(())
        } else {
            Err(AnalysisError::EpsilonOutOfRange {
                epsilon: self.epsilon,
                bound,
            })
        }
    }
}

/// Volterra map `v(x_i) - (β/α) ∫_{x_i}^s K(x_i - y) v(y) dy - K(x_i - s) X`
/// on a uniform grid over `[0, s]`. `kernel[k]` holds `K(-k·dx)`.
fn volterra(v: &[f64], dx: f64, x_err: f64, ratio: f64, kernel: &[f64]) -> Vec<f64> {
    let n = v.len() - 1;
    (0..=n)
        .map(|i| {
            let integral = if i == n {
                0.0
            } else {
                let mut acc = 0.5 * (kernel[0] * v[i] + kernel[n - i] * v[n]);
                for j in i + 1..n {
                    acc += kernel[j - i] * v[j];
                }
                acc * dx
            };
            v[i] - ratio * integral - kernel[n - i] * x_err
        })
        .collect()
}

/// Target-system profile `w` on the state's grid; `x_err = s - s_r`.
pub fn direct_transform(state: &OnePhaseState, x_err: f64, kp: &KernelParams) -> Vec<f64> {
    direct_transform_profile(&state.u, state.s, x_err, kp)
}

pub fn direct_transform_profile(u: &[f64], s: f64, x_err: f64, kp: &KernelParams) -> Vec<f64> {
    let n = u.len() - 1;
    let dx = s / n as f64;
    let kernel: Vec<f64> = (0..=n).map(|k| kp.phi(-(k as f64) * dx)).collect();
    volterra(u, dx, x_err, kp.beta / kp.alpha, &kernel)
}

/// Recovers `u` from the target profile `w` on `[0, s]`.
pub fn inverse_transform(
    w: &[f64],
    s: f64,
    x_err: f64,
    kp: &KernelParams,
) -> Result<Vec<f64>, AnalysisError> {
    kp.check()?;
    let n = w.len() - 1;
    let dx = s / n as f64;
    let kernel: Vec<f64> = (0..=n).map(|k| kp.psi(-(k as f64) * dx)).collect();
    Ok(volterra(w, dx, x_err, kp.beta / kp.alpha, &kernel))
}
