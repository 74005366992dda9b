//! Lyapunov functional, L2 reference-error norms and the explicit ISS rate.

use crate::numerics::trapezoid_sq;
use crate::params::DerivedCoefficients;
use crate::state::{OnePhaseState, TwoPhaseState};

use super::transform::{direct_transform, direct_transform_profile, KernelParams};

/// `g(ε) = c/(8β) - ε/(4 s_r) - (β/α)(64 c s_r²/α + 3) ε²`; positive on `(0, ε*)`.
pub fn epsilon_margin(eps: f64, coeffs: &DerivedCoefficients, gain: f64, setpoint: f64) -> f64 {
    let (a, b) = (coeffs.alpha, coeffs.beta);
    let shape = 64.0 * gain * setpoint * setpoint / a + 3.0;
    gain / (8.0 * b) - eps / (4.0 * setpoint) - b / a * shape * eps * eps
}

/// Positive root ε* of `g`.
pub fn epsilon_star(coeffs: &DerivedCoefficients, gain: f64, setpoint: f64) -> f64 {
    let (a, b) = (coeffs.alpha, coeffs.beta);
    let quad = b / a * (64.0 * gain * setpoint * setpoint / a + 3.0);
    let lin = 1.0 / (4.0 * setpoint);
    let constant = gain / (8.0 * b);
    // 2C / (B + sqrt(B² + 4AC)) avoids cancellation in the textbook formula
    2.0 * constant / (lin + (lin * lin + 4.0 * quad * constant).sqrt())
}

/// Transform parameter used for the Lyapunov certificate: half of the
/// tightest of ε*, `α / (8 β s_r (64 c s_r²/α + 3))` and the ω-reality
/// bound `2√(αc)/β` (the latter shrunk by 1e-6).
pub fn compute_epsilon(coeffs: &DerivedCoefficients, gain: f64, setpoint: f64) -> f64 {
    let (a, b) = (coeffs.alpha, coeffs.beta);
    let shape = 64.0 * gain * setpoint * setpoint / a + 3.0;
    let second = a / (8.0 * b * setpoint * shape);
    let reality = KernelParams::epsilon_bound(gain, a, b) * (1.0 - 1e-6);
    0.5 * epsilon_star(coeffs, gain, setpoint)
        .min(second)
        .min(reality)
}

/// `V = ||w||² / (2α) + ε X² / (2β)` with `w` the direct transform of `u`.
pub fn lyapunov_v(state: &OnePhaseState, x_err: f64, kp: &KernelParams) -> f64 {
    let w = direct_transform(state, x_err, kp);
    quadratic_form(&w, state.dx(), x_err, kp)
}

/// Two-phase variant on the reduced system: the liquid profile with
/// `X = s - s_r + (β_s/α_s) ∫_s^L u_s dx`, where `β_s/α_s = ρ_s C_s / γ`.
pub fn lyapunov_v_2p(
    state: &TwoPhaseState,
    setpoint: f64,
    solid_heat_ratio: f64,
    kp: &KernelParams,
) -> f64 {
    let x_err = state.s - setpoint + solid_heat_ratio * state.solid_integral();
    let w = direct_transform_profile(&state.liquid, state.s, x_err, kp);
    quadratic_form(&w, state.liquid_dx(), x_err, kp)
}

fn quadratic_form(w: &[f64], dx: f64, x_err: f64, kp: &KernelParams) -> f64 {
    trapezoid_sq(w, dx) / (2.0 * kp.alpha()) + kp.epsilon() * x_err * x_err / (2.0 * kp.beta())
}

/// `Ψ = (∫_0^s u² dx + (s - s_r)²)^{1/2}`.
pub fn psi_norm_1p(state: &OnePhaseState, setpoint: f64) -> f64 {
    let d = state.s - setpoint;
    (state.integral_sq() + d * d).sqrt()
}

/// `Ψ = (∫_0^s u_l² dx + ∫_s^L u_s² dx + (s - s_r)²)^{1/2}`.
pub fn psi_norm_2p(state: &TwoPhaseState, setpoint: f64) -> f64 {
    let d = state.s - setpoint;
    (state.liquid_integral_sq() + state.solid_integral_sq() + d * d).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateVariant {
    OnePhase {
        alpha: f64,
        setpoint: f64,
    },
    TwoPhase {
        alpha_liquid: f64,
        alpha_solid: f64,
        length: f64,
    },
}

/// Explicit exponential ISS rate λ.
pub fn compute_lambda(variant: RateVariant, gain: f64) -> f64 {
    match variant {
        RateVariant::OnePhase { alpha, setpoint } => {
            (alpha / (setpoint * setpoint)).min(gain) / 32.0
        }
        RateVariant::TwoPhase {
            alpha_liquid,
            alpha_solid,
            length,
        } => {
            let l2 = length * length;
            (alpha_liquid / l2).min(2.0 * alpha_solid / l2).min(gain) / 32.0
        }
    }
}

/// Decay rate `b = (1/8) min{α/ℓ², c}` of the target-system functional,
/// with ℓ = s_r (one-phase) or L (two-phase, liquid branch only).
pub fn decay_rate_b(variant: RateVariant, gain: f64) -> f64 {
    match variant {
        RateVariant::OnePhase { alpha, setpoint } => {
            (alpha / (setpoint * setpoint)).min(gain) / 8.0
        }
        RateVariant::TwoPhase {
            alpha_liquid,
            length,
            ..
        } => (alpha_liquid / (length * length)).min(gain) / 8.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive_coefficients, PhaseProperties};

    fn zinc() -> DerivedCoefficients {
        derive_coefficients(&PhaseProperties::new(6570.0, 111_961.0, 389.5687, 116.0).unwrap())
    }

    #[test]
    fn epsilon_star_is_root() {
        let c = zinc();
        let star = epsilon_star(&c, 5e-3, 0.35);
        let g0 = 5e-3 / (8.0 * c.beta);
        assert!((epsilon_margin(star, &c, 5e-3, 0.35) / g0).abs() < 1e-12);
        let eps = compute_epsilon(&c, 5e-3, 0.35);
        assert!(eps > 0.0 && eps < star);
        assert!(epsilon_margin(eps, &c, 5e-3, 0.35) > 0.0);
        assert!(KernelParams::new(eps, 5e-3, c.alpha, c.beta).is_ok());
    }

    #[test]
    fn zinc_epsilon_value() {
        // Independent evaluation of the three bounds from Table constants.
        let alpha = 116.0 / (6570.0 * 389.5687);
        let beta = 116.0 / (6570.0 * 111_961.0);
        let (c, sr) = (5e-3_f64, 0.35_f64);
        let shape = 64.0 * c * sr * sr / alpha + 3.0;
        let qa = beta / alpha * shape;
        let qb = 1.0 / (4.0 * sr);
        let qc = c / (8.0 * beta);
        let star = (-qb + (qb * qb + 4.0 * qa * qc).sqrt()) / (2.0 * qa);
        let second = alpha / (8.0 * beta * sr * shape);
        let expected = 0.5 * star.min(second);
        let got = compute_epsilon(&zinc(), c, sr);
        assert!(
            ((got - expected) / expected).abs() < 1e-9,
            "{got} vs {expected}"
        );
        // the geometric bound is the tight one for zinc
        assert!(second < star);
        assert!((got - 0.5 * second).abs() < 1e-15);
    }

    #[test]
    fn lambda_examples() {
        let a = zinc().alpha;
        let l = compute_lambda(
            RateVariant::OnePhase {
                alpha: a,
                setpoint: 0.35,
            },
            5e-3,
        );
        assert!(a / 0.1225 < 5e-3);
        assert!((l - a / (0.35 * 0.35) / 32.0).abs() < 1e-15 * l);
        // tie
        let tie = compute_lambda(
            RateVariant::OnePhase {
                alpha: 2.0,
                setpoint: 1.0,
            },
            2.0,
        );
        assert_eq!(tie, 2.0 / 32.0);
        // huge solid diffusivity drops out
        let two = compute_lambda(
            RateVariant::TwoPhase {
                alpha_liquid: 1e-4,
                alpha_solid: 1e30,
                length: 0.5,
            },
            1.0,
        );
        assert_eq!(two, 1e-4 / 0.25 / 32.0);
    }

    #[test]
    fn lambda_is_quarter_of_b() {
        for (alpha, sr, c) in [(4.5e-5, 0.35, 5e-3), (1.0, 0.1, 0.3), (2.0, 1.0, 2.0)] {
            let v = RateVariant::OnePhase {
                alpha,
                setpoint: sr,
            };
            let l = compute_lambda(v, c);
            assert!((l - decay_rate_b(v, c) / 4.0).abs() <= 1e-15 * l);
        }
    }

    #[test]
    fn psi_examples() {
        let zero = OnePhaseState::new(0.0, 0.35, vec![0.0; 11]).unwrap();
        assert_eq!(psi_norm_1p(&zero, 0.35), 0.0);
        let off = OnePhaseState::new(0.0, 0.2, vec![0.0; 11]).unwrap();
        assert!((psi_norm_1p(&off, 0.35) - 0.15).abs() < 1e-15);
        let two = TwoPhaseState::new(0.0, 0.2, vec![0.0; 11], vec![0.0; 9], 0.5).unwrap();
        assert_eq!(psi_norm_2p(&two, 0.35), psi_norm_1p(&off, 0.35));
    }

    #[test]
    fn v_zero_and_homogeneous() {
        let c = zinc();
        let kp = KernelParams::new(0.05, 5e-3, c.alpha, c.beta).unwrap();
        let zero = OnePhaseState::new(0.0, 0.3, vec![0.0; 21]).unwrap();
        assert_eq!(lyapunov_v(&zero, 0.0, &kp), 0.0);
        let u: Vec<f64> = (0..=20).map(|i| (20 - i) as f64 * 0.3).collect();
        let st = OnePhaseState::new(0.0, 0.3, u.clone()).unwrap();
        let v1 = lyapunov_v(&st, -0.05, &kp);
        let scaled = OnePhaseState::new(0.0, 0.3, u.iter().map(|x| 3.0 * x).collect()).unwrap();
        let v3 = lyapunov_v(&scaled, -0.15, &kp);
        assert!(v1 > 0.0);
        assert!((v3 / v1 - 9.0).abs() < 1e-10);
    }
}
