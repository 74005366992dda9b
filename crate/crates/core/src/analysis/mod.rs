//! Energy functionals, backstepping transforms, Lyapunov/ISS quantities and
//! model-validity monitoring.

pub mod energy;
pub mod envelope;
pub mod lyapunov;
pub mod transform;
pub mod validity;

pub use energy::{energy_balance_residual, internal_energy_1p, internal_energy_2p};
pub use envelope::{fit_envelope, fit_iss_envelope, IssEnvelope};
pub use lyapunov::{
    compute_epsilon, compute_lambda, decay_rate_b, epsilon_margin, lyapunov_v, lyapunov_v_2p,
    psi_norm_1p, psi_norm_2p, RateVariant,
};
pub use transform::{direct_transform, inverse_transform, KernelParams};
pub use validity::{validity_monitor, Violation, ViolationKind};
