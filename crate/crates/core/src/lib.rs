//! Simulation and verification toolkit for the one- and two-phase Stefan
//! problem under backstepping boundary feedback with an unknown heat loss.
//!
//! The crate is organised around a few layers:
//!
//! - [`params`], [`profile`], [`disturbance`], [`scenario`], [`state`]: value
//!   types describing the physics, the initial data and a full run
//!   configuration, plus the assumption gate in [`assumptions`].
//! - [`solver`]: explicit finite-difference integration on boundary
//!   immobilized grids (`ξ = x/s` for the liquid, `η = (x-s)/(L-s)` for the
//!   solid).
//! - [`control`]: closed-loop backstepping flux laws and their open-loop
//!   equivalent.
//! - [`analysis`]: internal energy, backstepping transforms, Lyapunov and
//!   ISS functionals, envelope fitting and model-validity monitoring.
//! - [`report`] and [`io`]: run orchestration, CSV/JSON artifacts used by the
//!   `stefan-iss` binary and the C bindings.
//!
//! All temperatures are stored relative to the melting point (`T - T_m`),
//! in SI units throughout.

pub mod analysis;
pub mod assumptions;
pub mod control;
pub mod disturbance;
pub mod error;
pub mod io;
pub mod numerics;
pub mod oracle;
pub mod params;
pub mod profile;
pub mod report;
pub mod scenario;
pub mod solver;
pub mod state;
pub mod trajectory;

pub use assumptions::{check_assumptions, AssumptionEntry, AssumptionReport, AssumptionStatus};
pub use control::{ControlMode, ControllerConfig};
pub use disturbance::DisturbanceSpec;
pub use error::{AnalysisError, ConfigError, Error, StepError};
pub use params::{derive_coefficients, DerivedCoefficients, PhaseProperties};
pub use profile::InitialProfile;
pub use scenario::{ControllerKind, Scenario, SolidPhase, TimeStepping};
pub use state::{OnePhaseState, TwoPhaseState};
pub use trajectory::{Diagnostics, Snapshot, Termination, Trajectory, Variant};
