//! Material constants of a single phase and the coefficients derived from them.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Physical constants of one material phase, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseProperties {
    /// Density ρ, kg/m³.
    pub density: f64,
    /// Latent heat of fusion ΔH*, J/kg.
    pub latent_heat: f64,
    /// Specific heat capacity C_p, J/(kg·K).
    pub heat_capacity: f64,
    /// Thermal conductivity k, W/(m·K).
    pub conductivity: f64,
}

impl PhaseProperties {
    pub fn new(
        density: f64,
        latent_heat: f64,
        heat_capacity: f64,
        conductivity: f64,
    ) -> Result<Self, ConfigError> {
        let p = PhaseProperties {
            density,
            latent_heat,
            heat_capacity,
            conductivity,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fields = [
            ("density", self.density),
            ("latent_heat", self.latent_heat),
            ("heat_capacity", self.heat_capacity),
            ("conductivity", self.conductivity),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::invalid(name, "finite and > 0", v));
            }
        }
        Ok(())
    }

    /// Volumetric heat capacity ρ C_p, which equals k/α.
    pub fn volumetric_heat_capacity(&self) -> f64 {
        self.density * self.heat_capacity
    }

    pub fn coefficients(&self) -> DerivedCoefficients {
        derive_coefficients(self)
    }
}

/// Diffusivity and interface coefficients of a phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedCoefficients {
    /// α = k/(ρ C_p), m²/s.
    pub alpha: f64,
    /// β = k/(ρ ΔH*), m²/(s·K).
    pub beta: f64,
    /// γ = ρ ΔH*, J/m³ (volumetric latent heat).
    pub gamma: f64,
}

pub fn derive_coefficients(p: &PhaseProperties) -> DerivedCoefficients {
    DerivedCoefficients {
        alpha: p.conductivity / (p.density * p.heat_capacity),
        beta: p.conductivity / (p.density * p.latent_heat),
        gamma: p.density * p.latent_heat,
    }
}
