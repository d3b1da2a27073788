//! Physical constants, scenario inputs and the dimensionless parameters
//! derived from them.
//!
//! Every frequency is an angular frequency in rad/s. The dynamics work in
//! reduced units where frequencies are measured in multiples of the mode
//! spacing `Δω = πc/R`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Fundamental constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light, m/s.
    pub c: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Fine-structure constant.
    pub alpha: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values.
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        c: 299_792_458.0,
        hbar: 1.054_571_817e-34,
        k_b: 1.380_649e-23,
        alpha: 7.297_352_569_3e-3,
    };

    pub fn new(c: f64, hbar: f64, k_b: f64, alpha: f64) -> Result<Self> {
        for (name, v) in [("c", c), ("hbar", hbar), ("k_b", k_b), ("alpha", alpha)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidScenario(format!(
                    "constant {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            c,
            hbar,
            k_b,
            alpha,
        })
    }

    /// `ħω/(k_B T)`, or `+∞` at `T = 0`.
    pub fn thermal_exponent(&self, omega: f64, temperature: f64) -> f64 {
        if temperature == 0.0 {
            return f64::INFINITY;
        }
        self.hbar * omega / (self.k_b * temperature)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// `ħω/(k_B T)` with CODATA constants; `+∞` marks the zero-temperature limit.
pub fn thermal_exponent(omega: f64, temperature: f64) -> f64 {
    PhysicalConstants::CODATA.thermal_exponent(omega, temperature)
}

/// An atom of renormalized frequency `ω̄` inside a spherical cavity of radius
/// `R` held at temperature `T`.
///
/// Immutable once built. The derived fields are computed in one place so that
/// rebuilding from the primary inputs reproduces them bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityScenario {
    constants: PhysicalConstants,
    omega_bar: f64,
    radius: f64,
    temperature: f64,
    coupling: f64,
    n0_initial: f64,
    delta_omega: f64,
    delta: f64,
    eta_sq: f64,
    eta: f64,
}

/// Builds a scenario with CODATA constants. `coupling` defaults to the weak
/// coupling `g = ω̄α` and `n0_initial` to one quantum.
pub fn build_scenario(
    omega_bar: f64,
    radius: f64,
    temperature: f64,
    coupling: Option<f64>,
    n0_initial: Option<f64>,
) -> Result<CavityScenario> {
    CavityScenario::with_constants(
        PhysicalConstants::CODATA,
        omega_bar,
        radius,
        temperature,
        coupling,
        n0_initial,
    )
}

impl CavityScenario {
    pub fn with_constants(
        constants: PhysicalConstants,
        omega_bar: f64,
        radius: f64,
        temperature: f64,
        coupling: Option<f64>,
        n0_initial: Option<f64>,
    ) -> Result<Self> {
        let constants =
            PhysicalConstants::new(constants.c, constants.hbar, constants.k_b, constants.alpha)?;
        let coupling = coupling.unwrap_or(omega_bar * constants.alpha);
        let n0_initial = n0_initial.unwrap_or(1.0);

        positive("omega_bar", omega_bar)?;
        positive("radius", radius)?;
        positive("coupling", coupling)?;
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::InvalidScenario(format!(
                "temperature must be non-negative, got {temperature}"
            )));
        }
        if !(n0_initial.is_finite() && n0_initial >= 0.0) {
            return Err(Error::InvalidScenario(format!(
                "n0_initial must be non-negative, got {n0_initial}"
            )));
        }

        let delta_omega = PI * constants.c / radius;
        let delta = coupling * radius / (PI * constants.c);
        let eta_sq = 2.0 * coupling * delta_omega;
        Ok(Self {
            constants,
            omega_bar,
            radius,
            temperature,
            coupling,
            n0_initial,
            delta_omega,
            delta,
            eta_sq,
            eta: eta_sq.sqrt(),
        })
    }

    /// Rebuilds from the primary inputs.
    pub fn rebuild(&self) -> Result<Self> {
        Self::with_constants(
            self.constants,
            self.omega_bar,
            self.radius,
            self.temperature,
            Some(self.coupling),
            Some(self.n0_initial),
        )
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        Self::with_constants(
            self.constants,
            self.omega_bar,
            self.radius,
            temperature,
            Some(self.coupling),
            Some(self.n0_initial),
        )
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }
    pub fn omega_bar(&self) -> f64 {
        self.omega_bar
    }
    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn temperature(&self) -> f64 {
        self.temperature
    }
    pub fn coupling(&self) -> f64 {
        self.coupling
    }
    pub fn n0_initial(&self) -> f64 {
        self.n0_initial
    }
    /// Mode spacing `πc/R`, rad/s.
    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }
    /// Dimensionless coupling `gR/(πc)`.
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    /// `η² = 2gΔω`, stored exactly.
    pub fn eta_sq(&self) -> f64 {
        self.eta_sq
    }

    /// `ω̄/Δω`, the atom frequency in units of the mode spacing.
    pub fn reduced_atom_frequency(&self) -> f64 {
        self.omega_bar / self.delta_omega
    }

    /// `δω̄²/g²`; the small-cavity ordering needs this above one.
    pub fn kappa(&self) -> f64 {
        self.delta * (self.omega_bar / self.coupling).powi(2)
    }

    /// `ħω/(k_B T)` at this scenario's temperature.
    pub fn thermal_exponent(&self, omega: f64) -> f64 {
        self.constants.thermal_exponent(omega, self.temperature)
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidScenario(format!(
            "{name} must be positive, got {v}"
        )))
    }
}
