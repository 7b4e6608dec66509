//! Physical constants, dimensionless thermal ratios and bath occupations.
//!
//! Everything downstream works with `x = ħω/(k_B T)`; SI quantities are
//! converted once, here.

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// The pair of constants used for every SI conversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_b: f64,
}

impl PhysicalConstants {
    /// 2019 SI values.
    pub const SI: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        k_b: K_B,
    };
}

/// Particle statistics shared by the oscillator and both baths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Fermionic,
    Bosonic,
}

impl Statistics {
    /// Thermal occupation at dimensionless energy `x`.
    pub fn occupation(self, x: f64) -> Result<f64> {
        match self {
            Statistics::Fermionic => Ok(fermi_occupation(x)),
            Statistics::Bosonic => bose_occupation(x),
        }
    }
}

/// One thermal bath (emitter or collector).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirSpec {
    /// Kelvin.
    pub temperature: f64,
    /// Coupling rate γ, s⁻¹.
    pub coupling: f64,
    pub statistics: Statistics,
}

impl ReservoirSpec {
    pub fn new(temperature: f64, coupling: f64, statistics: Statistics) -> Result<Self> {
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::Domain(format!(
                "reservoir temperature must be positive, got {temperature}"
            )));
        }
        if !(coupling >= 0.0) || !coupling.is_finite() {
            return Err(Error::Domain(format!(
                "reservoir coupling must be non-negative, got {coupling}"
            )));
        }
        Ok(Self {
            temperature,
            coupling,
            statistics,
        })
    }

    /// Mean occupation of this bath at the system frequency `omega_s`.
    pub fn occupation(&self, omega_s: f64) -> Result<f64> {
        self.statistics
            .occupation(thermal_ratio(omega_s, self.temperature)?)
    }
}

/// The central oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec {
    /// Bare frequency ω_s, rad/s.
    pub omega_s: f64,
    pub statistics: Statistics,
    pub initial_occupation: f64,
}

impl SystemSpec {
    pub fn new(omega_s: f64, statistics: Statistics, initial_occupation: f64) -> Result<Self> {
        if !(omega_s > 0.0) || !omega_s.is_finite() {
            return Err(Error::Domain(format!(
                "system frequency must be positive, got {omega_s}"
            )));
        }
        let ok = match statistics {
            Statistics::Fermionic => (0.0..=1.0).contains(&initial_occupation),
            Statistics::Bosonic => initial_occupation >= 0.0 && initial_occupation.is_finite(),
        };
        if !ok {
            return Err(Error::Domain(format!(
                "initial occupation {initial_occupation} invalid for {statistics:?} statistics"
            )));
        }
        Ok(Self {
            omega_s,
            statistics,
            initial_occupation,
        })
    }
}

/// `ħω/(k_B T)`.
pub fn thermal_ratio(omega_s: f64, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    Ok(HBAR * omega_s / (K_B * temperature))
}

/// Fermi–Dirac occupation `1/(eˣ + 1)` (zero chemical potential).
pub fn fermi_occupation(x: f64) -> f64 {
    // exp(-|x|) never overflows
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Below this argument the Bose function switches to its Laurent series.
pub const BOSE_SERIES_THRESHOLD: f64 = 1e-6;

/// Bose–Einstein occupation `1/(eˣ − 1)`, defined for `x > 0`.
pub fn bose_occupation(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "Bose occupation needs a positive energy ratio, got {x}"
        )));
    }
    if x < BOSE_SERIES_THRESHOLD {
        Ok(1.0 / x - 0.5 + x / 12.0)
    } else {
        Ok(1.0 / x.exp_m1())
    }
}
